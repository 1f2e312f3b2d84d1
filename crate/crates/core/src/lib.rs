//! Exact diagonalization of the symmetric periodic Anderson model on
//! bipartite lattices.
//!
//! The model is written on a two-layer lattice (conduction layer plus
//! localized layer) as a generalized Hubbard model. The crate builds the
//! sector Hamiltonians in a fixed-(N↑, N↓) Fock basis, finds low-lying states
//! with Lanczos or dense diagonalization, measures spin and pair correlations,
//! and checks the ground-state theorems numerically: uniqueness at half
//! filling, positive pair correlations in the attractive frame, and the
//! antiferromagnetic sign pattern of the spin correlations.
//!
//! ```
//! use std::sync::Arc;
//! use pam_ed::prelude::*;
//!
//! let lattice = layer_double(&build_chain(2, Boundary::Open)?, 1.0, 1.0)?;
//! let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
//! let basis = Arc::new(SectorBasis::new(lattice.num_sites(), 2, 2)?);
//! let h = build_hubbardized(&params, &lattice, &basis)?;
//! let ground = solve_lowest(&h, 2, 1e-10, 7)?;
//! assert!(ground.gap().unwrap() > 0.0);
//! # Ok::<(), pam_ed::Error>(())
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod lattice;
pub mod observables;
pub mod solver;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::fock::{LadderOp, SectorBasis, Spin, StateVector};
    pub use crate::hamiltonian::{build, build_hubbardized, build_original, Form, ModelParams, SparseOperator};
    pub use crate::lattice::{build_chain, build_square, layer_double, Boundary, LatticeGraph, Sublattice};
    pub use crate::observables::{correlation_matrix, extract_w, total_spin_squared, CorrelationKind};
    pub use crate::solver::{sector_scan, solve_lowest, solve_lowest_with, EigenResult, Method, SolverOptions};
    pub use crate::symmetry::particle_hole_map;
    pub use crate::verify::{run_suite, VerificationReport};
}
