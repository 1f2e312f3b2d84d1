//! The down-spin particle-hole map: it sends H̃(ε, U) to H̃(−ε, −U), so the
//! two spectra coincide and the pair correlations of the attractive ground
//! state turn into staggered transverse spin correlations.

use std::sync::Arc;

use pam_ed::fock::{SectorBasis, StateVector};
use pam_ed::hamiltonian::{build_hubbardized, ModelParams};
use pam_ed::lattice::{build_chain, layer_double, Boundary};
use pam_ed::observables::{correlation_matrix, CorrelationKind};
use pam_ed::solver::{solve_lowest_with, SolverOptions};
use pam_ed::symmetry::{involution_sign, particle_hole_map, transport_pair_to_transverse, verify_spectrum_equivalence};

fn main() -> pam_ed::Result<()> {
    let lattice = layer_double(&build_chain(2, Boundary::Open)?, 1.0, 1.0)?;
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
    let opts = SolverOptions::default();

    for sector in [(2, 2), (1, 3), (3, 1)] {
        let r = verify_spectrum_equivalence(&params, &lattice, sector, 6, &opts)?;
        println!(
            "sector {:?} -> {:?}: max level difference {:.1e}, transported residual {:.1e}",
            r.sector, r.image_sector, r.max_eigenvalue_diff, r.transport_residual
        );
    }

    let basis = Arc::new(SectorBasis::new(4, 2, 2)?);
    let map = particle_hole_map(&basis, lattice.sublattices())?;
    println!("first basis states and their images:");
    for i in 0..4 {
        let (j, s) = map.entry(i);
        println!("  {:?} -> {s:+} x {:?}", basis.config(i), map.image().config(j));
    }
    println!("U0^2 on this sector = {:?} x identity", involution_sign(&basis, lattice.sublattices())?);

    let solve = |p: &ModelParams| -> pam_ed::Result<StateVector> {
        let h = build_hubbardized(p, &lattice, &basis)?;
        StateVector::new(basis.clone(), solve_lowest_with(&h, 1, &opts)?.eigenvectors[0].clone())
    };
    let repulsive = solve(&params)?;
    let attractive = solve(&params.negated())?;
    let direct = correlation_matrix(&repulsive, CorrelationKind::Transverse);
    let carried = transport_pair_to_transverse(&correlation_matrix(&attractive, CorrelationKind::Pair), lattice.sublattices());
    println!("transverse vs transported pair correlations: max difference {:.1e}", direct.max_abs_diff(&carried));
    Ok(())
}
