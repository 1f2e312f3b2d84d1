use thiserror::Error;

use crate::solver::EigenResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The hopping graph contains an odd cycle; `cycle` lists its sites in order.
    #[error("lattice is not bipartite: odd cycle through sites {cycle:?}")]
    NonBipartite { cycle: Vec<usize> },

    #[error("periodic boundary with extent {extent} would duplicate a bond")]
    DegenerateBond { extent: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sector dimension {dim} exceeds the configured maximum {max}")]
    CapacityExceeded { dim: u128, max: u128 },

    #[error("word {word:#b} has {found} set bits, expected {expected}")]
    BadPopcount { word: u32, expected: u32, found: u32 },

    #[error("basis has {basis_sites} sites but the lattice has {lattice_sites}")]
    SectorMismatch { basis_sites: usize, lattice_sites: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge within {max_iterations} iterations")]
    NoConvergence {
        max_iterations: usize,
        partial: Box<EigenResult>,
    },

    #[error("site {site} out of range for {num_sites} sites")]
    SiteOutOfRange { site: usize, num_sites: usize },

    #[error("W matrix needs n_up == n_down, got ({n_up}, {n_down})")]
    NonSquareSector { n_up: usize, n_down: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
