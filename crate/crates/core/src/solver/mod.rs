//! Lowest eigenpairs of sector Hamiltonians.

pub mod dense;
pub mod lanczos;
pub mod tridiagonal;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{SectorBasis, DEFAULT_MAX_DIM};
use crate::hamiltonian::{build, ModelParams, SparseOperator};
use crate::lattice::LatticeGraph;

/// Anything that can compute `y = A x` for a real symmetric `A`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for SparseOperator {
    fn dim(&self) -> usize {
        SparseOperator::dim(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        SparseOperator::apply(self, x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit vectors; the largest-magnitude amplitude of each is positive.
    pub eigenvectors: Vec<Vec<f64>>,
    /// ‖H v − λ v‖ for each pair.
    pub residuals: Vec<f64>,
    /// Matrix-vector products spent (zero for the dense path).
    pub iterations: usize,
    pub method: Method,
    /// Lowest Ritz value after each Lanczos step, one list per locked pair.
    pub ritz_history: Vec<Vec<f64>>,
}

impl EigenResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// E₁ − E₀, if at least two pairs were computed.
    pub fn gap(&self) -> Option<f64> {
        (self.eigenvalues.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_DENSE_THRESHOLD: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub method: Method,
    /// Relative residual tolerance: ‖Hv − λv‖ ≤ tol · max(1, |λ|).
    pub tol: f64,
    pub seed: u64,
    /// `Auto` picks dense at or below this dimension.
    pub dense_threshold: usize,
    pub max_iterations: usize,
    pub max_dim: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: Method::Auto,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            max_iterations: 50_000,
            max_dim: DEFAULT_MAX_DIM as u64,
        }
    }
}

impl SolverOptions {
    pub fn with_method(self, method: Method) -> Self {
        SolverOptions { method, ..self }
    }
}

fn dense_lowest(op: &SparseOperator, k: usize) -> EigenResult {
    let eig = dense::symmetric_eigen(op.to_dense());
    let mut order: Vec<usize> = (0..op.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let mut out = EigenResult {
        eigenvalues: Vec::with_capacity(k),
        eigenvectors: Vec::with_capacity(k),
        residuals: Vec::with_capacity(k),
        iterations: 0,
        method: Method::Dense,
        ritz_history: Vec::new(),
    };
    let mut hv = vec![0.0; op.dim()];
    for &i in order.iter().take(k) {
        let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        lanczos::fix_gauge(&mut v);
        let lambda = eig.eigenvalues[i];
        op.apply(&v, &mut hv);
        let res = hv
            .iter()
            .zip(&v)
            .map(|(h, x)| (h - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        out.eigenvalues.push(lambda);
        out.eigenvectors.push(v);
        out.residuals.push(res);
    }
    out
}

/// The `k` lowest eigenpairs of `op` with default options.
pub fn solve_lowest(op: &SparseOperator, k: usize, tol_eig: f64, seed: u64) -> Result<EigenResult> {
    let opts = SolverOptions {
        tol: tol_eig,
        seed,
        ..SolverOptions::default()
    };
    solve_lowest_with(op, k, &opts)
}

pub fn solve_lowest_with(op: &SparseOperator, k: usize, opts: &SolverOptions) -> Result<EigenResult> {
    if k == 0 || k > op.dim() {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs of a {}-dimensional operator",
            op.dim()
        )));
    }
    let dense = match opts.method {
        Method::Dense => true,
        Method::Lanczos => false,
        Method::Auto => op.dim() <= opts.dense_threshold,
    };
    if dense {
        Ok(dense_lowest(op, k))
    } else {
        lanczos::lowest(op, k, opts.tol, opts.seed, opts.max_iterations)
    }
}

/// Outcome of one sector in a [`sector_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorEnergy {
    pub n_up: usize,
    pub n_down: usize,
    pub dim: u128,
    pub e0: Option<f64>,
    pub error: Option<String>,
    #[serde(skip)]
    pub no_convergence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorScan {
    pub n_total: usize,
    pub rows: Vec<SectorEnergy>,
    /// Sector with the lowest E₀; ties go to the smaller n_up.
    pub minimizer: Option<(usize, usize)>,
    /// Lowest E₀ among the other sectors minus the global E₀.
    pub margin: Option<f64>,
    /// E₀ and E₁ − E₀ inside the balanced sector (N/2, N/2).
    pub balanced_e0: Option<f64>,
    pub balanced_gap: Option<f64>,
}

impl SectorScan {
    pub fn any_no_convergence(&self) -> bool {
        self.rows.iter().any(|r| r.no_convergence)
    }
}

/// Lowest energy in every sector with `n_up + n_down = n_total`. Sectors are
/// solved in parallel; a failed sector is recorded and the scan continues.
pub fn sector_scan(
    params: &ModelParams,
    lattice: &LatticeGraph,
    n_total: usize,
    opts: &SolverOptions,
) -> Result<SectorScan> {
    let m = lattice.num_sites();
    if !n_total.is_multiple_of(2) || n_total > 2 * m {
        return Err(Error::InvalidParameter(format!(
            "electron count {n_total} must be even and at most {}",
            2 * m
        )));
    }
    let half = n_total / 2;
    let sectors: Vec<(usize, usize)> = (n_total.saturating_sub(m)..=n_total.min(m))
        .map(|nu| (nu, n_total - nu))
        .collect();
    let solved: Vec<(SectorEnergy, Option<f64>)> = sectors
        .par_iter()
        .map(|&(nu, nd)| {
            let dim = crate::fock::sector_dimension(m, nu, nd);
            let attempt = || -> Result<EigenResult> {
                let basis = SectorBasis::with_max_dim(m, nu, nd, opts.max_dim.into())?;
                let h = build(params, lattice, &basis)?;
                let k = if (nu, nd) == (half, half) { 2.min(basis.dim()) } else { 1 };
                solve_lowest_with(&h, k, opts)
            };
            match attempt() {
                Ok(res) => (
                    SectorEnergy {
                        n_up: nu,
                        n_down: nd,
                        dim,
                        e0: Some(res.ground_energy()),
                        error: None,
                        no_convergence: false,
                    },
                    res.gap(),
                ),
                Err(e) => (
                    SectorEnergy {
                        n_up: nu,
                        n_down: nd,
                        dim,
                        e0: None,
                        no_convergence: matches!(e, Error::NoConvergence { .. }),
                        error: Some(e.to_string()),
                    },
                    None,
                ),
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(solved.len());
    let mut balanced_gap = None;
    for (row, gap) in solved {
        if (row.n_up, row.n_down) == (half, half) {
            balanced_gap = gap;
        }
        rows.push(row);
    }
    let mut ranked: Vec<&SectorEnergy> = rows.iter().filter(|r| r.e0.is_some()).collect();
    ranked.sort_by(|a, b| a.e0.unwrap().total_cmp(&b.e0.unwrap()).then(a.n_up.cmp(&b.n_up)));
    let minimizer = ranked.first().map(|r| (r.n_up, r.n_down));
    let margin = match ranked.as_slice() {
        [a, b, ..] => Some(b.e0.unwrap() - a.e0.unwrap()),
        _ => None,
    };
    let balanced_e0 = rows
        .iter()
        .find(|r| (r.n_up, r.n_down) == (half, half))
        .and_then(|r| r.e0);
    Ok(SectorScan {
        n_total,
        rows,
        minimizer,
        margin,
        balanced_e0,
        balanced_gap,
    })
}
