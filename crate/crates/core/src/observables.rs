//! Ground-state measurements: spin and pair correlations, total spin, and the
//! up/down coefficient matrix W.
//!
//! Spin operators follow the usual SU(2) realization
//! `S₊ = f†↑ f↓`, `S₋ = f†↓ f↑`, `S_z = ½(n↑ − n↓)`. The x and y products are
//! expanded in S₊ and S₋, so every quantity is real on a real state.

use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_string, LadderOp, SectorBasis, Spin, StateVector};

/// `coeff · ops`, with `ops` written left to right (rightmost acts first).
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub ops: Vec<LadderOp>,
}

impl Term {
    pub fn new(coeff: f64, ops: Vec<LadderOp>) -> Self {
        Term { coeff, ops }
    }
}

pub fn s_plus(site: usize) -> Vec<LadderOp> {
    vec![LadderOp::create(Spin::Up, site), LadderOp::annihilate(Spin::Down, site)]
}

pub fn s_minus(site: usize) -> Vec<LadderOp> {
    vec![LadderOp::create(Spin::Down, site), LadderOp::annihilate(Spin::Up, site)]
}

fn number(spin: Spin, site: usize) -> Vec<LadderOp> {
    vec![LadderOp::create(spin, site), LadderOp::annihilate(spin, site)]
}

fn product(a: &[LadderOp], b: &[LadderOp]) -> Vec<LadderOp> {
    [a, b].concat()
}

/// ⟨ψ| Σ terms |ψ⟩. Terms that leave the state's sector contribute nothing.
pub fn expectation(state: &StateVector, terms: &[Term]) -> f64 {
    let basis = state.basis();
    let amps = state.amps();
    let mut acc = 0.0;
    for (i, ket) in basis.iter().enumerate() {
        let psi = amps[i];
        if psi == 0.0 {
            continue;
        }
        for term in terms {
            if let Some((out, sign)) = apply_string(&term.ops, ket) {
                if let Some(j) = basis.index_of(out) {
                    acc += term.coeff * sign * amps[j] * psi;
                }
            }
        }
    }
    acc
}

/// Σ terms |ψ⟩ expressed in `target`. Components outside `target` are dropped.
pub fn apply_terms(state: &StateVector, terms: &[Term], target: Arc<SectorBasis>) -> Result<StateVector> {
    let mut out = vec![0.0; target.dim()];
    for (i, ket) in state.basis().iter().enumerate() {
        let psi = state.amps()[i];
        if psi == 0.0 {
            continue;
        }
        for term in terms {
            if let Some((img, sign)) = apply_string(&term.ops, ket) {
                if let Some(j) = target.index_of(img) {
                    out[j] += term.coeff * sign * psi;
                }
            }
        }
    }
    StateVector::new(target, out)
}

/// Total lowering operator Σ_r S₋(r).
pub fn total_lowering(num_sites: usize) -> Vec<Term> {
    (0..num_sites).map(|r| Term::new(1.0, s_minus(r))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationKind {
    /// ⟨S₊(r) S₋(h)⟩
    Transverse,
    /// ⟨S_z(r) S_z(h)⟩
    Longitudinal,
    Xx,
    Yy,
    /// ⟨A†(r) A(h)⟩ with A(r) = f_{r↑} f_{r↓}
    Pair,
}

impl CorrelationKind {
    pub const ALL: [CorrelationKind; 5] = [
        CorrelationKind::Transverse,
        CorrelationKind::Longitudinal,
        CorrelationKind::Xx,
        CorrelationKind::Yy,
        CorrelationKind::Pair,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CorrelationKind::Transverse => "transverse",
            CorrelationKind::Longitudinal => "zz",
            CorrelationKind::Xx => "xx",
            CorrelationKind::Yy => "yy",
            CorrelationKind::Pair => "pair",
        }
    }
}

fn correlation_terms(r: usize, h: usize, kind: CorrelationKind) -> Vec<Term> {
    use CorrelationKind::*;
    let (pr, mr, ph, mh) = (s_plus(r), s_minus(r), s_plus(h), s_minus(h));
    match kind {
        Transverse => vec![Term::new(1.0, product(&pr, &mh))],
        Longitudinal => {
            let mut out = Vec::with_capacity(4);
            for (sr, cr) in [(Spin::Up, 0.5), (Spin::Down, -0.5)] {
                for (sh, ch) in [(Spin::Up, 0.5), (Spin::Down, -0.5)] {
                    out.push(Term::new(cr * ch, product(&number(sr, r), &number(sh, h))));
                }
            }
            out
        }
        // S_x S_x = ¼ (S₊ + S₋)(S₊ + S₋)
        Xx => vec![
            Term::new(0.25, product(&pr, &ph)),
            Term::new(0.25, product(&pr, &mh)),
            Term::new(0.25, product(&mr, &ph)),
            Term::new(0.25, product(&mr, &mh)),
        ],
        // S_y S_y = −¼ (S₊ − S₋)(S₊ − S₋)
        Yy => vec![
            Term::new(-0.25, product(&pr, &ph)),
            Term::new(0.25, product(&pr, &mh)),
            Term::new(0.25, product(&mr, &ph)),
            Term::new(-0.25, product(&mr, &mh)),
        ],
        Pair => vec![Term::new(
            1.0,
            vec![
                LadderOp::create(Spin::Down, r),
                LadderOp::create(Spin::Up, r),
                LadderOp::annihilate(Spin::Up, h),
                LadderOp::annihilate(Spin::Down, h),
            ],
        )],
    }
}

fn check_site(state: &StateVector, site: usize) -> Result<()> {
    let m = state.basis().num_sites();
    if site >= m {
        return Err(Error::SiteOutOfRange { site, num_sites: m });
    }
    Ok(())
}

/// ⟨ψ| S^a(r) S^b(h) |ψ⟩ for the spin kinds; `Pair` is forwarded to
/// [`pair_correlation`].
pub fn spin_correlation(state: &StateVector, r: usize, h: usize, kind: CorrelationKind) -> Result<f64> {
    check_site(state, r)?;
    check_site(state, h)?;
    Ok(expectation(state, &correlation_terms(r, h, kind)))
}

/// ⟨ψ| f†_{r↓} f†_{r↑} f_{h↑} f_{h↓} |ψ⟩.
pub fn pair_correlation(state: &StateVector, r: usize, h: usize) -> Result<f64> {
    spin_correlation(state, r, h, CorrelationKind::Pair)
}

/// ⟨S²⟩ = Σ_{r,h} ⟨S_z(r) S_z(h) + ½ (S₊(r) S₋(h) + S₋(r) S₊(h))⟩.
pub fn total_spin_squared(state: &StateVector) -> f64 {
    let m = state.basis().num_sites();
    let mut terms = Vec::with_capacity(6 * m * m);
    for r in 0..m {
        for h in 0..m {
            terms.extend(correlation_terms(r, h, CorrelationKind::Longitudinal));
            terms.push(Term::new(0.5, product(&s_plus(r), &s_minus(h))));
            terms.push(Term::new(0.5, product(&s_minus(r), &s_plus(h))));
        }
    }
    expectation(state, &terms)
}

/// Site-by-site correlation values of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub kind: CorrelationKind,
    pub values: DMatrix<f64>,
    pub sector: (usize, usize),
}

impl CorrelationMatrix {
    pub fn from_values(kind: CorrelationKind, values: DMatrix<f64>, sector: (usize, usize)) -> Self {
        CorrelationMatrix { kind, values, sector }
    }

    pub fn num_sites(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, r: usize, h: usize) -> f64 {
        self.values[(r, h)]
    }

    /// Smallest entry over distinct site pairs.
    pub fn min_off_diagonal(&self) -> Option<f64> {
        let n = self.num_sites();
        (0..n)
            .flat_map(|r| (0..n).filter(move |&h| h != r).map(move |h| (r, h)))
            .map(|(r, h)| self.values[(r, h)])
            .reduce(f64::min)
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        crate::solver::dense::eigenvalues((&self.values + self.values.transpose()) * 0.5)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &CorrelationMatrix) -> f64 {
        (&self.values - &other.values).amax()
    }

    /// Writes `r,h,value` rows under a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "r,h,value")?;
        let n = self.num_sites();
        for r in 0..n {
            for h in 0..n {
                writeln!(out, "{r},{h},{}", self.values[(r, h)])?;
            }
        }
        Ok(())
    }
}

/// All site pairs of one kind, diagonal included.
pub fn correlation_matrix(state: &StateVector, kind: CorrelationKind) -> CorrelationMatrix {
    let m = state.basis().num_sites();
    let values = DMatrix::from_fn(m, m, |r, h| expectation(state, &correlation_terms(r, h, kind)));
    CorrelationMatrix {
        kind,
        values,
        sector: state.basis().sector(),
    }
}

/// Ground-state amplitudes arranged as a dim_up × dim_down matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WMatrix {
    pub matrix: DMatrix<f64>,
}

impl WMatrix {
    /// ‖W − Wᵀ‖_F.
    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).norm()
    }

    /// ‖W − Wᵀ‖_F / ‖W‖_F.
    pub fn relative_asymmetry(&self) -> f64 {
        let n = self.matrix.norm();
        if n == 0.0 {
            0.0
        } else {
            self.asymmetry() / n
        }
    }

    /// Eigenvalues of (W + Wᵀ)/2, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        crate::solver::dense::eigenvalues((&self.matrix + self.matrix.transpose()) * 0.5)
    }

    pub fn min_symmetric_eigenvalue(&self) -> f64 {
        self.symmetric_eigenvalues()[0]
    }
}

/// Reshapes a balanced-sector state into W (rows: up configurations), with
/// the global sign chosen so that tr W ≥ 0.
pub fn extract_w(state: &StateVector) -> Result<WMatrix> {
    let basis = state.basis();
    if basis.n_up() != basis.n_down() {
        return Err(Error::NonSquareSector {
            n_up: basis.n_up(),
            n_down: basis.n_down(),
        });
    }
    let (du, dd) = (basis.dim_up(), basis.dim_down());
    let mut matrix = DMatrix::from_row_slice(du, dd, state.amps());
    if matrix.trace() < 0.0 {
        matrix.neg_mut();
    }
    Ok(WMatrix { matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdlroSummary {
    pub lambda_max: f64,
    /// λ_max divided by the number of base-lattice sites (half the sites of
    /// the two-layer lattice).
    pub per_site: f64,
}

pub fn odlro_summary(pairmat: &CorrelationMatrix) -> Result<OdlroSummary> {
    if pairmat.kind != CorrelationKind::Pair {
        return Err(Error::InvalidParameter(format!(
            "ODLRO summary needs a pair matrix, got {:?}",
            pairmat.kind
        )));
    }
    let lambda_max = pairmat.symmetric_eigenvalues().last().copied().unwrap_or(0.0);
    let base = (pairmat.num_sites() / 2).max(1);
    Ok(OdlroSummary {
        lambda_max,
        per_site: lambda_max / base as f64,
    })
}
