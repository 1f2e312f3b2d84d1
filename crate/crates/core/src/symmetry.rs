//! Particle-hole transformation on the down spins:
//! `U₀ f_{r↑} U₀⁻¹ = f_{r↑}`, `U₀ f_{r↓} U₀⁻¹ = ε(r) f†_{r↓}`.
//!
//! `U₀` is realized as a signed permutation between the sectors
//! `(n↑, n↓)` and `(n↑, M − n↓)`. With `U₀|0⟩ = |∅, all ↓⟩`, the image of a
//! basis ket is obtained by applying the transformed operator string to that
//! state, so all fermionic reordering signs come from [`crate::fock`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_string, ConfigPair, LadderOp, SectorBasis, Spin, StateVector};
use crate::hamiltonian::{build_hubbardized, ModelParams, SparseOperator};
use crate::lattice::Sublattice;
use crate::solver::{solve_lowest_with, SolverOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct SectorMap {
    source: Arc<SectorBasis>,
    image: Arc<SectorBasis>,
    index: Vec<usize>,
    sign: Vec<f64>,
}

impl SectorMap {
    pub fn source(&self) -> &Arc<SectorBasis> {
        &self.source
    }

    pub fn image(&self) -> &Arc<SectorBasis> {
        &self.image
    }

    /// Image index and sign of source basis state `i`.
    pub fn entry(&self, i: usize) -> (usize, f64) {
        (self.index[i], self.sign[i])
    }

    /// U₀ |ψ⟩ for a state in the source sector.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.basis() != self.source.as_ref() {
            return Err(Error::InvalidParameter(format!(
                "state lives in sector {:?}, map expects {:?}",
                state.basis().sector(),
                self.source.sector()
            )));
        }
        let mut out = vec![0.0; self.image.dim()];
        for (i, &a) in state.amps().iter().enumerate() {
            out[self.index[i]] = self.sign[i] * a;
        }
        StateVector::new(self.image.clone(), out)
    }

    /// U₀⁻¹ |φ⟩ for a state in the image sector.
    pub fn apply_inverse(&self, state: &StateVector) -> Result<StateVector> {
        if state.basis() != self.image.as_ref() {
            return Err(Error::InvalidParameter(format!(
                "state lives in sector {:?}, map image is {:?}",
                state.basis().sector(),
                self.image.sector()
            )));
        }
        let amps = (0..self.source.dim())
            .map(|i| self.sign[i] * state.amps()[self.index[i]])
            .collect();
        StateVector::new(self.source.clone(), amps)
    }
}

fn full_mask(m: usize) -> u32 {
    if m == 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

fn bits(word: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| word >> i & 1 == 1)
}

/// Builds U₀ on `basis` for the given sublattice coloring.
pub fn particle_hole_map(basis: &Arc<SectorBasis>, sublattice: &[Sublattice]) -> Result<SectorMap> {
    let m = basis.num_sites();
    if sublattice.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: sublattice.len(),
        });
    }
    let image = Arc::new(SectorBasis::with_max_dim(
        m,
        basis.n_up(),
        m - basis.n_down(),
        u128::MAX,
    )?);
    let reference = ConfigPair::new(0, full_mask(m));
    let mut index = Vec::with_capacity(basis.dim());
    let mut sign = Vec::with_capacity(basis.dim());
    let mut ops = Vec::with_capacity(basis.n_up() + basis.n_down());
    for ket in basis.iter() {
        ops.clear();
        ops.extend(bits(ket.up).map(|k| LadderOp::create(Spin::Up, k)));
        ops.extend(bits(ket.down).map(|r| LadderOp::annihilate(Spin::Down, r)));
        let (out, s) = apply_string(&ops, reference).expect("U₀ image of a basis ket is never blocked");
        let stagger: f64 = bits(ket.down).map(|r| sublattice[r].sign()).product();
        index.push(image.index_of(out).expect("image configuration lies in the image sector"));
        sign.push(s * stagger);
    }
    Ok(SectorMap {
        source: basis.clone(),
        image,
        index,
        sign,
    })
}

/// Sign `c` with U₀² = c·1 on `basis`, or `None` if U₀² is not a multiple of
/// the identity there.
pub fn involution_sign(basis: &Arc<SectorBasis>, sublattice: &[Sublattice]) -> Result<Option<f64>> {
    let there = particle_hole_map(basis, sublattice)?;
    let back = particle_hole_map(there.image(), sublattice)?;
    let mut common = None;
    for i in 0..basis.dim() {
        let (j, s1) = there.entry(i);
        let (k, s2) = back.entry(j);
        if k != i {
            return Ok(None);
        }
        match common {
            None => common = Some(s1 * s2),
            Some(c) if c != s1 * s2 => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(common)
}

/// ε(r) ε(h) · M(r, h): maps the attractive-frame pair matrix onto the
/// transverse spin correlations of the repulsive frame.
pub fn transport_pair_to_transverse(
    pair: &crate::observables::CorrelationMatrix,
    sublattice: &[Sublattice],
) -> crate::observables::CorrelationMatrix {
    let values = nalgebra::DMatrix::from_fn(pair.num_sites(), pair.num_sites(), |r, h| {
        sublattice[r].sign() * sublattice[h].sign() * pair.get(r, h)
    });
    crate::observables::CorrelationMatrix::from_values(
        crate::observables::CorrelationKind::Transverse,
        values,
        pair.sector,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEquivalence {
    pub sector: (usize, usize),
    pub image_sector: (usize, usize),
    pub source_eigenvalues: Vec<f64>,
    pub image_eigenvalues: Vec<f64>,
    pub max_eigenvalue_diff: f64,
    /// ‖H(ε,U) U₀ψ' − E' U₀ψ'‖ for the ground state ψ' of H(−ε,−U).
    pub transport_residual: f64,
    pub pass: bool,
}

pub const SPECTRUM_TOL: f64 = 1e-9;
pub const TRANSPORT_TOL: f64 = 1e-8;

fn residual(op: &SparseOperator, v: &StateVector, e: f64) -> f64 {
    let mut hv = vec![0.0; op.dim()];
    op.apply(v.amps(), &mut hv);
    hv.iter()
        .zip(v.amps())
        .map(|(h, x)| (h - e * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Compares the `k` lowest levels of H̃(ε, U) in `sector` with those of
/// H̃(−ε, −U) in the image sector, and checks that U₀ carries the image
/// ground state onto an eigenvector of H̃(ε, U).
pub fn verify_spectrum_equivalence(
    params: &ModelParams,
    lattice: &crate::lattice::LatticeGraph,
    sector: (usize, usize),
    k: usize,
    opts: &SolverOptions,
) -> Result<SpectrumEquivalence> {
    let m = lattice.num_sites();
    let src = Arc::new(SectorBasis::with_max_dim(m, sector.0, sector.1, opts.max_dim.into())?);
    let img = Arc::new(SectorBasis::with_max_dim(m, sector.0, m - sector.1, opts.max_dim.into())?);
    let h_src = build_hubbardized(params, lattice, &src)?;
    let h_img = build_hubbardized(&params.negated(), lattice, &img)?;
    let k = k.min(src.dim());
    let e_src = solve_lowest_with(&h_src, k, opts)?;
    let e_img = solve_lowest_with(&h_img, k, opts)?;
    let max_eigenvalue_diff = e_src
        .eigenvalues
        .iter()
        .zip(&e_img.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let ground = StateVector::new(img.clone(), e_img.eigenvectors[0].clone())?;
    let carried = particle_hole_map(&img, lattice.sublattices())?.apply(&ground)?;
    let transport_residual = residual(&h_src, &carried, e_img.eigenvalues[0]);

    Ok(SpectrumEquivalence {
        sector,
        image_sector: img.sector(),
        pass: max_eigenvalue_diff <= SPECTRUM_TOL && transport_residual < TRANSPORT_TOL,
        source_eigenvalues: e_src.eigenvalues,
        image_eigenvalues: e_img.eigenvalues,
        max_eigenvalue_diff,
        transport_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_chain, layer_double, Boundary};

    #[test]
    fn single_site_map() {
        let b = Arc::new(SectorBasis::new(1, 0, 0).unwrap());
        let map = particle_hole_map(&b, &[Sublattice::A]).unwrap();
        assert_eq!(map.image().sector(), (0, 1));
        assert_eq!(map.entry(0), (0, 1.0));
    }

    #[test]
    fn balanced_sector_maps_to_itself() {
        let b = Arc::new(SectorBasis::new(4, 2, 2).unwrap());
        let lat = layer_double(&build_chain(2, Boundary::Open).unwrap(), 1.0, 1.0).unwrap();
        let map = particle_hole_map(&b, lat.sublattices()).unwrap();
        assert_eq!(map.image().sector(), (2, 2));
        let mut seen = vec![false; b.dim()];
        for i in 0..b.dim() {
            let (j, s) = map.entry(i);
            assert!(s == 1.0 || s == -1.0);
            assert!(!seen[j]);
            seen[j] = true;
        }
    }

    #[test]
    fn involution_on_two_sites() {
        use Sublattice::*;
        for coloring in [[A, B], [B, A]] {
            for nu in 0..=2 {
                for nd in 0..=2 {
                    let b = Arc::new(SectorBasis::new(2, nu, nd).unwrap());
                    let sign = involution_sign(&b, &coloring).unwrap();
                    assert!(sign.is_some(), "U₀² not ±1 on sector ({nu},{nd})");
                }
            }
        }
    }

    #[test]
    fn map_preserves_inner_products() {
        let lat = layer_double(&build_chain(2, Boundary::Open).unwrap(), 1.0, 1.0).unwrap();
        let b = Arc::new(SectorBasis::new(4, 1, 3).unwrap());
        let map = particle_hole_map(&b, lat.sublattices()).unwrap();
        let x = StateVector::new(b.clone(), (0..b.dim()).map(|i| (i as f64).sin()).collect()).unwrap();
        let y = StateVector::new(b.clone(), (0..b.dim()).map(|i| (i as f64 * 0.3).cos()).collect()).unwrap();
        let (mx, my) = (map.apply(&x).unwrap(), map.apply(&y).unwrap());
        assert!((mx.dot(&my) - x.dot(&y)).abs() < 1e-13);
        assert_eq!(map.apply_inverse(&mx).unwrap(), x);
    }

    #[test]
    fn free_spectrum_trivially_equal() {
        let lat = layer_double(&build_chain(2, Boundary::Open).unwrap(), 1.0, 1.0).unwrap();
        let p = ModelParams::symmetric(1.0, 1.0, 0.0, 0.0);
        let r = verify_spectrum_equivalence(&p, &lat, (2, 2), 6, &SolverOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.source_eigenvalues, r.image_eigenvalues);
    }

    #[test]
    fn interacting_spectrum_matches() {
        let lat = layer_double(&build_chain(2, Boundary::Open).unwrap(), 1.0, 1.0).unwrap();
        let p = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
        for sector in [(2, 2), (1, 2), (3, 1)] {
            let r = verify_spectrum_equivalence(&p, &lat, sector, 6, &SolverOptions::default()).unwrap();
            assert!(r.max_eigenvalue_diff < 1e-10, "{r:?}");
            assert!(r.pass);
        }
    }
}
