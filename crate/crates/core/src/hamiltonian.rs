//! Sector Hamiltonians of the periodic Anderson model.
//!
//! Two forms are built on the two-layer lattice:
//!
//! * `Original`:  H = -Σ t_rh (f†_r f_h + h.c.) + ε_d Σ_d n_dσ + U Σ_d n_d↑ n_d↓
//! * `Hubbardized`: H̃ = -Σ t_rh (f†_r f_h + h.c.) + U Σ_d (n↑-½)(n↓-½) + ε Σ_c (n↑-½)(n↓-½)
//!
//! Interlayer bonds carry t_rh = -V, so both forms hybridize with +V. At the
//! symmetric point ε_d = -U/2 and ε = 0 the two differ by the constant U·N_Λ/4.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{rank_unchecked, ConfigPair, SectorBasis, StateVector};
use crate::lattice::{Bond, Layer, LatticeGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Original,
    #[default]
    Hubbardized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub t: f64,
    pub v: f64,
    pub u: f64,
    /// Local potential on d-sites; only the original form uses it.
    pub eps_d: f64,
    /// Auxiliary interaction on c-sites; only the hubbardized form uses it.
    pub eps_aux: f64,
    pub form: Form,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::symmetric(1.0, 1.0, 4.0, 0.0)
    }
}

impl ModelParams {
    /// Symmetric model (ε_d = -U/2) in hubbardized form.
    pub fn symmetric(t: f64, v: f64, u: f64, eps_aux: f64) -> Self {
        ModelParams {
            t,
            v,
            u,
            eps_d: -u / 2.0,
            eps_aux,
            form: Form::Hubbardized,
        }
    }

    pub fn with_form(self, form: Form) -> Self {
        ModelParams { form, ..self }
    }

    pub fn with_eps_aux(self, eps_aux: f64) -> Self {
        ModelParams { eps_aux, ..self }
    }

    /// Parameters of the particle-hole transformed model: (ε, U) → (-ε, -U).
    pub fn negated(self) -> Self {
        ModelParams {
            u: -self.u,
            eps_d: -self.eps_d,
            eps_aux: -self.eps_aux,
            ..self
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (self.eps_d + self.u / 2.0).abs() <= 1e-12 * self.u.abs().max(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("t", self.t),
            ("v", self.v),
            ("u", self.u),
            ("eps_d", self.eps_d),
            ("eps_aux", self.eps_aux),
        ] {
            if !x.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {x} is not finite")));
            }
        }
        Ok(())
    }
}

/// The constant separating the hubbardized and original spectra: U·N_Λ/4.
pub fn hubbardized_shift(params: &ModelParams, lattice: &LatticeGraph) -> f64 {
    params.u * lattice.localized_sites().count() as f64 / 4.0
}

/// Row-compressed real sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    symmetric: bool,
}

impl SparseOperator {
    /// Builds from per-row `(column, value)` lists. Duplicates are summed,
    /// columns sorted, and exact zeros dropped.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rows.len(),
            });
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < row.len() {
                let c = row[i].0;
                if c >= dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: c + 1,
                    });
                }
                let mut v = row[i].1;
                i += 1;
                while i < row.len() && row[i].0 == c {
                    v += row[i].1;
                    i += 1;
                }
                if v != 0.0 {
                    cols.push(c as u32);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        let mut op = SparseOperator {
            dim,
            row_ptr,
            cols,
            vals,
            symmetric: false,
        };
        op.symmetric = op.is_exactly_symmetric();
        Ok(op)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let rows = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| vec![(i, d)])
            .collect();
        Self::from_rows(diag.len(), rows).expect("diagonal rows are in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Whether the stored entries equal their mirrored entries bit-for-bit.
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()]
            .iter()
            .zip(&self.vals[span])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[span.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => 0.0,
        }
    }

    fn is_exactly_symmetric(&self) -> bool {
        (0..self.dim).all(|i| self.row(i).all(|(j, v)| self.get(j, i).to_bits() == v.to_bits()))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `y = H x`. Each row is summed in ascending column order, so the result
    /// does not depend on the number of threads.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        const PAR_ROWS: usize = 2048;
        let row = |(i, yi): (usize, &mut f64)| {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            *yi = acc;
        };
        if self.dim >= PAR_ROWS {
            y.par_iter_mut().enumerate().with_min_len(256).for_each(row);
        } else {
            y.iter_mut().enumerate().for_each(row);
        }
    }

    /// Writes every stored entry as `row col value`.
    pub fn write_coordinate<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                writeln!(out, "{i} {j} {v}")?;
            }
        }
        Ok(())
    }
}

pub fn matvec(op: &SparseOperator, x: &StateVector) -> Result<StateVector> {
    if x.amps().len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: x.amps().len(),
        });
    }
    let mut y = vec![0.0; op.dim()];
    op.apply(x.amps(), &mut y);
    StateVector::new(x.basis_arc().clone(), y)
}

fn check_sites(lattice: &LatticeGraph, basis: &SectorBasis) -> Result<()> {
    if basis.num_sites() != lattice.num_sites() {
        return Err(Error::SectorMismatch {
            basis_sites: basis.num_sites(),
            lattice_sites: lattice.num_sites(),
        });
    }
    Ok(())
}

/// Hopping table of one spin species: for every configuration, the
/// configurations reachable by one hop and the matrix element `-t_rh · sign`.
/// The down species crosses all up electrons twice, so its table has the
/// same form.
fn species_hops(words: &[u32], bonds: &[Bond]) -> Vec<Vec<(usize, f64)>> {
    words
        .iter()
        .map(|&w| {
            let mut out = Vec::new();
            for b in bonds.iter().filter(|b| b.amplitude != 0.0) {
                for (from, to) in [(b.h, b.r), (b.r, b.h)] {
                    let (fb, tb) = (1u32 << from, 1u32 << to);
                    if w & fb == 0 || w & tb != 0 {
                        continue;
                    }
                    let (lo, hi) = (from.min(to), from.max(to));
                    let between = w & ((1u32 << hi) - 1) & !((1u32 << (lo + 1)) - 1);
                    let sign = if between.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                    out.push((rank_unchecked(w ^ fb ^ tb), -b.amplitude * sign));
                }
            }
            out
        })
        .collect()
}

fn assemble<F>(lattice: &LatticeGraph, basis: &SectorBasis, diagonal: F) -> Result<SparseOperator>
where
    F: Fn(ConfigPair) -> f64 + Sync,
{
    check_sites(lattice, basis)?;
    let up_hops = species_hops(basis.up_configs(), lattice.bonds());
    let down_hops = species_hops(basis.down_configs(), lattice.bonds());
    let dd = basis.dim_down();
    let rows: Vec<Vec<(usize, f64)>> = (0..basis.dim_up())
        .into_par_iter()
        .flat_map_iter(|a| {
            let up_hops = &up_hops;
            let down_hops = &down_hops;
            let diagonal = &diagonal;
            (0..dd).map(move |b| {
                let pair = ConfigPair::new(basis.up_configs()[a], basis.down_configs()[b]);
                let mut row = Vec::with_capacity(1 + up_hops[a].len() + down_hops[b].len());
                row.push((a * dd + b, diagonal(pair)));
                row.extend(up_hops[a].iter().map(|&(a2, v)| (a2 * dd + b, v)));
                row.extend(down_hops[b].iter().map(|&(b2, v)| (a * dd + b2, v)));
                row
            })
        })
        .collect();
    SparseOperator::from_rows(basis.dim(), rows)
}

fn layer_masks(lattice: &LatticeGraph) -> (u32, u32) {
    let mut c = 0u32;
    let mut d = 0u32;
    for s in 0..lattice.num_sites() {
        match lattice.layer(s) {
            Layer::Conduction => c |= 1 << s,
            Layer::Localized => d |= 1 << s,
        }
    }
    (c, d)
}

/// Sum over the sites in `mask` of (n↑-½)(n↓-½), i.e. ±¼ per site.
fn half_shifted_product(pair: ConfigPair, mask: u32) -> f64 {
    let n = mask.count_ones() as f64;
    let singly = ((pair.up ^ pair.down) & mask).count_ones() as f64;
    0.25 * (n - 2.0 * singly)
}

/// Periodic Anderson Hamiltonian in its original form.
pub fn build_original(
    params: &ModelParams,
    lattice: &LatticeGraph,
    basis: &SectorBasis,
) -> Result<SparseOperator> {
    params.validate()?;
    let (_, d_mask) = layer_masks(lattice);
    let (u, eps_d) = (params.u, params.eps_d);
    assemble(lattice, basis, move |p| {
        let n_d = ((p.up & d_mask).count_ones() + (p.down & d_mask).count_ones()) as f64;
        let doubles = (p.up & p.down & d_mask).count_ones() as f64;
        eps_d * n_d + u * doubles
    })
}

/// Generalized Hubbard form with the auxiliary c-site interaction.
pub fn build_hubbardized(
    params: &ModelParams,
    lattice: &LatticeGraph,
    basis: &SectorBasis,
) -> Result<SparseOperator> {
    params.validate()?;
    let (c_mask, d_mask) = layer_masks(lattice);
    let (u, eps) = (params.u, params.eps_aux);
    assemble(lattice, basis, move |p| {
        u * half_shifted_product(p, d_mask) + eps * half_shifted_product(p, c_mask)
    })
}

/// Dispatches on `params.form`.
pub fn build(params: &ModelParams, lattice: &LatticeGraph, basis: &SectorBasis) -> Result<SparseOperator> {
    match params.form {
        Form::Original => build_original(params, lattice, basis),
        Form::Hubbardized => build_hubbardized(params, lattice, basis),
    }
}

/// Slow dense builder that applies each second-quantized term of the model
/// to every basis ket through [`crate::fock::apply_string`]. It takes the
/// hopping and hybridization strengths from `params` and only the bond
/// topology and layer labels from the lattice.
pub mod reference {
    use nalgebra::DMatrix;

    use super::{check_sites, Form, ModelParams};
    use crate::error::Result;
    use crate::fock::{apply_string, LadderOp, SectorBasis, Spin};
    use crate::lattice::{Layer, LatticeGraph};

    type Term = (f64, Vec<LadderOp>);

    fn number(spin: Spin, site: usize) -> Vec<LadderOp> {
        vec![LadderOp::create(spin, site), LadderOp::annihilate(spin, site)]
    }

    fn terms(params: &ModelParams, lattice: &LatticeGraph) -> (Vec<Term>, f64) {
        let mut terms: Vec<Term> = Vec::new();
        let mut constant = 0.0;
        for b in lattice.bonds() {
            let coeff = match (lattice.layer(b.r), lattice.layer(b.h)) {
                (Layer::Conduction, Layer::Conduction) => -params.t,
                (Layer::Localized, Layer::Localized) => 0.0,
                _ => params.v,
            };
            for spin in [Spin::Up, Spin::Down] {
                terms.push((coeff, vec![LadderOp::create(spin, b.r), LadderOp::annihilate(spin, b.h)]));
                terms.push((coeff, vec![LadderOp::create(spin, b.h), LadderOp::annihilate(spin, b.r)]));
            }
        }
        for s in 0..lattice.num_sites() {
            let nn: Vec<LadderOp> = [number(Spin::Up, s), number(Spin::Down, s)].concat();
            match (params.form, lattice.layer(s)) {
                (Form::Original, Layer::Localized) => {
                    terms.push((params.eps_d, number(Spin::Up, s)));
                    terms.push((params.eps_d, number(Spin::Down, s)));
                    terms.push((params.u, nn));
                }
                (Form::Original, Layer::Conduction) => {}
                (Form::Hubbardized, layer) => {
                    let g = if layer == Layer::Localized {
                        params.u
                    } else {
                        params.eps_aux
                    };
                    // g (n↑ - ½)(n↓ - ½) = g n↑n↓ - g/2 n↑ - g/2 n↓ + g/4
                    terms.push((g, nn));
                    terms.push((-g / 2.0, number(Spin::Up, s)));
                    terms.push((-g / 2.0, number(Spin::Down, s)));
                    constant += g / 4.0;
                }
            }
        }
        (terms, constant)
    }

    pub fn dense_hamiltonian(
        params: &ModelParams,
        lattice: &LatticeGraph,
        basis: &SectorBasis,
    ) -> Result<DMatrix<f64>> {
        check_sites(lattice, basis)?;
        let dim = basis.dim();
        let (terms, constant) = terms(params, lattice);
        let mut h = DMatrix::<f64>::identity(dim, dim) * constant;
        for (i, ket) in basis.iter().enumerate() {
            for (coeff, ops) in &terms {
                if let Some((out, sign)) = apply_string(ops, ket) {
                    let j = basis
                        .index_of(out)
                        .expect("number-conserving term stays in the sector");
                    h[(j, i)] += coeff * sign;
                }
            }
        }
        Ok(h)
    }
}

/// Dense sorted spectrum of a symmetric matrix.
pub fn dense_spectrum(m: DMatrix<f64>) -> Vec<f64> {
    crate::solver::dense::eigenvalues(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_chain, layer_double, Boundary};

    fn dimer(v: f64) -> LatticeGraph {
        layer_double(&build_chain(1, Boundary::Open).unwrap(), 1.0, v).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn free_dimer_spectrum() {
        let lat = dimer(1.0);
        let basis = SectorBasis::new(2, 1, 1).unwrap();
        let p = ModelParams {
            t: 1.0,
            v: 1.0,
            u: 0.0,
            eps_d: 0.0,
            eps_aux: 0.0,
            form: Form::Original,
        };
        let h = build_original(&p, &lat, &basis).unwrap();
        assert!(close(&dense_spectrum(h.to_dense()), &[-2.0, 0.0, 0.0, 2.0], 1e-12));
    }

    #[test]
    fn atomic_limit_diagonal() {
        let lat = dimer(0.0);
        let basis = SectorBasis::new(2, 1, 1).unwrap();
        let p = ModelParams::symmetric(1.0, 0.0, 4.0, 0.0).with_form(Form::Original);
        let h = build_original(&p, &lat, &basis).unwrap();
        // basis order: (c↑,c↓) (c↑,d↓) (d↑,c↓) (d↑,d↓)
        let diag: Vec<f64> = (0..4).map(|i| h.get(i, i)).collect();
        assert_eq!(diag, vec![0.0, -2.0, -2.0, 0.0]);
        assert_eq!(h.nnz(), 2);
    }

    #[test]
    fn dimer_ground_energy() {
        let lat = dimer(1.0);
        let basis = SectorBasis::new(2, 1, 1).unwrap();
        let p = ModelParams::symmetric(1.0, 1.0, 4.0, 0.0);
        let hub = dense_spectrum(build_hubbardized(&p, &lat, &basis).unwrap().to_dense());
        let orig = dense_spectrum(build_original(&p, &lat, &basis).unwrap().to_dense());
        // ionic pair at +U/4 coupled with 2V to the covalent singlet at -U/4
        assert!((hub[0] + 5f64.sqrt()).abs() < 1e-12);
        assert!((orig[0] + 1.0 + 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kinetic_only_forms_coincide() {
        let lat = layer_double(&build_chain(2, Boundary::Open).unwrap(), 1.0, 0.5).unwrap();
        let basis = SectorBasis::new(4, 2, 2).unwrap();
        let p = ModelParams {
            t: 1.0,
            v: 0.5,
            u: 0.0,
            eps_d: 0.0,
            eps_aux: 0.0,
            form: Form::Hubbardized,
        };
        assert_eq!(
            build_hubbardized(&p, &lat, &basis).unwrap(),
            build_original(&p, &lat, &basis).unwrap()
        );
    }

    #[test]
    fn stored_matrix_is_exactly_symmetric() {
        let lat = layer_double(&build_chain(3, Boundary::Open).unwrap(), 1.0, 0.7).unwrap();
        let basis = SectorBasis::new(6, 3, 2).unwrap();
        let h = build_hubbardized(&ModelParams::symmetric(1.0, 0.7, 3.0, 0.2), &lat, &basis).unwrap();
        assert!(h.symmetric());
        let d = h.to_dense();
        assert_eq!(d, d.transpose());
    }

    #[test]
    fn sector_mismatch() {
        let basis = SectorBasis::new(3, 1, 1).unwrap();
        assert!(matches!(
            build_hubbardized(&ModelParams::default(), &dimer(1.0), &basis),
            Err(Error::SectorMismatch { .. })
        ));
    }

    #[test]
    fn matvec_examples() {
        let basis = std::sync::Arc::new(SectorBasis::new(2, 1, 1).unwrap());
        let x = StateVector::new(basis.clone(), vec![0.5; 4]).unwrap();
        let scaled = SparseOperator::from_diagonal(&[3.0; 4]);
        assert_eq!(matvec(&scaled, &x).unwrap().amps(), &[1.5; 4]);
        let zero = SparseOperator::from_diagonal(&[0.0; 4]);
        assert_eq!(zero.nnz(), 0);
        assert_eq!(matvec(&zero, &x).unwrap().amps(), &[0.0; 4]);
        let short = SparseOperator::from_diagonal(&[1.0; 3]);
        assert!(matches!(matvec(&short, &x), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn coordinate_export() {
        let op = SparseOperator::from_rows(2, vec![vec![(1, 2.0)], vec![(0, 2.0), (1, -1.0)]]).unwrap();
        let mut buf = Vec::new();
        op.write_coordinate(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1 2\n1 0 2\n1 1 -1\n");
    }
}
