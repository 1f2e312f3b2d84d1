//! Fixed-(N↑, N↓) Fock bases over bit-word configurations.
//!
//! Spin-orbitals are ordered globally as `0↑ … (M-1)↑, 0↓ … (M-1)↓`. A basis
//! ket is `f†_{k1} f†_{k2} … f†_{kn} |0⟩` with `k1 < k2 < … < kn`, so acting
//! on orbital `k` costs a sign `(-1)^(occupied orbitals below k)`. Down-spin
//! operators therefore always cross every up electron.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported site count (one bit per site in a `u32`).
pub const MAX_SITES: usize = 32;

/// Default cap on the sector dimension.
pub const DEFAULT_MAX_DIM: u128 = 1 << 26;

const fn binomial_table() -> [[u64; MAX_SITES + 1]; MAX_SITES + 1] {
    let mut t = [[0u64; MAX_SITES + 1]; MAX_SITES + 1];
    let mut n = 0;
    while n <= MAX_SITES {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[u64; MAX_SITES + 1]; MAX_SITES + 1] = binomial_table();

/// C(n, k), zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n || n > MAX_SITES {
        0
    } else {
        BINOMIAL[n][k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Create,
    Annihilate,
}

/// A single creation or annihilation operator on one spin-orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub kind: OpKind,
    pub spin: Spin,
    pub site: usize,
}

impl LadderOp {
    pub fn create(spin: Spin, site: usize) -> Self {
        LadderOp {
            kind: OpKind::Create,
            spin,
            site,
        }
    }

    pub fn annihilate(spin: Spin, site: usize) -> Self {
        LadderOp {
            kind: OpKind::Annihilate,
            spin,
            site,
        }
    }

    pub fn dagger(self) -> Self {
        LadderOp {
            kind: match self.kind {
                OpKind::Create => OpKind::Annihilate,
                OpKind::Annihilate => OpKind::Create,
            },
            ..self
        }
    }
}

/// Occupations of the up and down spin-orbitals as bit words (bit `i` = site `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConfigPair {
    pub up: u32,
    pub down: u32,
}

impl ConfigPair {
    pub fn new(up: u32, down: u32) -> Self {
        ConfigPair { up, down }
    }

    pub fn counts(self) -> (usize, usize) {
        (self.up.count_ones() as usize, self.down.count_ones() as usize)
    }
}

#[inline]
fn below(site: usize) -> u32 {
    (1u32 << site) - 1
}

/// Applies one ladder operator. Returns `None` when Pauli-blocked, otherwise
/// the new configuration and the fermionic sign.
#[inline]
pub fn apply_op(op: LadderOp, pair: ConfigPair) -> Option<(ConfigPair, f64)> {
    debug_assert!(op.site < MAX_SITES);
    let bit = 1u32 << op.site;
    let (word, crossed) = match op.spin {
        Spin::Up => (pair.up, (pair.up & below(op.site)).count_ones()),
        Spin::Down => (
            pair.down,
            pair.up.count_ones() + (pair.down & below(op.site)).count_ones(),
        ),
    };
    let occupied = word & bit != 0;
    let new_word = match (op.kind, occupied) {
        (OpKind::Create, false) | (OpKind::Annihilate, true) => word ^ bit,
        _ => return None,
    };
    let sign = if crossed % 2 == 0 { 1.0 } else { -1.0 };
    let out = match op.spin {
        Spin::Up => ConfigPair::new(new_word, pair.down),
        Spin::Down => ConfigPair::new(pair.up, new_word),
    };
    Some((out, sign))
}

/// Applies an operator product written left to right, so the rightmost
/// operator acts first.
pub fn apply_string(ops: &[LadderOp], pair: ConfigPair) -> Option<(ConfigPair, f64)> {
    ops.iter().rev().try_fold((pair, 1.0), |(p, s), &op| {
        apply_op(op, p).map(|(q, s2)| (q, s * s2))
    })
}

/// Position of `word` among all words with `n` set bits in ascending order.
pub fn rank(word: u32, n: usize) -> Result<usize> {
    let found = word.count_ones();
    if found as usize != n {
        return Err(Error::BadPopcount {
            word,
            expected: n as u32,
            found,
        });
    }
    Ok(rank_unchecked(word))
}

/// Combinatorial-number-system rank; `word` must be a valid configuration.
#[inline]
pub fn rank_unchecked(mut word: u32) -> usize {
    let mut r = 0u64;
    let mut count = 0;
    while word != 0 {
        let p = word.trailing_zeros() as usize;
        count += 1;
        r += BINOMIAL[p][count];
        word &= word - 1;
    }
    r as usize
}

/// All `m`-bit words with `n` set bits in ascending order.
pub fn words_with_popcount(m: usize, n: usize) -> Vec<u32> {
    let count = binomial(m, n) as usize;
    let mut out = Vec::with_capacity(count);
    if n == 0 {
        out.push(0);
        return out;
    }
    let limit: u64 = 1u64 << m;
    let mut w: u64 = (1u64 << n) - 1;
    while w < limit {
        out.push(w as u32);
        // Gosper's hack: next word with the same popcount
        let c = w & w.wrapping_neg();
        let r = w + c;
        w = (((r ^ w) >> 2) / c) | r;
    }
    out
}

/// Basis of the sector with fixed `(n_up, n_down)` on `num_sites` sites.
///
/// Global index of `(α, β)` is `α * dim_down + β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    num_sites: usize,
    n_up: usize,
    n_down: usize,
    up_configs: Vec<u32>,
    down_configs: Vec<u32>,
}

impl SectorBasis {
    pub fn new(num_sites: usize, n_up: usize, n_down: usize) -> Result<Self> {
        Self::with_max_dim(num_sites, n_up, n_down, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(num_sites: usize, n_up: usize, n_down: usize, max_dim: u128) -> Result<Self> {
        if num_sites > MAX_SITES {
            return Err(Error::InvalidParameter(format!(
                "{num_sites} sites exceeds the supported maximum of {MAX_SITES}"
            )));
        }
        if n_up > num_sites || n_down > num_sites {
            return Err(Error::InvalidParameter(format!(
                "particle numbers ({n_up}, {n_down}) exceed {num_sites} sites"
            )));
        }
        let dim = sector_dimension(num_sites, n_up, n_down);
        if dim > max_dim {
            return Err(Error::CapacityExceeded { dim, max: max_dim });
        }
        Ok(SectorBasis {
            num_sites,
            n_up,
            n_down,
            up_configs: words_with_popcount(num_sites, n_up),
            down_configs: words_with_popcount(num_sites, n_down),
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    pub fn sector(&self) -> (usize, usize) {
        (self.n_up, self.n_down)
    }

    pub fn dim_up(&self) -> usize {
        self.up_configs.len()
    }

    pub fn dim_down(&self) -> usize {
        self.down_configs.len()
    }

    pub fn dim(&self) -> usize {
        self.up_configs.len() * self.down_configs.len()
    }

    pub fn up_configs(&self) -> &[u32] {
        &self.up_configs
    }

    pub fn down_configs(&self) -> &[u32] {
        &self.down_configs
    }

    pub fn config(&self, index: usize) -> ConfigPair {
        let dd = self.dim_down();
        ConfigPair::new(self.up_configs[index / dd], self.down_configs[index % dd])
    }

    /// Global index of a configuration, or `None` if it lies outside this sector.
    #[inline]
    pub fn index_of(&self, pair: ConfigPair) -> Option<usize> {
        if pair.up.count_ones() as usize != self.n_up
            || pair.down.count_ones() as usize != self.n_down
            || (self.num_sites < MAX_SITES && (pair.up | pair.down) >> self.num_sites != 0)
        {
            return None;
        }
        Some(rank_unchecked(pair.up) * self.dim_down() + rank_unchecked(pair.down))
    }

    pub fn iter(&self) -> impl Iterator<Item = ConfigPair> + '_ {
        self.up_configs.iter().flat_map(move |&u| {
            self.down_configs
                .iter()
                .map(move |&d| ConfigPair::new(u, d))
        })
    }
}

/// C(M, n_up) · C(M, n_down) without overflow.
pub fn sector_dimension(num_sites: usize, n_up: usize, n_down: usize) -> u128 {
    binomial(num_sites, n_up) as u128 * binomial(num_sites, n_down) as u128
}

/// Real amplitudes over a sector basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amps: Vec<f64>,
}

impl StateVector {
    pub fn new(basis: Arc<SectorBasis>, amps: Vec<f64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: amps.len(),
            });
        }
        Ok(StateVector { basis, amps })
    }

    /// A single basis ket.
    pub fn basis_state(basis: Arc<SectorBasis>, pair: ConfigPair) -> Result<Self> {
        let idx = basis.index_of(pair).ok_or_else(|| {
            Error::InvalidParameter(format!("{pair:?} is not in sector {:?}", basis.sector()))
        })?;
        let mut amps = vec![0.0; basis.dim()];
        amps[idx] = 1.0;
        Ok(StateVector { basis, amps })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [f64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<f64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn dot(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_dimensions() {
        assert_eq!(SectorBasis::new(2, 1, 1).unwrap().dim(), 4);
        assert_eq!(SectorBasis::new(4, 2, 2).unwrap().dim(), 36);
        let b = SectorBasis::new(8, 4, 4).unwrap();
        assert_eq!((b.dim_up(), b.dim_down(), b.dim()), (70, 70, 4900));
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(
            SectorBasis::with_max_dim(8, 4, 4, 1000),
            Err(Error::CapacityExceeded { dim: 4900, max: 1000 })
        ));
        assert!(SectorBasis::new(3, 4, 0).is_err());
    }

    #[test]
    fn rank_examples() {
        // ascending 2-of-4 words: 0011 0101 0110 1001 1010 1100
        let words = words_with_popcount(4, 2);
        assert_eq!(words, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(rank(0b0011, 2).unwrap(), 0);
        assert_eq!(rank(0b1100, 2).unwrap(), 5);
        assert_eq!(rank(0b0101, 2).unwrap(), 1);
        assert_eq!(rank(0b0110, 2).unwrap(), 2);
        assert!(matches!(rank(0b0111, 2), Err(Error::BadPopcount { found: 3, .. })));
    }

    #[test]
    fn rank_inverts_enumeration() {
        for m in 0..=10 {
            for n in 0..=m {
                let words = words_with_popcount(m, n);
                assert_eq!(words.len() as u64, binomial(m, n));
                for (i, &w) in words.iter().enumerate() {
                    assert_eq!(rank(w, n).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn global_index_bijective() {
        let b = SectorBasis::new(5, 2, 3).unwrap();
        for (i, pair) in b.iter().enumerate() {
            assert_eq!(b.config(i), pair);
            assert_eq!(b.index_of(pair), Some(i));
        }
        assert_eq!(b.index_of(ConfigPair::new(0b1, 0b111)), None);
    }

    #[test]
    fn ladder_examples() {
        let vac = ConfigPair::default();
        assert_eq!(
            apply_op(LadderOp::create(Spin::Up, 0), vac),
            Some((ConfigPair::new(1, 0), 1.0))
        );
        assert_eq!(apply_op(LadderOp::create(Spin::Up, 0), ConfigPair::new(1, 0)), None);
        assert_eq!(apply_op(LadderOp::annihilate(Spin::Down, 1), vac), None);
        // two up electrons are crossed by the down operator
        assert_eq!(
            apply_op(LadderOp::create(Spin::Down, 0), ConfigPair::new(0b11, 0)),
            Some((ConfigPair::new(0b11, 0b1), 1.0))
        );
        assert_eq!(
            apply_op(LadderOp::create(Spin::Down, 0), ConfigPair::new(0b10, 0)),
            Some((ConfigPair::new(0b10, 0b1), -1.0))
        );
        assert_eq!(
            apply_op(LadderOp::create(Spin::Up, 2), ConfigPair::new(0b011, 0b111)),
            Some((ConfigPair::new(0b111, 0b111), 1.0))
        );
    }

    fn all_ops(m: usize) -> Vec<LadderOp> {
        let mut ops = Vec::new();
        for site in 0..m {
            for spin in [Spin::Up, Spin::Down] {
                ops.push(LadderOp::create(spin, site));
                ops.push(LadderOp::annihilate(spin, site));
            }
        }
        ops
    }

    /// Sum of two operator strings applied to a ket, as a sparse map.
    fn combine(
        a: Option<(ConfigPair, f64)>,
        b: Option<(ConfigPair, f64)>,
    ) -> std::collections::BTreeMap<(u32, u32), f64> {
        let mut out = std::collections::BTreeMap::new();
        for (p, s) in a.into_iter().chain(b) {
            *out.entry((p.up, p.down)).or_insert(0.0) += s;
        }
        out.retain(|_, v| *v != 0.0);
        out
    }

    #[test]
    fn canonical_anticommutation() {
        for m in 1..=3 {
            let ops = all_ops(m);
            for up in 0..(1u32 << m) {
                for down in 0..(1u32 << m) {
                    let ket = ConfigPair::new(up, down);
                    for &p in &ops {
                        for &q in &ops {
                            let pq = apply_string(&[p, q], ket);
                            let qp = apply_string(&[q, p], ket);
                            let anti = combine(pq, qp);
                            let delta = p == q.dagger();
                            if delta {
                                let mut expect = std::collections::BTreeMap::new();
                                expect.insert((up, down), 1.0);
                                assert_eq!(anti, expect, "{{{p:?},{q:?}}} on {ket:?}");
                            } else {
                                assert!(anti.is_empty(), "{{{p:?},{q:?}}} on {ket:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn number_operators_are_diagonal() {
        let b = SectorBasis::new(3, 1, 2).unwrap();
        for pair in b.iter() {
            for site in 0..3 {
                for spin in [Spin::Up, Spin::Down] {
                    let n = [LadderOp::create(spin, site), LadderOp::annihilate(spin, site)];
                    match apply_string(&n, pair) {
                        Some((p, s)) => assert_eq!((p, s), (pair, 1.0)),
                        None => {
                            let w = if spin == Spin::Up { pair.up } else { pair.down };
                            assert_eq!(w >> site & 1, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn state_vector_checks_length() {
        let b = Arc::new(SectorBasis::new(2, 1, 1).unwrap());
        assert!(StateVector::new(b.clone(), vec![0.0; 3]).is_err());
        let mut s = StateVector::new(b, vec![3.0, 0.0, 4.0, 0.0]).unwrap();
        s.normalize();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }
}
