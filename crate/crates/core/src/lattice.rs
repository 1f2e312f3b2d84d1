//! Finite bipartite lattices and the two-layer lattice used to rewrite the
//! periodic Anderson model as a generalized Hubbard model.
//!
//! Site layout of a doubled lattice with `n` base sites: conduction (c) sites
//! are `0..n`, localized (d) sites are `n..2n`, and `partner(i) = i + n`.

use std::collections::VecDeque;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

/// Layer label: `Conduction` is the itinerant c-layer, `Localized` the d-layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layer {
    Conduction,
    Localized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

impl Sublattice {
    /// The staggered sign: +1 on A, -1 on B.
    pub fn sign(self) -> f64 {
        match self {
            Sublattice::A => 1.0,
            Sublattice::B => -1.0,
        }
    }

    pub fn flipped(self) -> Sublattice {
        match self {
            Sublattice::A => Sublattice::B,
            Sublattice::B => Sublattice::A,
        }
    }
}

/// A hopping bond between sites `r` and `h` with amplitude `t_rh`.
///
/// The Hamiltonian carries `-t_rh (f†_r f_h + f†_h f_r)` for each bond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bond {
    pub r: usize,
    pub h: usize,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGraph {
    num_sites: usize,
    bonds: Vec<Bond>,
    layer: Vec<Layer>,
    partner: Vec<Option<usize>>,
    sublattice: Vec<Sublattice>,
}

impl LatticeGraph {
    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn layer(&self, site: usize) -> Layer {
        self.layer[site]
    }

    pub fn partner(&self, site: usize) -> Option<usize> {
        self.partner[site]
    }

    pub fn sublattice(&self, site: usize) -> Sublattice {
        self.sublattice[site]
    }

    pub fn sublattices(&self) -> &[Sublattice] {
        &self.sublattice
    }

    /// ε(r): +1 on sublattice A, -1 on B.
    pub fn stagger(&self, site: usize) -> f64 {
        self.sublattice[site].sign()
    }

    /// True when the graph came out of [`layer_double`].
    pub fn is_doubled(&self) -> bool {
        self.partner.iter().all(Option::is_some)
    }

    /// Number of base-lattice sites N_Λ (half the site count of a doubled lattice).
    pub fn base_sites(&self) -> usize {
        if self.is_doubled() {
            self.num_sites / 2
        } else {
            self.num_sites
        }
    }

    pub fn conduction_sites(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_sites).filter(|&s| self.layer[s] == Layer::Conduction)
    }

    pub fn localized_sites(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_sites).filter(|&s| self.layer[s] == Layer::Localized)
    }

    /// Same graph with the A/B labels exchanged. Products ε(r)ε(h) are unchanged.
    pub fn with_flipped_gauge(&self) -> LatticeGraph {
        let mut g = self.clone();
        for s in &mut g.sublattice {
            *s = s.flipped();
        }
        g
    }

    /// Writes one bond per line as `r h t_rh`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for b in &self.bonds {
            writeln!(out, "{} {} {}", b.r, b.h, b.amplitude)?;
        }
        Ok(())
    }

    fn single_layer(num_sites: usize, bonds: Vec<Bond>) -> Result<LatticeGraph> {
        let mut g = LatticeGraph {
            num_sites,
            bonds,
            layer: vec![Layer::Conduction; num_sites],
            partner: vec![None; num_sites],
            sublattice: vec![Sublattice::A; num_sites],
        };
        g.sublattice = two_color(&g)?;
        Ok(g)
    }
}

/// Checks one periodic direction of extent `len`.
fn check_wrap(len: usize) -> Result<()> {
    if len % 2 == 1 {
        return Err(Error::NonBipartite {
            cycle: (0..len).collect(),
        });
    }
    if len == 2 {
        return Err(Error::DegenerateBond { extent: len });
    }
    Ok(())
}

fn unit_bond(a: usize, b: usize) -> Bond {
    Bond {
        r: a.min(b),
        h: a.max(b),
        amplitude: 1.0,
    }
}

/// Open path or even ring of `len` sites with unit amplitudes.
pub fn build_chain(len: usize, boundary: Boundary) -> Result<LatticeGraph> {
    build_square(len, 1, boundary)
}

/// `lx × ly` nearest-neighbour square lattice with unit amplitudes.
///
/// Site `(x, y)` has index `x + lx * y`. A periodic direction must have even
/// extent of at least 4; with a single row (`ly == 1`) only the x direction
/// is wrapped.
pub fn build_square(lx: usize, ly: usize, boundary: Boundary) -> Result<LatticeGraph> {
    if lx == 0 || ly == 0 {
        return Err(Error::InvalidParameter(format!(
            "lattice extents must be positive, got {lx}x{ly}"
        )));
    }
    let wrap_y = boundary == Boundary::Periodic && ly > 1;
    if boundary == Boundary::Periodic {
        check_wrap(lx)?;
        if wrap_y {
            check_wrap(ly)?;
        }
    }
    let idx = |x: usize, y: usize| x + lx * y;
    let mut bonds = Vec::new();
    for y in 0..ly {
        for x in 0..lx {
            if x + 1 < lx {
                bonds.push(unit_bond(idx(x, y), idx(x + 1, y)));
            } else if boundary == Boundary::Periodic {
                bonds.push(unit_bond(idx(x, y), idx(0, y)));
            }
        }
    }
    for y in 0..ly {
        for x in 0..lx {
            if y + 1 < ly {
                bonds.push(unit_bond(idx(x, y), idx(x, y + 1)));
            } else if wrap_y {
                bonds.push(unit_bond(idx(x, y), idx(x, 0)));
            }
        }
    }
    LatticeGraph::single_layer(lx * ly, bonds)
}

/// Builds the two-layer lattice: base bonds get amplitude `+t`, each c-site
/// is joined to its d-site by a bond of amplitude `-v`, and the d-layer has
/// no intralayer bonds.
pub fn layer_double(layer1: &LatticeGraph, t: f64, v: f64) -> Result<LatticeGraph> {
    if layer1.partner.iter().any(Option::is_some) {
        return Err(Error::InvalidParameter(
            "layer_double expects a single-layer lattice".into(),
        ));
    }
    if !(t.is_finite() && t >= 0.0) || !(v.is_finite() && v >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hopping t = {t} and hybridization V = {v} must be finite and non-negative"
        )));
    }
    let n = layer1.num_sites;
    let mut bonds: Vec<Bond> = layer1
        .bonds
        .iter()
        .map(|b| Bond {
            amplitude: t,
            ..*b
        })
        .collect();
    bonds.extend((0..n).map(|i| Bond {
        r: i,
        h: i + n,
        amplitude: -v,
    }));
    let mut layer = vec![Layer::Conduction; n];
    layer.extend(std::iter::repeat_n(Layer::Localized, n));
    let partner = (0..2 * n).map(|s| Some((s + n) % (2 * n))).collect();
    let mut g = LatticeGraph {
        num_sites: 2 * n,
        bonds,
        layer,
        partner,
        sublattice: Vec::new(),
    };
    g.sublattice = two_color(&g)?;
    Ok(g)
}

/// BFS 2-coloring over all bonds. The lowest-index site of every connected
/// component is placed on sublattice A.
pub fn two_color(graph: &LatticeGraph) -> Result<Vec<Sublattice>> {
    let n = graph.num_sites;
    let mut adj = vec![Vec::new(); n];
    for b in &graph.bonds {
        if b.r == b.h {
            return Err(Error::NonBipartite { cycle: vec![b.r] });
        }
        adj[b.r].push(b.h);
        adj[b.h].push(b.r);
    }
    let mut color: Vec<Option<Sublattice>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(Sublattice::A);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued sites are colored");
            for &w in &adj[u] {
                match color[w] {
                    None => {
                        color[w] = Some(cu.flipped());
                        parent[w] = u;
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => {
                        return Err(Error::NonBipartite {
                            cycle: odd_cycle(&parent, u, w),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(color.into_iter().map(|c| c.expect("all sites visited")).collect())
}

/// Closes the BFS-tree paths from `u` and `w` at their lowest common ancestor.
fn odd_cycle(parent: &[usize], u: usize, w: usize) -> Vec<usize> {
    let path_to_root = |mut s: usize| {
        let mut p = vec![s];
        while parent[s] != usize::MAX {
            s = parent[s];
            p.push(s);
        }
        p
    };
    let pu = path_to_root(u);
    let pw = path_to_root(w);
    let lca = *pu
        .iter()
        .find(|s| pw.contains(s))
        .expect("same BFS tree");
    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&s| s != lca).collect();
    cycle.push(lca);
    let back: Vec<usize> = pw.iter().copied().take_while(|&s| s != lca).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> LatticeGraph {
        LatticeGraph {
            num_sites: 3,
            bonds: vec![unit_bond(0, 1), unit_bond(1, 2), unit_bond(0, 2)],
            layer: vec![Layer::Conduction; 3],
            partner: vec![None; 3],
            sublattice: vec![Sublattice::A; 3],
        }
    }

    #[test]
    fn chain_examples() {
        let g = build_chain(2, Boundary::Open).unwrap();
        assert_eq!(g.num_sites(), 2);
        assert_eq!(g.bonds(), &[unit_bond(0, 1)]);

        assert!(matches!(
            build_chain(3, Boundary::Periodic),
            Err(Error::NonBipartite { .. })
        ));
        assert!(matches!(
            build_chain(2, Boundary::Periodic),
            Err(Error::DegenerateBond { extent: 2 })
        ));

        let ring = build_chain(4, Boundary::Periodic).unwrap();
        assert_eq!(ring.bonds().len(), 4);
        assert_eq!(
            ring.sublattices(),
            &[Sublattice::A, Sublattice::B, Sublattice::A, Sublattice::B]
        );
    }

    #[test]
    fn square_examples() {
        let g = build_square(2, 2, Boundary::Open).unwrap();
        assert_eq!(g.num_sites(), 4);
        assert_eq!(g.bonds().len(), 4);
        assert!(matches!(
            build_square(3, 3, Boundary::Periodic),
            Err(Error::NonBipartite { .. })
        ));
        assert_eq!(
            build_square(2, 1, Boundary::Open).unwrap(),
            build_chain(2, Boundary::Open).unwrap()
        );
        let torus = build_square(4, 4, Boundary::Periodic).unwrap();
        assert_eq!(torus.bonds().len(), 32);
        assert!(matches!(build_square(0, 2, Boundary::Open), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn doubling_single_site() {
        let g = layer_double(&build_chain(1, Boundary::Open).unwrap(), 1.0, 0.7).unwrap();
        assert_eq!(g.num_sites(), 2);
        assert_eq!(g.bonds(), &[Bond { r: 0, h: 1, amplitude: -0.7 }]);
    }

    #[test]
    fn doubling_two_site_chain() {
        let g = layer_double(&build_chain(2, Boundary::Open).unwrap(), 1.0, 0.5).unwrap();
        assert_eq!(g.num_sites(), 4);
        assert_eq!(
            g.bonds(),
            &[
                Bond { r: 0, h: 1, amplitude: 1.0 },
                Bond { r: 0, h: 2, amplitude: -0.5 },
                Bond { r: 1, h: 3, amplitude: -0.5 },
            ]
        );
        use Sublattice::*;
        assert_eq!(g.sublattices(), &[A, B, B, A]);
        assert_eq!(g.layer(1), Layer::Conduction);
        assert_eq!(g.layer(2), Layer::Localized);
        assert_eq!(g.partner(1), Some(3));
        assert_eq!(g.partner(3), Some(1));
        assert_eq!(g.base_sites(), 2);
    }

    #[test]
    fn doubling_plaquette_counts() {
        let g = layer_double(&build_square(2, 2, Boundary::Open).unwrap(), 1.0, 1.0).unwrap();
        assert_eq!(g.num_sites(), 8);
        let vertical = g.bonds().iter().filter(|b| b.amplitude == -1.0).count();
        assert_eq!(g.bonds().len(), 8);
        assert_eq!(vertical, 4);
        assert_eq!(g.localized_sites().count(), 4);
    }

    #[test]
    fn doubling_rejects_bad_input() {
        let base = build_chain(2, Boundary::Open).unwrap();
        assert!(layer_double(&base, -1.0, 1.0).is_err());
        assert!(layer_double(&base, 1.0, f64::NAN).is_err());
        let doubled = layer_double(&base, 1.0, 1.0).unwrap();
        assert!(layer_double(&doubled, 1.0, 1.0).is_err());
    }

    #[test]
    fn two_color_examples() {
        use Sublattice::*;
        let path = build_chain(3, Boundary::Open).unwrap();
        assert_eq!(two_color(&path).unwrap(), vec![A, B, A]);
        match two_color(&triangle()) {
            Err(Error::NonBipartite { cycle }) => {
                let mut c = cycle.clone();
                c.sort();
                assert_eq!(c, vec![0, 1, 2]);
            }
            other => panic!("expected NonBipartite, got {other:?}"),
        }
    }

    #[test]
    fn every_bond_crosses_sublattices() {
        for (lx, ly, bc) in [
            (1, 1, Boundary::Open),
            (3, 1, Boundary::Open),
            (4, 1, Boundary::Periodic),
            (3, 2, Boundary::Open),
            (4, 4, Boundary::Periodic),
        ] {
            let base = build_square(lx, ly, bc).unwrap();
            let g = layer_double(&base, 1.0, 0.5).unwrap();
            assert_eq!(g.bonds().len(), base.bonds().len() + base.num_sites());
            for b in g.bonds() {
                assert_eq!(g.stagger(b.r) * g.stagger(b.h), -1.0);
            }
            for s in 0..g.num_sites() {
                let p = g.partner(s).unwrap();
                assert_eq!(g.partner(p), Some(s));
                assert_eq!(g.stagger(s) * g.stagger(p), -1.0);
            }
        }
    }

    #[test]
    fn edge_list_format() {
        let g = layer_double(&build_chain(2, Boundary::Open).unwrap(), 1.0, 0.5).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1 1\n0 2 -0.5\n1 3 -0.5\n");
    }
}
