use std::sync::Arc;

use pam_ed::fock::{rank, words_with_popcount, SectorBasis, StateVector};
use pam_ed::hamiltonian::{build, build_hubbardized, dense_spectrum, reference, Form, ModelParams, SparseOperator};
use pam_ed::lattice::{build_chain, build_square, layer_double, Boundary, LatticeGraph};
use pam_ed::observables::{correlation_matrix, CorrelationKind};
use pam_ed::solver::{solve_lowest_with, Method, SolverOptions};
use pam_ed::symmetry::particle_hole_map;
use proptest::prelude::*;

fn lattice_strategy() -> impl Strategy<Value = (usize, usize, bool)> {
    prop_oneof![
        (1usize..=3).prop_map(|l| (l, 1, false)),
        Just((4, 1, true)),
        Just((2, 2, false)),
    ]
}

fn doubled((lx, ly, periodic): (usize, usize, bool), t: f64, v: f64) -> LatticeGraph {
    let bc = if periodic { Boundary::Periodic } else { Boundary::Open };
    let base = if ly == 1 {
        build_chain(lx, bc).unwrap()
    } else {
        build_square(lx, ly, bc).unwrap()
    };
    layer_double(&base, t, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::with_cases(48) })]

    #[test]
    fn rank_is_position_in_enumeration(m in 1usize..=12, n_frac in 0.0f64..=1.0) {
        let n = ((m as f64) * n_frac).round() as usize;
        for (i, &w) in words_with_popcount(m, n).iter().enumerate() {
            prop_assert_eq!(rank(w, n).unwrap(), i);
        }
    }

    #[test]
    fn sparse_matches_reference(
        shape in lattice_strategy(),
        t in 0.0f64..2.0, v in 0.0f64..2.0, u in -6.0f64..6.0,
        eps_d in -4.0f64..4.0, eps in -1.0f64..1.0,
        nu_frac in 0.0f64..=1.0, nd_frac in 0.0f64..=1.0,
        original in any::<bool>(),
    ) {
        let lattice = doubled(shape, t, v);
        let m = lattice.num_sites();
        let nu = (m as f64 * nu_frac).round() as usize;
        let nd = (m as f64 * nd_frac).round() as usize;
        prop_assume!(pam_ed::fock::sector_dimension(m, nu, nd) <= 800);
        let params = ModelParams {
            t, v, u, eps_d, eps_aux: eps,
            form: if original { Form::Original } else { Form::Hubbardized },
        };
        let basis = SectorBasis::new(m, nu, nd).unwrap();
        let sparse = build(&params, &lattice, &basis).unwrap();
        prop_assert!(sparse.symmetric());
        let naive = reference::dense_hamiltonian(&params, &lattice, &basis).unwrap();
        let scale = 1.0 + u.abs() + eps_d.abs();
        prop_assert!((sparse.to_dense() - naive).abs().max() <= 1e-13 * scale);
    }

    #[test]
    fn particle_hole_conjugates_hamiltonian(
        shape in lattice_strategy(),
        t in 0.0f64..2.0, v in 0.1f64..2.0, u in -6.0f64..6.0, eps in -1.0f64..1.0,
        nu_frac in 0.0f64..=1.0, nd_frac in 0.0f64..=1.0,
    ) {
        // U₀ H(ε, U) U₀⁻¹ = H(−ε, −U), entry by entry
        let lattice = doubled(shape, t, v);
        let m = lattice.num_sites();
        let nu = (m as f64 * nu_frac).round() as usize;
        let nd = (m as f64 * nd_frac).round() as usize;
        prop_assume!(pam_ed::fock::sector_dimension(m, nu, nd) <= 400);
        let params = ModelParams::symmetric(t, v, u, eps);
        let src = Arc::new(SectorBasis::new(m, nu, nd).unwrap());
        let map = particle_hole_map(&src, lattice.sublattices()).unwrap();
        let h = build_hubbardized(&params, &lattice, &src).unwrap().to_dense();
        let g = build_hubbardized(&params.negated(), &lattice, map.image()).unwrap();
        for i in 0..src.dim() {
            let (pi, si) = map.entry(i);
            for j in 0..src.dim() {
                let (pj, sj) = map.entry(j);
                prop_assert!((si * sj * h[(i, j)] - g.get(pi, pj)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn lanczos_matches_dense_on_random_operators(
        n in 2usize..60,
        entries in proptest::collection::vec((0usize..60, 0usize..60, -1.0f64..1.0), 0..200),
        k in 1usize..4,
        seed in any::<u64>(),
    ) {
        let k = k.min(n);
        let mut rows = vec![Vec::new(); n];
        for (i, j, x) in entries {
            let (i, j) = (i % n, j % n);
            rows[i].push((j, x));
            if i != j {
                rows[j].push((i, x));
            }
        }
        let op = SparseOperator::from_rows(n, rows).unwrap();
        let dense = dense_spectrum(op.to_dense());
        let opts = SolverOptions { seed, ..SolverOptions::default().with_method(Method::Lanczos) };
        let res = solve_lowest_with(&op, k, &opts).unwrap();
        for (a, b) in res.eigenvalues.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{:?} vs {:?}", res.eigenvalues, &dense[..k]);
        }
        for (r, l) in res.residuals.iter().zip(&res.eigenvalues) {
            prop_assert!(*r <= 1e-10 * l.abs().max(1.0));
        }
    }
}

#[test]
fn dense_and_lanczos_ground_states_give_same_correlations() {
    let lattice = doubled((2, 1, false), 1.0, 1.0);
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
    let basis = Arc::new(SectorBasis::new(4, 2, 2).unwrap());
    let h = build_hubbardized(&params, &lattice, &basis).unwrap();
    let dense = solve_lowest_with(&h, 1, &SolverOptions::default().with_method(Method::Dense)).unwrap();
    let lanczos = solve_lowest_with(&h, 1, &SolverOptions::default().with_method(Method::Lanczos)).unwrap();
    let a = StateVector::new(basis.clone(), dense.eigenvectors[0].clone()).unwrap();
    let b = StateVector::new(basis, lanczos.eigenvectors[0].clone()).unwrap();
    for kind in CorrelationKind::ALL {
        let diff = correlation_matrix(&a, kind).max_abs_diff(&correlation_matrix(&b, kind));
        assert!(diff < 1e-9, "{kind:?}: {diff}");
    }
    // same gauge convention on both paths
    assert!(a.dot(&b) > 1.0 - 1e-12);
}

#[test]
fn lanczos_is_reproducible_for_a_fixed_seed() {
    let lattice = doubled((2, 2, false), 1.0, 1.0);
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
    let basis = SectorBasis::new(8, 4, 4).unwrap();
    let h = build_hubbardized(&params, &lattice, &basis).unwrap();
    let opts = SolverOptions::default().with_method(Method::Lanczos);
    let a = solve_lowest_with(&h, 2, &opts).unwrap();
    let b = solve_lowest_with(&h, 2, &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.gap().unwrap() > 1e-3);
}
