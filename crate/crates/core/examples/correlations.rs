//! Spin and pair correlation matrices of the half-filled ground state, its
//! total spin, and the W coefficient matrix of the attractive-frame state.

use std::sync::Arc;

use pam_ed::fock::{SectorBasis, StateVector};
use pam_ed::hamiltonian::{build_hubbardized, ModelParams};
use pam_ed::lattice::{build_chain, layer_double, Boundary, LatticeGraph};
use pam_ed::observables::{correlation_matrix, extract_w, odlro_summary, total_spin_squared, CorrelationKind};
use pam_ed::solver::{solve_lowest_with, SolverOptions};

fn ground(params: &ModelParams, lattice: &LatticeGraph) -> pam_ed::Result<StateVector> {
    let m = lattice.num_sites();
    let basis = Arc::new(SectorBasis::new(m, m / 2, m / 2)?);
    let h = build_hubbardized(params, lattice, &basis)?;
    let res = solve_lowest_with(&h, 1, &SolverOptions::default())?;
    StateVector::new(basis, res.eigenvectors[0].clone())
}

fn main() -> pam_ed::Result<()> {
    let lattice = layer_double(&build_chain(2, Boundary::Open)?, 1.0, 1.0)?;
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
    let psi = ground(&params, &lattice)?;
    println!("<S^2> = {:.2e}", total_spin_squared(&psi));

    for kind in [CorrelationKind::Transverse, CorrelationKind::Longitudinal] {
        let c = correlation_matrix(&psi, kind);
        println!("{} correlations (rows r, columns h):", kind.label());
        for r in 0..c.num_sites() {
            let row: Vec<String> = (0..c.num_sites()).map(|h| format!("{:+.5}", c.get(r, h))).collect();
            println!("  {}", row.join(" "));
        }
    }

    let attractive = ground(&params.negated(), &lattice)?;
    let pair = correlation_matrix(&attractive, CorrelationKind::Pair);
    let w = extract_w(&attractive)?;
    let odlro = odlro_summary(&pair)?;
    println!("pair matrix min off-diagonal {:.5}", pair.min_off_diagonal().unwrap());
    println!(
        "W: {}x{}, min eigenvalue of symmetric part {:.3e}, relative asymmetry {:.1e}",
        w.matrix.nrows(),
        w.matrix.ncols(),
        w.min_symmetric_eigenvalue(),
        w.relative_asymmetry()
    );
    println!("largest pair eigenvalue {:.5}, per site {:.5}", odlro.lambda_max, odlro.per_site);

    let mut csv = Vec::new();
    pair.write_csv(&mut csv)?;
    println!("{}", String::from_utf8_lossy(&csv).lines().take(4).collect::<Vec<_>>().join("\n"));
    Ok(())
}
