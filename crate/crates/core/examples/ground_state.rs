//! Ground state of the 2x2 two-layer square (D = 4900) with Lanczos, a dense
//! cross-check on the chain, and a scan over all sectors at half filling.

use pam_ed::fock::SectorBasis;
use pam_ed::hamiltonian::{build_hubbardized, ModelParams};
use pam_ed::lattice::{build_chain, build_square, layer_double, Boundary};
use pam_ed::solver::{sector_scan, solve_lowest_with, Method, SolverOptions};

fn main() -> pam_ed::Result<()> {
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
    let opts = SolverOptions::default();

    let square = layer_double(&build_square(2, 2, Boundary::Open)?, 1.0, 1.0)?;
    let basis = SectorBasis::new(square.num_sites(), 4, 4)?;
    let h = build_hubbardized(&params, &square, &basis)?;
    let res = solve_lowest_with(&h, 3, &opts)?;
    println!("square, D = {}: {:?} in {} matvecs", basis.dim(), res.method, res.iterations);
    for (e, r) in res.eigenvalues.iter().zip(&res.residuals) {
        println!("  E = {e:.12}  residual {r:.1e}");
    }

    let chain = layer_double(&build_chain(2, Boundary::Open)?, 1.0, 1.0)?;
    let basis = SectorBasis::new(chain.num_sites(), 2, 2)?;
    let h = build_hubbardized(&params, &chain, &basis)?;
    let dense = solve_lowest_with(&h, 2, &opts.with_method(Method::Dense))?;
    let lanczos = solve_lowest_with(&h, 2, &opts.with_method(Method::Lanczos))?;
    println!(
        "chain: dense E0 {:.14}, Lanczos E0 {:.14}, gap {:.6}",
        dense.ground_energy(),
        lanczos.ground_energy(),
        dense.gap().unwrap()
    );

    let scan = sector_scan(&params, &chain, chain.num_sites(), &opts)?;
    for row in &scan.rows {
        println!("  sector ({}, {}) dim {:>3}  E0 {:?}", row.n_up, row.n_down, row.dim, row.e0);
    }
    println!("minimizer {:?}, margin {:?}", scan.minimizer, scan.margin);
    Ok(())
}
