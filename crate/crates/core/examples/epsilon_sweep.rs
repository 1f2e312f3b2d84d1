//! Follows the checks as the auxiliary interaction ε is switched off.

use pam_ed::hamiltonian::ModelParams;
use pam_ed::lattice::{build_chain, layer_double, Boundary};
use pam_ed::solver::SolverOptions;
use pam_ed::verify::epsilon_sweep;

fn main() -> pam_ed::Result<()> {
    let lattice = layer_double(&build_chain(2, Boundary::Open)?, 1.0, 1.0)?;
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.0);
    let sweep = epsilon_sweep(&params, &lattice, &[0.5, 0.1, 0.01, 0.0], &SolverOptions::default())?;
    for p in &sweep.points {
        let failed: Vec<&str> = p.report.checks.iter().filter(|c| c.hypothesis_met && !c.pass).map(|c| c.name.as_str()).collect();
        println!("eps = {:<5} verdict {:?} failed {failed:?}", p.eps, p.report.verdict);
    }
    println!(
        "zz drift between the last two points {:.3e} (witness bound {:.2})",
        sweep.zz_drift.unwrap(),
        sweep.drift_witness.unwrap()
    );
    println!("sweep passes: {}", sweep.summary.pass);
    Ok(())
}
