//! Runs the full check suite on a chain and on the 2x2 square, then shows
//! that an injected triplet fails the sign-pattern check.

use pam_ed::hamiltonian::ModelParams;
use pam_ed::lattice::{build_chain, build_square, layer_double, Boundary};
use pam_ed::solver::SolverOptions;
use pam_ed::verify::{injected_triplet, run_suite, theorem2_on_state};

fn main() -> pam_ed::Result<()> {
    let opts = SolverOptions::default();
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.1);
    let lattices = [
        ("chain L=2", layer_double(&build_chain(2, Boundary::Open)?, 1.0, 1.0)?),
        ("square 2x2", layer_double(&build_square(2, 2, Boundary::Open)?, 1.0, 1.0)?),
    ];
    for (name, lattice) in &lattices {
        let suite = run_suite(&params, lattice, &opts)?;
        println!("{name}: verdict {:?}", suite.report.verdict);
        for c in &suite.report.checks {
            println!(
                "  {:<24} {:?}  measured {:>10.3e}  tolerance {:.1e}",
                c.name,
                c.status,
                c.measured.unwrap_or(f64::NAN),
                c.tolerance
            );
        }
    }

    let (_, chain) = &lattices[0];
    let triplet = injected_triplet(&params, chain, &opts)?;
    let rec = theorem2_on_state(&params, chain, &triplet);
    println!("injected triplet: {:?} (worst violation {:.3})", rec.status, rec.measured.unwrap());

    let skipped = run_suite(&ModelParams::symmetric(1.0, 1.0, 0.0, 0.0), chain, &opts)?;
    let names: Vec<&str> = skipped.report.checks.iter().filter(|c| !c.hypothesis_met).map(|c| c.name.as_str()).collect();
    println!("U = 0, eps = 0 skips {names:?}");
    Ok(())
}
