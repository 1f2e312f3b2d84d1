//! Batch driver behind the `pam-ed` binary: runs the tasks of a
//! [`RunConfig`] and writes `report.json`, `corr_<kind>.csv`, `sectors.csv`
//! and `summary.txt` into the output directory.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::{Diagnostic, OutputFormat, RunConfig, Task};
use crate::error::{Error, Result};
use crate::fock::{SectorBasis, StateVector};
use crate::hamiltonian::build;
use crate::observables::{correlation_matrix, total_spin_squared, CorrelationKind, CorrelationMatrix};
use crate::solver::{sector_scan, solve_lowest_with, Method, SectorScan};
use crate::verify::{epsilon_sweep, run_suite, CheckRecord, SweepReport, Verdict, VerificationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        if let Some(dir) = &self.output_dir {
            config.output.directory = dir.clone();
        }
        if let Some(seed) = self.seed {
            config.solver.seed = seed;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub sector: (usize, usize),
    pub dim: usize,
    pub method: Method,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector_scan: Option<SectorScan>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSection {
    pub sector: (usize, usize),
    pub ground_energy: f64,
    pub total_spin_squared: f64,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: Option<RunConfig>,
    pub threads: usize,
    pub status: RunStatus,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlations: Option<CorrelationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepReport>,
}

impl Report {
    fn empty(config: Option<RunConfig>, threads: usize) -> Self {
        Report {
            config,
            threads,
            status: RunStatus::Error,
            exit_code: EXIT_CONFIG,
            error: None,
            diagnostics: Vec::new(),
            verdict: None,
            checks: Vec::new(),
            spectrum: None,
            correlations: None,
            sweep: None,
        }
    }

    fn fail_with(&mut self, err: &Error) {
        self.status = RunStatus::Error;
        self.exit_code = exit_code_for(err);
        self.error = Some(err.to_string());
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_CONFIG,
    }
}

fn thread_count(requested: Option<usize>) -> usize {
    requested
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Loads a config file; a parse failure becomes an error report.
pub fn run_file(path: &Path, overrides: &Overrides, only: Option<Vec<Task>>) -> Report {
    match RunConfig::from_path(path) {
        Ok(mut config) => {
            if let Some(tasks) = only {
                config.tasks = tasks;
            }
            run(config, overrides)
        }
        Err(e) => {
            let mut report = Report::empty(None, thread_count(overrides.threads));
            report.fail_with(&e);
            if let Some(dir) = &overrides.output_dir {
                let _ = write_report(dir, &report);
            }
            report
        }
    }
}

/// Validates and executes `config`, writing all outputs. The returned report
/// is the one written to `report.json`.
pub fn run(mut config: RunConfig, overrides: &Overrides) -> Report {
    overrides.apply(&mut config);
    let config = config.resolved();
    let threads = thread_count(overrides.threads);
    let dir = config.output.directory.clone();
    let mut report = Report::empty(Some(config.clone()), threads);

    let diagnostics = config.validate();
    if !diagnostics.is_empty() {
        report.error = Some(
            diagnostics
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        );
        report.diagnostics = diagnostics;
        let _ = write_report(&dir, &report);
        return report;
    }

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            report.fail_with(&Error::Config(format!("thread pool: {e}")));
            return report;
        }
    };
    let mut matrices: Vec<(String, CorrelationMatrix)> = Vec::new();
    let outcome = pool.install(|| execute(&config, &mut report, &mut matrices));
    match outcome {
        Ok(()) => {
            let ok = report.checks.iter().filter(|c| c.hypothesis_met).all(|c| c.pass);
            report.status = if ok { RunStatus::Pass } else { RunStatus::Fail };
            report.exit_code = if ok { EXIT_PASS } else { EXIT_CHECK_FAILED };
            if !report.checks.is_empty() {
                report.verdict = Some(if ok { Verdict::Pass } else { Verdict::Fail });
            }
        }
        Err(e) => report.fail_with(&e),
    }
    if let Err(e) = write_outputs(&config, &report, &matrices) {
        report.fail_with(&e);
        let _ = write_report(&dir, &report);
    }
    report
}

fn execute(config: &RunConfig, report: &mut Report, matrices: &mut Vec<(String, CorrelationMatrix)>) -> Result<()> {
    let lattice = config.lattice()?;
    let params = config.params();
    params.validate()?;
    let opts = &config.solver;
    let (nu, nd) = config.sector().expect("validated");
    let m = lattice.num_sites();

    if config.has_task(Task::Spectrum) {
        let basis = SectorBasis::with_max_dim(m, nu, nd, opts.max_dim.into())?;
        let h = build(&params, &lattice, &basis)?;
        let res = solve_lowest_with(&h, 6.min(basis.dim()), opts)?;
        let scan = sector_scan(&params, &lattice, nu + nd, opts)?;
        if scan.any_no_convergence() {
            return Err(Error::NoConvergence {
                max_iterations: opts.max_iterations,
                partial: Box::default(),
            });
        }
        report.spectrum = Some(SpectrumSection {
            sector: (nu, nd),
            dim: basis.dim(),
            method: res.method,
            eigenvalues: res.eigenvalues,
            residuals: res.residuals,
            sector_scan: Some(scan),
        });
    }

    if config.has_task(Task::Correlations) {
        let basis = Arc::new(SectorBasis::with_max_dim(m, nu, nd, opts.max_dim.into())?);
        let h = build(&params, &lattice, &basis)?;
        let res = solve_lowest_with(&h, 1, opts)?;
        let state = StateVector::new(basis, res.eigenvectors[0].clone())?;
        let mut files = Vec::new();
        for kind in CorrelationKind::ALL {
            files.push(format!("corr_{}.csv", kind.label()));
            matrices.push((kind.label().to_string(), correlation_matrix(&state, kind)));
        }
        report.correlations = Some(CorrelationSection {
            sector: (nu, nd),
            ground_energy: res.eigenvalues[0],
            total_spin_squared: total_spin_squared(&state),
            files,
        });
    }

    let checks_apply = !config.model.asymmetric;
    if config.has_task(Task::Verify) {
        let suite = run_suite(&params, &lattice, opts)?;
        let VerificationReport { checks, .. } = suite.report;
        report.checks.extend(checks.into_iter().map(|c| gate(c, checks_apply)));
        for (label, matrix) in suite.matrices {
            if !matrices.iter().any(|(l, _)| *l == label) {
                matrices.push((label, matrix));
            }
        }
    }

    if config.has_task(Task::Sweep) {
        let sweep = epsilon_sweep(&params, &lattice, &config.sweep.eps_list, opts)?;
        report.checks.push(gate(sweep.summary.clone(), checks_apply));
        report.sweep = Some(sweep);
    }
    Ok(())
}

/// With `asymmetric = true` every theorem record is reported as skipped.
fn gate(mut rec: CheckRecord, applies: bool) -> CheckRecord {
    if !applies && rec.hypothesis_met {
        rec.hypothesis_met = false;
        rec.pass = false;
        rec.status = crate::verify::Status::Skipped;
        rec.note = Some("hypothesis not met: asymmetric model".into());
    }
    rec
}

fn write_report(dir: &Path, report: &Report) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut out = BufWriter::new(File::create(dir.join("report.json"))?);
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn write_outputs(config: &RunConfig, report: &Report, matrices: &[(String, CorrelationMatrix)]) -> Result<()> {
    let dir = &config.output.directory;
    fs::create_dir_all(dir)?;
    if config.output.formats.contains(&OutputFormat::Json) {
        write_report(dir, report)?;
    }
    if config.output.formats.contains(&OutputFormat::Csv) {
        for (label, matrix) in matrices {
            let mut out = BufWriter::new(File::create(dir.join(format!("corr_{label}.csv")))?);
            matrix.write_csv(&mut out)?;
            out.flush()?;
        }
        if let Some(scan) = report.spectrum.as_ref().and_then(|s| s.sector_scan.as_ref()) {
            let mut out = BufWriter::new(File::create(dir.join("sectors.csv"))?);
            writeln!(out, "n_up,n_down,e0")?;
            for row in &scan.rows {
                let e0 = row.e0.map(|e| format!("{e:.17e}")).unwrap_or_default();
                writeln!(out, "{},{},{}", row.n_up, row.n_down, e0)?;
            }
            out.flush()?;
        }
    }
    fs::write(dir.join("summary.txt"), summary(report))?;
    Ok(())
}

/// Human-readable digest of a report.
pub fn summary(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "status: {:?} (exit {})", report.status, report.exit_code);
    if let Some(err) = &report.error {
        let _ = writeln!(s, "error: {err}");
    }
    if let Some(sp) = &report.spectrum {
        let _ = writeln!(s, "sector {:?}, dim {}, method {:?}", sp.sector, sp.dim, sp.method);
        let _ = writeln!(s, "lowest levels: {:?}", sp.eigenvalues);
        if let Some(scan) = &sp.sector_scan {
            let _ = writeln!(s, "ground sector: {:?}", scan.minimizer);
        }
    }
    if let Some(c) = &report.correlations {
        let _ = writeln!(s, "E0 = {:.12}, <S^2> = {:.3e}", c.ground_energy, c.total_spin_squared);
    }
    for c in &report.checks {
        let measured = c.measured.map_or("-".to_string(), |x| format!("{x:.3e}"));
        let _ = writeln!(
            s,
            "{:<8} {:<24} measured {:>11}  tol {:.1e}{}",
            format!("{:?}", c.status).to_lowercase(),
            c.name,
            measured,
            c.tolerance,
            c.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default()
        );
    }
    if let Some(v) = report.verdict {
        let _ = writeln!(s, "verdict: {v:?}");
    }
    s
}
