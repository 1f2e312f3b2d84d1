//! Run configuration, read from TOML.
//!
//! ```toml
//! tasks = ["spectrum", "verify"]
//!
//! [lattice]
//! kind = "chain"        # chain | square
//! lx = 2
//! ly = 1
//! boundary = "open"     # open | periodic
//!
//! [model]
//! t = 1.0
//! v = 1.0
//! u = 4.0
//! # eps_d = -2.0        # defaults to -u/2
//! eps_aux = 0.0
//! form = "hubbardized"  # hubbardized | original
//! asymmetric = false
//!
//! [filling]
//! mode = "half"         # half | explicit (then n_up, n_down)
//!
//! [solver]
//! method = "auto"       # auto | dense | lanczos
//! tol = 1e-10
//! seed = 20240601
//!
//! [sweep]
//! eps_list = [0.5, 0.1, 0.01, 0.0]
//!
//! [output]
//! directory = "out"
//! formats = ["json", "csv"]
//! ```
//!
//! Every section and key is optional; an empty file runs the defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{sector_dimension, MAX_SITES};
use crate::hamiltonian::{Form, ModelParams};
use crate::lattice::{build_chain, build_square, layer_double, Boundary, LatticeGraph};
use crate::solver::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    #[default]
    Chain,
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeConfig {
    pub kind: LatticeKind,
    pub lx: usize,
    pub ly: usize,
    pub boundary: Boundary,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            kind: LatticeKind::Chain,
            lx: 2,
            ly: 1,
            boundary: Boundary::Open,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub t: f64,
    pub v: f64,
    pub u: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_d: Option<f64>,
    pub eps_aux: f64,
    pub form: Form,
    /// Allows eps_d ≠ -u/2; theorem checks are then skipped.
    pub asymmetric: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            t: 1.0,
            v: 1.0,
            u: 4.0,
            eps_d: None,
            eps_aux: 0.0,
            form: Form::Hubbardized,
            asymmetric: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FillingMode {
    #[default]
    Half,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FillingConfig {
    pub mode: FillingMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_up: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_down: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Spectrum,
    Correlations,
    Verify,
    Sweep,
}

fn default_tasks() -> Vec<Task> {
    vec![Task::Spectrum, Task::Verify]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub eps_list: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            eps_list: vec![0.5, 0.1, 0.01, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            formats: vec![OutputFormat::Json, OutputFormat::Csv],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeConfig,
    pub model: ModelConfig,
    pub filling: FillingConfig,
    pub solver: SolverOptions,
    #[serde(default = "default_tasks")]
    pub tasks: Vec<Task>,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice: LatticeConfig::default(),
            model: ModelConfig::default(),
            filling: FillingConfig::default(),
            solver: SolverOptions::default(),
            tasks: default_tasks(),
            sweep: SweepConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// One problem found by [`RunConfig::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fills defaulted values: eps_d = -u/2 when omitted.
    pub fn resolved(&self) -> RunConfig {
        let mut out = self.clone();
        out.model.eps_d.get_or_insert(-self.model.u / 2.0);
        out.tasks.sort();
        out.tasks.dedup();
        out
    }

    pub fn params(&self) -> ModelParams {
        let m = &self.model;
        ModelParams {
            t: m.t,
            v: m.v,
            u: m.u,
            eps_d: m.eps_d.unwrap_or(-m.u / 2.0),
            eps_aux: m.eps_aux,
            form: m.form,
        }
    }

    /// The base lattice, then the two-layer lattice.
    pub fn lattice(&self) -> Result<LatticeGraph> {
        let l = &self.lattice;
        let base = match l.kind {
            LatticeKind::Chain => {
                if l.ly != 1 {
                    return Err(Error::Config(format!("a chain has ly = 1, got {}", l.ly)));
                }
                build_chain(l.lx, l.boundary)?
            }
            LatticeKind::Square => build_square(l.lx, l.ly, l.boundary)?,
        };
        layer_double(&base, self.model.t, self.model.v)
    }

    pub fn num_sites(&self) -> usize {
        2 * self.lattice.lx * self.lattice.ly
    }

    /// Target sector: (N_Λ, N_Λ) at half filling, else the explicit counts.
    pub fn sector(&self) -> Option<(usize, usize)> {
        match self.filling.mode {
            FillingMode::Half => Some((self.num_sites() / 2, self.num_sites() / 2)),
            FillingMode::Explicit => Some((self.filling.n_up?, self.filling.n_down?)),
        }
    }

    pub fn is_half_filled(&self) -> bool {
        let half = self.num_sites() / 2;
        self.sector() == Some((half, half))
    }

    pub fn has_task(&self, task: Task) -> bool {
        self.tasks.contains(&task)
    }

    /// All violations, without executing anything.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut diag = |field: &str, message: String| {
            out.push(Diagnostic {
                field: field.to_string(),
                message,
            })
        };

        let l = &self.lattice;
        if l.lx == 0 || l.ly == 0 {
            diag("lattice", format!("extents must be positive, got {} x {}", l.lx, l.ly));
        } else if self.num_sites() > MAX_SITES {
            diag(
                "lattice",
                format!("{} sites exceed the {MAX_SITES}-site limit", self.num_sites()),
            );
        } else if let Err(e) = self.lattice() {
            diag("lattice", e.to_string());
        }

        let m = &self.model;
        for (name, x) in [("model.t", m.t), ("model.v", m.v), ("model.u", m.u), ("model.eps_aux", m.eps_aux)] {
            if !x.is_finite() {
                diag(name, format!("{x} is not finite"));
            }
        }
        for (name, x) in [("model.t", m.t), ("model.v", m.v)] {
            if x < 0.0 {
                diag(name, format!("{x} must be non-negative"));
            }
        }
        if let Some(eps_d) = m.eps_d {
            if !eps_d.is_finite() {
                diag("model.eps_d", format!("{eps_d} is not finite"));
            } else if !self.params().is_symmetric() && !m.asymmetric {
                diag(
                    "model.eps_d",
                    format!(
                        "symmetric condition violated: eps_d = {eps_d} but -u/2 = {}; set asymmetric = true to allow",
                        -m.u / 2.0
                    ),
                );
            }
        }
        if m.asymmetric && m.form == Form::Hubbardized {
            diag(
                "model.asymmetric",
                "the hubbardized form has no eps_d; use form = \"original\"".into(),
            );
        }

        let sites = self.num_sites();
        match self.sector() {
            None => diag("filling", "explicit mode needs n_up and n_down".into()),
            Some((nu, nd)) if nu > sites || nd > sites => {
                diag("filling", format!("({nu}, {nd}) does not fit {sites} sites"))
            }
            Some((nu, nd)) => {
                let dim = sector_dimension(sites, nu, nd);
                if dim > u128::from(self.solver.max_dim) {
                    diag(
                        "solver.max_dim",
                        format!("capacity exceeded: sector ({nu}, {nd}) has dimension {dim} > {}", self.solver.max_dim),
                    );
                }
            }
        }
        let needs_half = self.has_task(Task::Verify) || self.has_task(Task::Sweep);
        if needs_half && self.sector().is_some() && !self.is_half_filled() {
            diag("filling", "verify and sweep run at half filling".into());
        }
        if self.has_task(Task::Spectrum) && self.sector().is_some_and(|(nu, nd)| (nu + nd) % 2 == 1) {
            diag("filling", "the sector scan needs an even electron count".into());
        }

        let s = &self.solver;
        if !(s.tol > 0.0 && s.tol.is_finite()) {
            diag("solver.tol", format!("{} must be positive", s.tol));
        }
        if s.max_iterations == 0 {
            diag("solver.max_iterations", "must be positive".into());
        }

        if self.tasks.is_empty() {
            diag("tasks", "no task requested".into());
        }
        if self.has_task(Task::Sweep) {
            let e = &self.sweep.eps_list;
            if e.is_empty() || e.last() != Some(&0.0) {
                diag("sweep.eps_list", "must be non-empty and end at 0".into());
            } else if e.iter().any(|x| !x.is_finite() || *x < 0.0) {
                diag("sweep.eps_list", "entries must be finite and non-negative".into());
            } else if e.windows(2).any(|w| w[0] <= w[1]) {
                diag("sweep.eps_list", "must be strictly decreasing".into());
            }
        }
        if self.output.formats.is_empty() {
            diag("output.formats", "no output format selected".into());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default() {
        let c = RunConfig::from_toml_str("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert!(c.validate().is_empty());
        assert_eq!(c.sector(), Some((2, 2)));
        assert_eq!(c.params(), ModelParams::default());
    }

    #[test]
    fn omitted_eps_d_is_filled() {
        let c = RunConfig::from_toml_str("[model]\nu = 6.0\n").unwrap();
        assert!(c.validate().is_empty());
        assert_eq!(c.resolved().model.eps_d, Some(-3.0));
    }

    #[test]
    fn asymmetric_eps_d_needs_flag() {
        let c = RunConfig::from_toml_str("[model]\neps_d = -1.0\n").unwrap();
        let d = c.validate();
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("symmetric condition violated"));
        let c = RunConfig::from_toml_str("[model]\neps_d = -1.0\nasymmetric = true\nform = \"original\"\n").unwrap();
        assert!(c.validate().is_empty());
    }

    #[test]
    fn periodic_odd_chain_is_rejected() {
        let c = RunConfig::from_toml_str("[lattice]\nlx = 3\nboundary = \"periodic\"\n").unwrap();
        let d = c.validate();
        assert!(d.iter().any(|x| x.message.contains("not bipartite")), "{d:?}");
    }

    #[test]
    fn capacity_diagnostic_reports_dimension() {
        let c = RunConfig::from_toml_str("[lattice]\nlx = 4\n[solver]\nmax_dim = 1000\n").unwrap();
        let d = c.validate();
        assert!(d.iter().any(|x| x.message.contains("4900")), "{d:?}");
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(RunConfig::from_toml_str("[model]\nU = 4.0\n").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let c = RunConfig::from_toml_str("tasks = [\"verify\"]\n[lattice]\nkind = \"square\"\nlx = 2\nly = 2\n").unwrap();
        let r = c.resolved();
        assert_eq!(RunConfig::from_toml_str(&r.to_toml_string().unwrap()).unwrap(), r);
    }
}
