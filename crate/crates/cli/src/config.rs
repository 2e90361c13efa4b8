//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "name": "svm-desk",
//!   "seed": 1,
//!   "output_dir": "out/svm",
//!   "problems": [{ "family": "svm", "n": 500, "p": 100, "density": 0.05, "r": 50 }],
//!   "solvers": [{ "method": "ac_fista" }, { "method": "ac_fista_restart" }]
//! }
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use acfista_core::problems::QpOmega;
use acfista_core::{IterateRule, SolverConfig, TerminationMode};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn default_stride() -> usize {
    1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Keep every `trace_stride`-th iteration in the trace files.
    #[serde(default = "default_stride")]
    pub trace_stride: usize,
    /// Put per-iteration elapsed time and wall seconds into the CSV files.
    /// Off by default so that reruns are byte-identical.
    #[serde(default)]
    pub timings_in_csv: bool,
    /// Overrides applied to every solver before its own.
    #[serde(default)]
    pub defaults: SolverOverrides,
    pub problems: Vec<ProblemEntry>,
    pub solvers: Vec<SolverSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemEntry {
    /// Directory name for this problem's traces; defaults to `<family>-<index>`.
    #[serde(default)]
    pub label: Option<String>,
    /// Instance and start-point seed; defaults to the experiment seed.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub spec: ProblemSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProblemSpec {
    Svm {
        n: usize,
        p: usize,
        density: f64,
        /// Defaults to `1 / p`.
        #[serde(default)]
        lambda: Option<f64>,
        r: f64,
    },
    Qp {
        l: usize,
        n: usize,
        density: f64,
        upper: f64,
        lower: f64,
        #[serde(default)]
        omega: QpOmega,
    },
    McSynthetic {
        l: usize,
        n: usize,
        rank: usize,
        density: f64,
        scale_min: f64,
        scale_max: f64,
        mu: f64,
        beta: f64,
        tau: f64,
    },
    McFile {
        path: PathBuf,
        mu: f64,
        beta: f64,
        tau: f64,
        /// Rating scale maximum used by the radius rule.
        scale_max: f64,
    },
    Quadratic {
        dim: usize,
        min_curv: f64,
        max_curv: f64,
        #[serde(default)]
        constraint_radius: Option<f64>,
        omega_radius: f64,
    },
    /// A file written by `gen-instance`.
    Instance { path: PathBuf },
}

impl ProblemSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ProblemSpec::Svm { .. } => "svm",
            ProblemSpec::Qp { .. } => "qp",
            ProblemSpec::McSynthetic { .. } => "mc_synthetic",
            ProblemSpec::McFile { .. } => "mc_file",
            ProblemSpec::Quadratic { .. } => "quadratic",
            ProblemSpec::Instance { .. } => "instance",
        }
    }

    fn path(&self) -> Option<&Path> {
        match self {
            ProblemSpec::McFile { path, .. } | ProblemSpec::Instance { path } => Some(path),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    AcFista,
    AcFistaRestart,
    AcAcg,
    FistaConstant,
}

impl MethodName {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::AcFista => "ac_fista",
            MethodName::AcFistaRestart => "ac_fista_restart",
            MethodName::AcAcg => "ac_acg",
            MethodName::FistaConstant => "fista_constant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub method: MethodName,
    /// Row name and trace file stem; defaults to the method name.
    #[serde(default)]
    pub label: Option<String>,
    /// Curvature for `fista_constant`; defaults to `L / 0.9`.
    #[serde(default)]
    pub m_const: Option<f64>,
    #[serde(default)]
    pub overrides: SolverOverrides,
}

impl SolverSpec {
    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.method.as_str().to_string())
    }
}

/// Optional replacements for [`SolverConfig`] fields.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    /// Defaults to the problem's upper curvature over 0.9.
    pub m_cap: Option<f64>,
    pub m_init: Option<f64>,
    pub rho_hat: Option<f64>,
    pub termination_mode: Option<TerminationMode>,
    pub iterate_rule: Option<IterateRule>,
    pub max_iterations: Option<usize>,
    pub good_threshold: Option<f64>,
}

impl SolverOverrides {
    pub fn apply(&self, config: &mut SolverConfig) {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    config.$field = v;
                }
            )*};
        }
        set!(
            alpha,
            gamma,
            m_cap,
            rho_hat,
            termination_mode,
            iterate_rule,
            max_iterations,
            good_threshold
        );
        if self.m_init.is_some() {
            config.m_init = self.m_init;
        }
    }

    /// `self` with every field set in `other` replaced.
    pub fn merged(&self, other: &SolverOverrides) -> SolverOverrides {
        SolverOverrides {
            alpha: other.alpha.or(self.alpha),
            gamma: other.gamma.or(self.gamma),
            m_cap: other.m_cap.or(self.m_cap),
            m_init: other.m_init.or(self.m_init),
            rho_hat: other.rho_hat.or(self.rho_hat),
            termination_mode: other.termination_mode.or(self.termination_mode),
            iterate_rule: other.iterate_rule.or(self.iterate_rule),
            max_iterations: other.max_iterations.or(self.max_iterations),
            good_threshold: other.good_threshold.or(self.good_threshold),
        }
    }
}

/// Command-line values that take precedence over everything in the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CliOverrides {
    pub max_iterations: Option<usize>,
    pub rho_hat: Option<f64>,
    pub termination_mode: Option<TerminationMode>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && s != "."
        && s != ".."
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | '(' | ')'))
}

impl ExperimentConfig {
    /// Reads and validates a config. Relative data paths and the output
    /// directory are resolved against the config file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
                path: path.to_path_buf(),
                source,
            })?;
        let base = path.parent().unwrap_or(Path::new("."));
        if config.output_dir.is_relative() {
            config.output_dir = base.join(&config.output_dir);
        }
        for entry in &mut config.problems {
            match &mut entry.spec {
                ProblemSpec::McFile { path, .. } | ProblemSpec::Instance { path }
                    if path.is_relative() =>
                {
                    *path = base.join(&*path);
                }
                _ => {}
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn apply_cli(&mut self, cli: &CliOverrides) {
        let o = &mut self.defaults;
        o.max_iterations = cli.max_iterations.or(o.max_iterations);
        o.rho_hat = cli.rho_hat.or(o.rho_hat);
        o.termination_mode = cli.termination_mode.or(o.termination_mode);
        for s in &mut self.solvers {
            let o = &mut s.overrides;
            if cli.max_iterations.is_some() {
                o.max_iterations = cli.max_iterations;
            }
            if cli.rho_hat.is_some() {
                o.rho_hat = cli.rho_hat;
            }
            if cli.termination_mode.is_some() {
                o.termination_mode = cli.termination_mode;
            }
        }
        if let Some(dir) = &cli.output_dir {
            self.output_dir = dir.clone();
        }
        if let Some(seed) = cli.seed {
            self.seed = seed;
            for p in &mut self.problems {
                p.seed = None;
            }
        }
    }

    pub fn problem_label(&self, index: usize) -> String {
        let entry = &self.problems[index];
        entry
            .label
            .clone()
            .unwrap_or_else(|| format!("{}-{index}", entry.spec.family()))
    }

    pub fn problem_seed(&self, index: usize) -> u64 {
        self.problems[index].seed.unwrap_or(self.seed)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.solvers.is_empty() {
            return invalid("at least one solver spec is required".into());
        }
        if self.problems.is_empty() {
            return invalid("at least one problem is required".into());
        }
        if self.trace_stride == 0 {
            return invalid("trace_stride must be at least 1".into());
        }
        let mut seen = HashSet::new();
        for s in &self.solvers {
            let label = s.label();
            if !valid_label(&label) {
                return invalid(format!("solver label {label:?} must use [A-Za-z0-9._()-]"));
            }
            if !seen.insert(label.clone()) {
                return invalid(format!("duplicate solver label {label:?}"));
            }
            if s.m_const.is_some() && s.method != MethodName::FistaConstant {
                return invalid(format!(
                    "m_const only applies to fista_constant (solver {label:?})"
                ));
            }
            let mut config = SolverConfig::practical(1.0);
            self.defaults.merged(&s.overrides).apply(&mut config);
            config
                .validate()
                .or_else(|e| invalid(format!("solver {label:?}: {e}")))?;
        }
        let mut seen = HashSet::new();
        for i in 0..self.problems.len() {
            let label = self.problem_label(i);
            if !valid_label(&label) {
                return invalid(format!("problem label {label:?} must use [A-Za-z0-9._()-]"));
            }
            if !seen.insert(label.clone()) {
                return invalid(format!("duplicate problem label {label:?}"));
            }
            if let Some(path) = self.problems[i].spec.path() {
                if !path.is_file() {
                    return invalid(format!(
                        "problem {label:?}: file {} does not exist",
                        path.display()
                    ));
                }
            }
        }
        Ok(())
    }
}
