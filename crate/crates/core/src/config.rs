use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the stationarity residual is compared against the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TerminationMode {
    /// `||v|| <= rho_hat`
    Absolute,
    /// `||v|| / (||grad f(z0)|| + 1) <= rho_hat`
    #[default]
    Relative,
}

/// Rule for choosing `y_{k+1}` from the candidate `y~_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IterateRule {
    /// Always accept the candidate.
    #[default]
    NonMonotone,
    /// Keep whichever of `y_k` and the candidate has the smaller objective.
    Monotone,
}

/// Parameters of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Averaging weight in the curvature update, in `(0, 1]`.
    pub alpha: f64,
    /// Floor factor: `M_k >= gamma * m_cap`, in `(0, 1]`.
    pub gamma: f64,
    /// Upper curvature scalar `M`, intended to satisfy `good_threshold * M >= M_bar`.
    pub m_cap: f64,
    /// Initial curvature estimate; `None` means `0.01 * m_cap`.
    pub m_init: Option<f64>,
    pub rho_hat: f64,
    pub termination_mode: TerminationMode,
    pub iterate_rule: IterateRule,
    pub restart: bool,
    pub max_iterations: usize,
    /// An iteration is good when `C_k <= good_threshold * M_k`.
    pub good_threshold: f64,
    pub seed: u64,
    /// Keep every `trace_stride`-th iteration record (the last one is always kept).
    pub trace_stride: usize,
}

impl SolverConfig {
    /// The `(alpha, gamma) = (0.5, 1e-6)` parameterization used in practice.
    pub fn practical(m_cap: f64) -> Self {
        Self {
            alpha: 0.5,
            gamma: 1e-6,
            m_cap,
            m_init: None,
            rho_hat: 1e-7,
            termination_mode: TerminationMode::Relative,
            iterate_rule: IterateRule::NonMonotone,
            restart: false,
            max_iterations: 10_000,
            good_threshold: 0.9,
            seed: 0,
            trace_stride: 1,
        }
    }

    pub fn initial_curvature(&self) -> f64 {
        self.m_init.unwrap_or(0.01 * self.m_cap)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v <= 1.0;
        if !in_unit(self.alpha) {
            return Err(Error::invalid(format!(
                "alpha = {} not in (0, 1]",
                self.alpha
            )));
        }
        if !in_unit(self.gamma) {
            return Err(Error::invalid(format!(
                "gamma = {} not in (0, 1]",
                self.gamma
            )));
        }
        if !(self.m_cap > 0.0 && self.m_cap.is_finite()) {
            return Err(Error::invalid(format!(
                "m_cap = {} must be positive",
                self.m_cap
            )));
        }
        let m0 = self.initial_curvature();
        if !(m0 > 0.0 && m0.is_finite()) {
            return Err(Error::invalid(format!(
                "initial curvature {m0} must be positive"
            )));
        }
        if !(self.rho_hat > 0.0) {
            return Err(Error::invalid(format!(
                "rho_hat = {} must be positive",
                self.rho_hat
            )));
        }
        if !in_unit(self.good_threshold) {
            return Err(Error::invalid(format!(
                "good_threshold = {} not in (0, 1]",
                self.good_threshold
            )));
        }
        if self.trace_stride == 0 {
            return Err(Error::invalid("trace_stride must be at least 1"));
        }
        Ok(())
    }
}
