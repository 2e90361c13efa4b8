use serde::{Deserialize, Serialize};

use crate::problem::Point;

/// Live loop variables of one solver run.
#[derive(Debug, Clone)]
pub struct SolverState {
    /// Accepted iteration index.
    pub k: usize,
    /// Accumulated step weight `A_k`.
    pub a_sum: f64,
    pub x: Point,
    pub y: Point,
    /// `phi(y_k)`.
    pub phi_y: f64,
    /// Curvature estimate `M_k` used by the next iteration.
    pub m_cur: f64,
    /// Running sum of the curvature observations feeding the `M` update.
    pub c_sum: f64,
    pub good_count: usize,
    pub bad_count: usize,
    pub resolvent_count: usize,
    /// Set while re-executing an iteration after a restart.
    pub restarted_this_k: bool,
}

/// One executed iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub a: f64,
    pub a_next: f64,
    pub m: f64,
    /// Observed curvature `C_k`.
    pub c: f64,
    /// Gradient-difference quotient `L_k`.
    pub l: f64,
    /// No bad step was taken. Always true on the terminal iteration.
    pub is_good: bool,
    pub v_norm: f64,
    /// `phi(y_{k+1})`, or `phi(y^g)` on the terminal iteration.
    pub phi: f64,
    /// Resolvent evaluations charged to this iteration. The terminal
    /// iteration stops after the first one.
    pub resolvents: usize,
    /// The iterate was rejected and the iteration re-executed from a reset state.
    pub restarted: bool,
    pub terminal: bool,
    /// Seconds since the start of the run.
    pub elapsed: f64,
}

/// Curvature observations of accepted iterations, in order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurvatureLedger {
    pub c_values: Vec<f64>,
    /// `max(C_k, L_k)`.
    pub c_tilde_values: Vec<f64>,
    pub l_values: Vec<f64>,
    pub m_values: Vec<f64>,
    pub good: Vec<bool>,
}

impl CurvatureLedger {
    pub fn len(&self) -> usize {
        self.c_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c_values.is_empty()
    }

    pub fn push(&mut self, entry: LedgerEntry) {
        self.c_values.push(entry.c);
        self.c_tilde_values.push(entry.c.max(entry.l));
        self.l_values.push(entry.l);
        self.m_values.push(entry.m);
        self.good.push(entry.is_good);
    }

    pub fn bad_count(&self) -> usize {
        self.good.iter().filter(|g| !**g).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerEntry {
    pub c: f64,
    pub l: f64,
    pub m: f64,
    pub is_good: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    ToleranceMet,
    MaxIterations,
}

impl TerminationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationReason::ToleranceMet => "tolerance_met",
            TerminationReason::MaxIterations => "max_iterations",
        }
    }
}

/// A candidate stationary pair together with the resolvent data that certifies it.
#[derive(Debug, Clone)]
pub struct TerminalPair {
    pub y: Point,
    pub v: Point,
    pub x_tilde: Point,
    pub m: f64,
}

/// Outcome of a solver run.
#[derive(Debug, Clone)]
pub struct SolverResult {
    pub y_hat: Point,
    pub v_hat: Point,
    /// Prox center and curvature that produced `y_hat`, for re-certification.
    pub x_tilde_hat: Point,
    pub m_hat: f64,
    pub reason: TerminationReason,
    pub final_phi: f64,
    /// `termination_value(v_hat)` under the configured mode.
    pub final_residual: f64,
    pub grad_z0_norm: f64,
    /// Accepted iterations (restarted attempts excluded).
    pub iterations: usize,
    pub good_count: usize,
    pub bad_count: usize,
    pub total_resolvents: usize,
    pub restarts: usize,
    pub wall_seconds: f64,
    /// Possibly subsampled, see `SolverConfig::trace_stride`.
    pub trace: Vec<IterationRecord>,
    pub ledger: CurvatureLedger,
}
