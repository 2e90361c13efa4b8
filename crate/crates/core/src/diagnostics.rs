//! Observed-ratio statistics of a solver run.
//!
//! Series indexed by `k` start at `k = 1`: entry `i` of a returned vector
//! belongs to iteration `k = i + 1`.

use serde::{Deserialize, Serialize};

use crate::solver::{CurvatureLedger, SolverResult};

/// Iterations before this index are excluded from `theta_bar` and `tau_bar`.
pub const STATISTICS_CUTOFF: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub theta_series: Vec<f64>,
    pub tau_series: Vec<f64>,
    /// Max of `theta_k` over `k >= 100`, or over all `k` when the run is shorter.
    pub theta_bar: Option<f64>,
    pub tau_bar: Option<f64>,
    /// True when the run was too short for the cutoff and the full range was used.
    pub bars_use_full_range: bool,
    /// `|B_k| / k` at the final `k`.
    pub bad_fraction: f64,
    pub eta_series: Vec<Option<f64>>,
    /// Smallest `k0` with `|B_k| <= k / 3` for every observed `k >= k0`.
    pub condition_a_satisfied_from: Option<usize>,
    pub mean_resolvents_per_iteration: f64,
}

/// `M_k^hm = k / sum_{i<k} 1 / M_i` for `k = 1..=len`.
pub fn harmonic_mean_series(m_values: &[f64]) -> Vec<f64> {
    let mut inv_sum = 0.0;
    m_values
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            inv_sum += 1.0 / m;
            (i + 1) as f64 / inv_sum
        })
        .collect()
}

/// `theta_k = M_k / M_k^hm` and `tau_k = L_k^avg / M_k` for `k = 1..len`.
///
/// `M_k` is the estimate used at iteration `k`, so the series are one
/// shorter than the ledger.
pub fn theta_tau_series(ledger: &CurvatureLedger) -> (Vec<f64>, Vec<f64>) {
    let hm = harmonic_mean_series(&ledger.m_values);
    let mut l_sum = 0.0;
    let mut theta = Vec::with_capacity(ledger.len().saturating_sub(1));
    let mut tau = Vec::with_capacity(ledger.len().saturating_sub(1));
    for k in 1..ledger.len() {
        l_sum += ledger.l_values[k - 1];
        let m_k = ledger.m_values[k];
        theta.push(m_k / hm[k - 1]);
        tau.push(l_sum / k as f64 / m_k);
    }
    (theta, tau)
}

/// Smallest `k0` such that `|B_k| <= k / 3` for every `k0 <= k <= len`
/// (with `k` ranging from 1), `Some(0)` when it never fails and `None` when
/// it fails at the final `k`.
pub fn condition_a_monitor(good: &[bool]) -> Option<usize> {
    let mut bad = 0usize;
    let mut last_violation = None;
    for (i, &g) in good.iter().enumerate() {
        if !g {
            bad += 1;
        }
        let k = i + 1;
        if 3 * bad > k {
            last_violation = Some(k);
        }
    }
    match last_violation {
        None => Some(0),
        Some(k) if k == good.len() => None,
        Some(k) => Some(k + 1),
    }
}

/// `eta_k`: total curvature of the bad iterations before `k` over that of
/// the chronologically first half of them. `None` when fewer than two bad
/// iterations precede `k` or the denominator vanishes.
pub fn eta_series(ledger: &CurvatureLedger) -> Vec<Option<f64>> {
    let mut bad_c: Vec<f64> = Vec::new();
    let mut prefix: Vec<f64> = vec![0.0];
    let mut out = Vec::with_capacity(ledger.len());
    for i in 0..ledger.len() {
        if !ledger.good[i] {
            bad_c.push(ledger.c_values[i]);
            prefix.push(prefix.last().unwrap() + ledger.c_values[i]);
        }
        let count = bad_c.len();
        let half = count / 2;
        let entry = if count < 2 {
            None
        } else {
            let denom = prefix[half];
            if denom == 0.0 {
                None
            } else {
                Some(prefix[count] / denom)
            }
        };
        out.push(entry);
    }
    out
}

fn tail_max(series: &[f64]) -> (Option<f64>, bool) {
    // series[i] is k = i + 1
    let start = STATISTICS_CUTOFF - 1;
    if series.len() > start {
        (series[start..].iter().copied().reduce(f64::max), false)
    } else {
        (series.iter().copied().reduce(f64::max), true)
    }
}

/// Full report for a finished run.
pub fn diagnose(result: &SolverResult) -> DiagnosticsReport {
    let ledger = &result.ledger;
    let (theta_series, tau_series) = theta_tau_series(ledger);
    let (theta_bar, short) = tail_max(&theta_series);
    let (tau_bar, _) = tail_max(&tau_series);
    let k = ledger.len();
    DiagnosticsReport {
        theta_bar,
        tau_bar,
        bars_use_full_range: short,
        bad_fraction: if k == 0 {
            0.0
        } else {
            ledger.bad_count() as f64 / k as f64
        },
        eta_series: eta_series(ledger),
        condition_a_satisfied_from: condition_a_monitor(&ledger.good),
        mean_resolvents_per_iteration: if k == 0 {
            0.0
        } else {
            result.total_resolvents as f64 / (k + result.restarts) as f64
        },
        theta_series,
        tau_series,
    }
}
