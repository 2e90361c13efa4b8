//! CSV formatting for traces and summaries.

use std::fmt::Write;

use acfista_core::IterationRecord;
use serde::Serialize;

/// One row of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub problem: String,
    pub method: String,
    pub iterations: usize,
    pub resolvents: usize,
    /// Not part of the reproducible outputs unless timings are requested.
    #[serde(skip)]
    pub wall_seconds: f64,
    pub final_phi: f64,
    pub final_residual: f64,
    pub theta_bar: Option<f64>,
    pub tau_bar: Option<f64>,
    pub bad_fraction: f64,
    pub reason: String,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("summary table needs at least one row")]
pub struct EmptySummary;

/// `%g`-style formatting with 6 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (5 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

/// Summary CSV in row order. The `wall_seconds` column is present only when
/// `with_wall` is set.
pub fn emit_summary_table(rows: &[SummaryRow], with_wall: bool) -> Result<String, EmptySummary> {
    if rows.is_empty() {
        return Err(EmptySummary);
    }
    let mut out = String::from("problem,method,iterations,resolvents,");
    if with_wall {
        out.push_str("wall_seconds,");
    }
    out.push_str("final_phi,final_residual,theta_bar,tau_bar,bad_fraction,reason\n");
    for r in rows {
        write!(
            out,
            "{},{},{},{},",
            r.problem, r.method, r.iterations, r.resolvents
        )
        .unwrap();
        if with_wall {
            write!(out, "{},", fmt_sig(r.wall_seconds)).unwrap();
        }
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_sig(r.final_phi),
            fmt_sig(r.final_residual),
            opt(r.theta_bar),
            opt(r.tau_bar),
            fmt_sig(r.bad_fraction),
            r.reason
        )
        .unwrap();
    }
    Ok(out)
}

/// Trace CSV with full-precision floats. `elapsed` is appended when requested.
pub fn emit_trace(records: &[IterationRecord], with_elapsed: bool) -> String {
    let mut out = String::from("k,a_k,M_k,C_k,L_k,good,v_norm,phi,resolvents,restarted");
    out.push_str(if with_elapsed { ",elapsed\n" } else { "\n" });
    for r in records {
        write!(
            out,
            "{},{:e},{:e},{:e},{:e},{},{:e},{:e},{},{}",
            r.k,
            r.a,
            r.m,
            r.c,
            r.l,
            r.is_good as u8,
            r.v_norm,
            r.phi,
            r.resolvents,
            r.restarted as u8
        )
        .unwrap();
        if with_elapsed {
            write!(out, ",{:e}", r.elapsed).unwrap();
        }
        out.push('\n');
    }
    out
}
