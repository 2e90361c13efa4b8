//! Average-curvature accelerated solvers.
//!
//! [`run_ac_fista`] is the main method. [`run_ac_acg`] and
//! [`run_fista_constant`] are the comparison baselines and share the same
//! loop, differing only in how the curvature estimate `M_k` evolves and how
//! the next iterates are formed.

mod curvature;
mod state;

pub use curvature::{
    lipschitz_estimate, observed_curvature, step_coefficients, update_m, DEGENERATE_STEP,
};
pub use state::{
    CurvatureLedger, IterationRecord, LedgerEntry, SolverResult, SolverState, TerminalPair,
    TerminationReason,
};

use std::time::Instant;

use crate::config::{IterateRule, SolverConfig};
use crate::error::{Error, Result};
use crate::problem::{
    ensure_dimension, ensure_finite_point, evaluate_phi, phi_with_f, smooth_eval, Point, Problem,
};
use crate::prox::resolvent_with_gradient;
use crate::verify::termination_value;
use curvature::{curvature_from_values, is_degenerate, lipschitz_from_values};

/// Stepsize used to pull an infeasible starting point into `dom h`.
const FEASIBILITY_STEP: f64 = 1e-8;

/// Which member of the solver family to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Curvature averaged over observed `C_k`; one resolvent on good iterations.
    AcFista,
    /// Curvature averaged over `max(C_k, L_k)`; two resolvents every iteration.
    AcAcg,
    /// Fixed curvature `M_k = m` for every `k`.
    ConstantFista { m: f64 },
}

/// Result of executing one iteration from a given state.
#[derive(Debug, Clone)]
pub struct Step {
    pub next: SolverState,
    pub record: IterationRecord,
    pub entry: LedgerEntry,
    pub terminal: Option<TerminalPair>,
    /// Residual pair computed at this iteration, terminal or not.
    pub pair: TerminalPair,
}

/// Builds the initial state from `z0`, projecting it into `dom h` if needed.
///
/// Returns the state and `||grad f(z0)||`.
pub fn initial_state<P: Problem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    method: Method,
    z0: &Point,
) -> Result<(SolverState, f64)> {
    ensure_dimension(problem, z0)?;
    let z0 = ensure_finite_point(z0.clone(), "initial point")?;
    let start = if problem.h_value(&z0)? == f64::INFINITY {
        ensure_finite_point(problem.h_prox(&z0, FEASIBILITY_STEP)?, "h_prox")?
    } else {
        z0
    };
    let (_, g0) = smooth_eval(problem, &start)?;
    let phi0 = evaluate_phi(problem, &start)?;
    let m0 = match method {
        Method::ConstantFista { m } => m,
        _ => config.initial_curvature().max(config.gamma * config.m_cap),
    };
    Ok((
        SolverState {
            k: 0,
            a_sum: 0.0,
            x: start.clone(),
            y: start,
            phi_y: phi0,
            m_cur: m0,
            c_sum: 0.0,
            good_count: 0,
            bad_count: 0,
            resolvent_count: 0,
            restarted_this_k: false,
        },
        g0.norm(),
    ))
}

/// Executes iteration `state.k` of `method` without mutating `state`.
pub fn iterate<P: Problem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    method: Method,
    state: &SolverState,
    grad_z0_norm: f64,
    clock: Instant,
) -> Result<Step> {
    let k = state.k;
    let m = state.m_cur;
    let (a, a_next) = step_coefficients(state.a_sum, m);
    let x_tilde = (&state.y * state.a_sum + &state.x * a) / a_next;

    let (f_xt, g_xt) = smooth_eval(problem, &x_tilde)?;
    let y_g = resolvent_with_gradient(problem, &x_tilde, &g_xt, m)?;
    let mut resolvents = 1;
    let (f_yg, g_yg) = smooth_eval(problem, &y_g)?;

    let degenerate = is_degenerate(&y_g, &x_tilde);
    let c = curvature_from_values(f_yg, f_xt, &g_xt, &y_g, &x_tilde);
    let l = lipschitz_from_values(&g_yg, &g_xt, &y_g, &x_tilde);
    let v = (&x_tilde - &y_g) * m + &g_yg - &g_xt;
    let v_norm = v.norm();

    let test_value = match method {
        Method::AcAcg => c.max(l),
        _ => c,
    };
    let pair = TerminalPair {
        y: y_g.clone(),
        v,
        x_tilde: x_tilde.clone(),
        m,
    };
    let mut next = state.clone();

    // The terminal iteration stops before the branch, so it never takes the
    // bad step. Its C_k is often pure rounding noise at this point.
    if termination_value(&pair.v, grad_z0_norm, config.termination_mode) <= config.rho_hat {
        let is_good = true;
        let entry = LedgerEntry { c, l, m, is_good };
        next.good_count += 1;
        let phi = phi_with_f(problem, &y_g, f_yg)?;
        next.resolvent_count += resolvents;
        next.k += 1;
        let record = IterationRecord {
            k,
            a,
            a_next,
            m,
            c,
            l,
            is_good,
            v_norm,
            phi,
            resolvents,
            restarted: false,
            terminal: true,
            elapsed: clock.elapsed().as_secs_f64(),
        };
        return Ok(Step {
            next,
            record,
            entry,
            terminal: Some(pair.clone()),
            pair,
        });
    }

    let is_good = degenerate || test_value <= config.good_threshold * m;
    let entry = LedgerEntry { c, l, m, is_good };
    if is_good {
        next.good_count += 1;
    } else {
        next.bad_count += 1;
    }

    // Candidate y~_{k+1} (with its f value when already known) and x_{k+1}.
    let (candidate, candidate_f, x_next) = match method {
        Method::AcFista | Method::ConstantFista { .. } => {
            if is_good {
                let ratio = if state.a_sum == 0.0 {
                    0.0
                } else {
                    state.a_sum / a
                };
                let x_next = problem.omega_project(&(&y_g * (a * m) - &state.y * ratio))?;
                (
                    y_g.clone(),
                    Some(f_yg),
                    ensure_finite_point(x_next, "omega_project")?,
                )
            } else {
                let x_b = bad_step(problem, &state.x, &g_xt, a)?;
                resolvents += 1;
                let y_tilde = (&state.y * state.a_sum + &x_b * a) / a_next;
                (y_tilde, None, x_b)
            }
        }
        Method::AcAcg => {
            let x_b = bad_step(problem, &state.x, &g_xt, a)?;
            resolvents += 1;
            if is_good {
                (y_g.clone(), Some(f_yg), x_b)
            } else {
                let y_tilde = (&state.y * state.a_sum + &x_b * a) / a_next;
                (y_tilde, None, x_b)
            }
        }
    };

    let phi_candidate = match candidate_f {
        Some(f) => phi_with_f(problem, &candidate, f)?,
        None => evaluate_phi(problem, &candidate)?,
    };
    let (y_next, phi_next) = match config.iterate_rule {
        IterateRule::NonMonotone => (candidate, phi_candidate),
        IterateRule::Monotone => {
            if phi_candidate <= state.phi_y {
                (candidate, phi_candidate)
            } else {
                (state.y.clone(), state.phi_y)
            }
        }
    };

    let c_obs = match method {
        Method::AcAcg => c.max(l),
        _ => c,
    };
    next.c_sum = state.c_sum + c_obs;
    next.m_cur = match method {
        Method::ConstantFista { m } => m,
        _ => update_m(next.c_sum, k, config),
    };
    next.k = k + 1;
    next.a_sum = a_next;
    next.x = x_next;
    next.y = y_next;
    next.phi_y = phi_next;
    next.resolvent_count += resolvents;
    next.restarted_this_k = false;

    let record = IterationRecord {
        k,
        a,
        a_next,
        m,
        c,
        l,
        is_good,
        v_norm,
        phi: phi_next,
        resolvents,
        restarted: false,
        terminal: false,
        elapsed: clock.elapsed().as_secs_f64(),
    };
    Ok(Step {
        next,
        record,
        entry,
        terminal: None,
        pair,
    })
}

/// `argmin_u a [<grad f(x~), u> + h(u)] + ||u - x||^2 / 2`.
fn bad_step<P: Problem + ?Sized>(problem: &P, x: &Point, grad_xt: &Point, a: f64) -> Result<Point> {
    let center = x - grad_xt * a;
    ensure_finite_point(problem.h_prox(&center, a)?, "h_prox")
}

/// One AC-FISTA iteration: returns the next state, its record and the
/// terminal pair when the tolerance is met. The ledger receives the
/// iteration's curvature observations.
pub fn ac_fista_iteration<P: Problem + ?Sized>(
    state: &SolverState,
    problem: &P,
    config: &SolverConfig,
    ledger: &mut CurvatureLedger,
    grad_z0_norm: f64,
) -> Result<(SolverState, IterationRecord, Option<TerminalPair>)> {
    let k = state.k;
    let step = iterate(
        problem,
        config,
        Method::AcFista,
        state,
        grad_z0_norm,
        Instant::now(),
    )
    .map_err(|e| e.at(k))?;
    ledger.push(step.entry);
    Ok((step.next, step.record, step.terminal))
}

/// Runs `method` from `z0` until the tolerance is met or the iteration cap is hit.
pub fn run<P: Problem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    method: Method,
    z0: &Point,
) -> Result<SolverResult> {
    config.validate()?;
    if let Method::ConstantFista { m } = method {
        let lipschitz = problem.curvature().lipschitz;
        if !(m > 0.0 && m.is_finite() && m >= lipschitz) {
            return Err(Error::invalid(format!(
                "constant curvature {m} must be finite and at least L = {lipschitz}"
            )));
        }
    }
    let clock = Instant::now();
    let (mut state, grad_z0_norm) =
        initial_state(problem, config, method, z0).map_err(|e| e.at(0))?;
    let mut ledger = CurvatureLedger::default();
    let mut trace = Vec::new();
    let mut restarts = 0;
    let mut best: Option<TerminalPair> = None;
    let mut best_norm = f64::INFINITY;
    let stride = config.trace_stride;

    while state.k < config.max_iterations {
        let k = state.k;
        let step =
            iterate(problem, config, method, &state, grad_z0_norm, clock).map_err(|e| e.at(k))?;
        let mut record = step.record;

        let reject = config.restart
            && step.terminal.is_none()
            && record.is_good
            && record.phi >= state.phi_y
            && !state.restarted_this_k
            && !(state.a_sum == 0.0 && state.x == state.y);
        if reject {
            record.restarted = true;
            restarts += 1;
            state.resolvent_count += record.resolvents;
            if k % stride == 0 {
                trace.push(record);
            }
            state.x = state.y.clone();
            state.a_sum = 0.0;
            state.restarted_this_k = true;
            continue;
        }

        ledger.push(step.entry);
        let pair_norm = step.pair.v.norm();
        if pair_norm < best_norm {
            best_norm = pair_norm;
            best = Some(step.pair);
        }
        let terminal = step.terminal;
        let last = terminal.is_some() || step.next.k >= config.max_iterations;
        if k % stride == 0 || last {
            trace.push(record);
        }
        state = step.next;

        if let Some(pair) = terminal {
            return finish(
                problem,
                config,
                state,
                pair,
                TerminationReason::ToleranceMet,
                grad_z0_norm,
                restarts,
                trace,
                ledger,
                clock,
            );
        }
    }

    let pair = match best {
        Some(p) => p,
        None => {
            // Zero iterations allowed: certify the start itself.
            let (_, g) = smooth_eval(problem, &state.y)?;
            let m = state.m_cur;
            let x_tilde = state.y.clone();
            let y = resolvent_with_gradient(problem, &x_tilde, &g, m)?;
            let (_, g_y) = smooth_eval(problem, &y)?;
            let v = (&x_tilde - &y) * m + g_y - g;
            TerminalPair { y, v, x_tilde, m }
        }
    };
    finish(
        problem,
        config,
        state,
        pair,
        TerminationReason::MaxIterations,
        grad_z0_norm,
        restarts,
        trace,
        ledger,
        clock,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish<P: Problem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    state: SolverState,
    pair: TerminalPair,
    reason: TerminationReason,
    grad_z0_norm: f64,
    restarts: usize,
    trace: Vec<IterationRecord>,
    ledger: CurvatureLedger,
    clock: Instant,
) -> Result<SolverResult> {
    let final_phi = evaluate_phi(problem, &pair.y)?;
    let final_residual = termination_value(&pair.v, grad_z0_norm, config.termination_mode);
    Ok(SolverResult {
        y_hat: pair.y,
        v_hat: pair.v,
        x_tilde_hat: pair.x_tilde,
        m_hat: pair.m,
        reason,
        final_phi,
        final_residual,
        grad_z0_norm,
        iterations: ledger.len(),
        good_count: state.good_count,
        bad_count: state.bad_count,
        total_resolvents: state.resolvent_count,
        restarts,
        wall_seconds: clock.elapsed().as_secs_f64(),
        trace,
        ledger,
    })
}

/// AC-FISTA: curvature estimate averaged over the observed `C_k`.
pub fn run_ac_fista<P: Problem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    z0: &Point,
) -> Result<SolverResult> {
    run(problem, config, Method::AcFista, z0)
}

/// Theoretical AC-ACG baseline: averages `max(C_k, L_k)` and always takes
/// both the resolvent step and the prox step on `x`.
pub fn run_ac_acg<P: Problem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    z0: &Point,
) -> Result<SolverResult> {
    run(problem, config, Method::AcAcg, z0)
}

/// Nonconvex FISTA with a constant curvature `m_const`.
pub fn run_fista_constant<P: Problem + ?Sized>(
    problem: &P,
    m_const: f64,
    config: &SolverConfig,
    z0: &Point,
) -> Result<SolverResult> {
    run(problem, config, Method::ConstantFista { m: m_const }, z0)
}
