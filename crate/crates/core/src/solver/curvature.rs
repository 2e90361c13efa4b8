use crate::config::SolverConfig;
use crate::error::Result;
use crate::problem::{smooth_eval, Point, Problem};

/// Steps shorter than this (relative to `1 + ||x~||`) are treated as degenerate.
pub const DEGENERATE_STEP: f64 = 1e-14;

pub(crate) fn is_degenerate(y: &Point, x_tilde: &Point) -> bool {
    (y - x_tilde).norm() <= DEGENERATE_STEP * (1.0 + x_tilde.norm())
}

/// `2 [f(y) - f(x~) - <grad f(x~), y - x~>] / ||y - x~||^2` from precomputed values.
pub(crate) fn curvature_from_values(
    f_y: f64,
    f_x: f64,
    grad_x: &Point,
    y: &Point,
    x_tilde: &Point,
) -> f64 {
    if is_degenerate(y, x_tilde) {
        return 0.0;
    }
    let d = y - x_tilde;
    2.0 * (f_y - f_x - grad_x.dot(&d)) / d.norm_squared()
}

/// `||grad f(y) - grad f(x~)|| / ||y - x~||` from precomputed gradients.
pub(crate) fn lipschitz_from_values(
    grad_y: &Point,
    grad_x: &Point,
    y: &Point,
    x_tilde: &Point,
) -> f64 {
    if is_degenerate(y, x_tilde) {
        return 0.0;
    }
    (grad_y - grad_x).norm() / (y - x_tilde).norm()
}

/// Observed curvature of `f` along the step from `x~` to `y`.
///
/// Negative when `f` bends downward along the segment; zero on degenerate steps.
pub fn observed_curvature<P: Problem + ?Sized>(
    problem: &P,
    y: &Point,
    x_tilde: &Point,
) -> Result<f64> {
    let (f_x, g_x) = smooth_eval(problem, x_tilde)?;
    let (f_y, _) = smooth_eval(problem, y)?;
    Ok(curvature_from_values(f_y, f_x, &g_x, y, x_tilde))
}

/// Gradient-difference quotient along the step; zero on degenerate steps.
pub fn lipschitz_estimate<P: Problem + ?Sized>(
    problem: &P,
    y: &Point,
    x_tilde: &Point,
) -> Result<f64> {
    let (_, g_x) = smooth_eval(problem, x_tilde)?;
    let (_, g_y) = smooth_eval(problem, y)?;
    Ok(lipschitz_from_values(&g_y, &g_x, y, x_tilde))
}

/// Returns `(a, A_next)` where `a` is the positive root of `M a^2 - a - A = 0`.
pub fn step_coefficients(a_sum: f64, m: f64) -> (f64, f64) {
    let a = (1.0 + (1.0 + 4.0 * m * a_sum).sqrt()) / (2.0 * m);
    (a, a_sum + a)
}

/// `max(gamma * M, c_sum / (alpha * (k + 1)))` where `c_sum` covers iterations `0..=k`.
pub fn update_m(c_sum: f64, k: usize, config: &SolverConfig) -> f64 {
    let floor = config.gamma * config.m_cap;
    floor.max(c_sum / (config.alpha * (k as f64 + 1.0)))
}
