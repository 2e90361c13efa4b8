//! Stationarity certificates and residual checks.

use crate::config::TerminationMode;
use crate::error::{Error, Result};
use crate::problem::{ensure_finite_point, Point, Problem};
use crate::prox::composite_resolvent;

/// The quantity compared against `rho_hat`.
pub fn termination_value(v: &Point, grad_z0_norm: f64, mode: TerminationMode) -> f64 {
    let n = v.norm();
    match mode {
        TerminationMode::Absolute => n,
        TerminationMode::Relative => n / (grad_z0_norm + 1.0),
    }
}

/// Default tolerance for [`check_stationarity`]: `1e-9 * (1 + ||y||)`.
pub fn default_stationarity_tol(y: &Point) -> f64 {
    1e-9 * (1.0 + y.norm())
}

/// Verifies that `y` is the composite resolvent of `x_tilde` at curvature `m`.
///
/// When it is, `v = m (x_tilde - y) + grad f(y) - grad f(x_tilde)` lies in
/// `grad f(y) + dh(y)` by the optimality condition of the prox, so the pair
/// `(y, v)` is a certified approximate stationary point. The residual `v`
/// itself is recomputed and compared as well.
pub fn check_stationarity<P: Problem + ?Sized>(
    problem: &P,
    y: &Point,
    v: &Point,
    m: f64,
    x_tilde: &Point,
    tol: f64,
) -> Result<bool> {
    if !(m > 0.0) || !(tol > 0.0) {
        return Err(Error::invalid("check_stationarity needs m > 0 and tol > 0"));
    }
    let y_ref = composite_resolvent(problem, x_tilde, m)?;
    if (y - &y_ref).norm() > tol {
        return Ok(false);
    }
    let g_y = ensure_finite_point(problem.f_gradient(y)?, "f_gradient")?;
    let g_x = ensure_finite_point(problem.f_gradient(x_tilde)?, "f_gradient")?;
    let v_ref = (x_tilde - y) * m + g_y - g_x;
    Ok((v - &v_ref).norm() <= tol * (1.0 + v_ref.norm()))
}

/// Central finite-difference gradient of `f` with step `1e-6 * (1 + ||z||)`.
///
/// Only `f_value` is consulted, so this is independent of any analytic
/// gradient it is compared with.
pub fn finite_difference_gradient<P: Problem + ?Sized>(problem: &P, z: &Point) -> Result<Point> {
    let h = 1e-6 * (1.0 + z.norm());
    let mut g = Point::zeros(z.len());
    let mut probe = z.clone();
    for i in 0..z.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let fp = problem.f_value(&probe)?;
        probe[i] = orig - h;
        let fm = problem.f_value(&probe)?;
        probe[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    Ok(g)
}

/// `||g_fd - g|| / max(||g||, 1)` at `z`.
pub fn gradient_relative_error<P: Problem + ?Sized>(problem: &P, z: &Point) -> Result<f64> {
    let analytic = problem.f_gradient(z)?;
    let numeric = finite_difference_gradient(problem, z)?;
    Ok((numeric - &analytic).norm() / analytic.norm().max(1.0))
}
