//! Proximal and projection kernels.

mod spectral;

pub use spectral::{
    project_psd_unit_ball, project_psd_unit_sphere, project_spectraplex, prox_nuclear_ball,
    singular_factorization, symmetric_factorization, SpectralFactorization,
};

use crate::error::{Error, Result};
use crate::problem::{ensure_finite_point, Point, Problem};

/// Composite resolvent: the minimizer of
/// `f(x~) + <grad f(x~), u - x~> + h(u) + (m/2) ||u - x~||^2`.
pub fn composite_resolvent<P: Problem + ?Sized>(
    problem: &P,
    x_tilde: &Point,
    m: f64,
) -> Result<Point> {
    let g = ensure_finite_point(problem.f_gradient(x_tilde)?, "f_gradient")?;
    resolvent_with_gradient(problem, x_tilde, &g, m)
}

/// [`composite_resolvent`] with `grad f(x~)` already in hand.
pub fn resolvent_with_gradient<P: Problem + ?Sized>(
    problem: &P,
    x_tilde: &Point,
    grad: &Point,
    m: f64,
) -> Result<Point> {
    if !(m > 0.0) {
        return Err(Error::invalid(format!(
            "resolvent curvature {m} must be positive"
        )));
    }
    let center = x_tilde - grad / m;
    ensure_finite_point(problem.h_prox(&center, 1.0 / m)?, "h_prox")
}

/// Euclidean projection onto the ball of radius `r` centered at the origin.
pub fn project_ball(z: &Point, r: f64) -> Point {
    let n = z.norm();
    if n <= r {
        z.clone()
    } else {
        z * (r / n)
    }
}

/// Euclidean projection onto the probability simplex `{u >= 0, sum u = 1}`.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        cumsum += s;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if s - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// `sign(x) * max(|x| - t, 0)` applied entrywise.
pub fn soft_threshold(v: &[f64], t: f64) -> Vec<f64> {
    v.iter()
        .map(|&x| x.signum() * (x.abs() - t).max(0.0))
        .collect()
}

/// Minimizer of `lam * ||u||_1 + ||u - sigma||^2 / 2` over `{u >= 0, ||u|| <= radius}`
/// for a non-negative `sigma`.
///
/// Stationarity with multiplier `nu` for the ball gives
/// `u = soft(sigma, lam) / (1 + nu)`, so the constraint is either inactive or
/// met by scaling the soft-thresholded vector back onto the sphere.
pub fn prox_l1_l2ball(sigma: &[f64], lam: f64, radius: f64) -> Vec<f64> {
    debug_assert!(lam >= 0.0 && radius > 0.0);
    let s: Vec<f64> = sigma.iter().map(|&x| (x - lam).max(0.0)).collect();
    let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= radius {
        s
    } else {
        let scale = radius / norm;
        s.into_iter().map(|x| x * scale).collect()
    }
}
