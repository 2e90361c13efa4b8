//! The problem-oracle abstraction shared by every solver and problem family.
//!
//! A composite problem is `phi(z) = f(z) + h(z)` where `f` is smooth (possibly
//! nonconvex) and `h` is proper, closed and convex with a cheap proximal map.
//! Matrix-valued problems flatten their variable column-major into a [`Point`].

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A flat point in `R^n`.
pub type Point = DVector<f64>;

/// Curvature constants of the smooth part.
///
/// `lower` bounds the negative curvature, `upper` bounds the positive
/// curvature and `lipschitz` is the gradient Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureTriple {
    pub lower: f64,
    pub upper: f64,
    pub lipschitz: f64,
}

impl CurvatureTriple {
    pub fn new(lower: f64, upper: f64, lipschitz: f64) -> Result<Self> {
        let ok = lower >= 0.0
            && upper >= 0.0
            && lipschitz.is_finite()
            && lipschitz >= upper.max(lower) * (1.0 - 1e-12);
        if !ok {
            return Err(Error::invalid(format!(
                "curvature triple (m={lower}, M={upper}, L={lipschitz}) violates 0 <= m, M <= L"
            )));
        }
        Ok(Self {
            lower,
            upper,
            lipschitz,
        })
    }
}

/// Oracle access to `f`, `h` and the enclosing set `Omega`.
///
/// Implementations must be pure: the same input always yields the same
/// output, and evaluations may run concurrently from several solver runs.
pub trait Problem: Send + Sync {
    /// Length of the flat variable.
    fn dimension(&self) -> usize;

    fn f_value(&self, z: &Point) -> Result<f64>;

    fn f_gradient(&self, z: &Point) -> Result<Point>;

    /// Value and gradient together. Families whose evaluation shares an
    /// expensive factorization override this.
    fn f_value_and_gradient(&self, z: &Point) -> Result<(f64, Point)> {
        Ok((self.f_value(z)?, self.f_gradient(z)?))
    }

    /// `h(z)`, or `+inf` outside `dom h`.
    fn h_value(&self, z: &Point) -> Result<f64>;

    /// Exact minimizer of `h(u) + ||u - z||^2 / (2 * step)`.
    fn h_prox(&self, z: &Point, step: f64) -> Result<Point>;

    /// Projection onto the compact set `Omega` containing `dom h`.
    fn omega_project(&self, z: &Point) -> Result<Point>;

    fn curvature(&self) -> CurvatureTriple;
}

pub(crate) fn ensure_finite_scalar(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what })
    }
}

pub(crate) fn ensure_finite_point(p: Point, what: &'static str) -> Result<Point> {
    if p.iter().all(|v| v.is_finite()) {
        Ok(p)
    } else {
        Err(Error::NonFinite { what })
    }
}

pub(crate) fn ensure_dimension<P: Problem + ?Sized>(problem: &P, z: &Point) -> Result<()> {
    if z.len() == problem.dimension() {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: problem.dimension(),
            got: z.len(),
        })
    }
}

/// Checked value and gradient of `f`.
pub fn smooth_eval<P: Problem + ?Sized>(problem: &P, z: &Point) -> Result<(f64, Point)> {
    let (v, g) = problem.f_value_and_gradient(z)?;
    Ok((
        ensure_finite_scalar(v, "f_value")?,
        ensure_finite_point(g, "f_gradient")?,
    ))
}

/// `phi(z) = f(z) + h(z)`; `+inf` when `z` is outside `dom h`.
pub fn evaluate_phi<P: Problem + ?Sized>(problem: &P, z: &Point) -> Result<f64> {
    let h = problem.h_value(z)?;
    if h == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let h = ensure_finite_scalar(h, "h_value")?;
    let f = ensure_finite_scalar(problem.f_value(z)?, "f_value")?;
    Ok(f + h)
}

/// `phi` given an already computed `f(z)`.
pub(crate) fn phi_with_f<P: Problem + ?Sized>(problem: &P, z: &Point, f: f64) -> Result<f64> {
    let h = problem.h_value(z)?;
    if h == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(f + ensure_finite_scalar(h, "h_value")?)
}
