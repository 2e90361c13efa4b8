use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{CurvatureTriple, Point, Problem};
use crate::problems::rng::{seeded_rng, INSTANCE_STREAM};
use crate::prox::project_ball;

/// Separable quadratic `f(z) = sum_i d_i (z_i - c_i)^2 / 2`.
///
/// `h` is the indicator of the ball of radius `constraint_radius` when set,
/// and zero otherwise. `Omega` is the ball of radius `omega_radius`.
/// Negative `d_i` make the problem nonconvex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticProblem {
    pub diag: Vec<f64>,
    pub center: Vec<f64>,
    pub constraint_radius: Option<f64>,
    pub omega_radius: f64,
}

impl QuadraticProblem {
    pub fn new(
        diag: Vec<f64>,
        center: Vec<f64>,
        constraint_radius: Option<f64>,
        omega_radius: f64,
    ) -> Result<Self> {
        if diag.len() != center.len() {
            return Err(Error::Dimension {
                expected: diag.len(),
                got: center.len(),
            });
        }
        if let Some(r) = constraint_radius {
            if !(r > 0.0) || r > omega_radius {
                return Err(Error::invalid(
                    "constraint radius must be in (0, omega_radius]",
                ));
            }
        }
        if !(omega_radius > 0.0) {
            return Err(Error::invalid("omega radius must be positive"));
        }
        Ok(Self {
            diag,
            center,
            constraint_radius,
            omega_radius,
        })
    }

    /// The minimizer when the problem is convex and unconstrained.
    pub fn unconstrained_minimizer(&self) -> Point {
        Point::from_column_slice(&self.center)
    }
}

/// Quadratic with curvatures evenly spaced in `[min_curv, max_curv]` and a
/// standard normal center.
pub fn generate_quadratic(
    dim: usize,
    min_curv: f64,
    max_curv: f64,
    constraint_radius: Option<f64>,
    omega_radius: f64,
    seed: u64,
) -> Result<QuadraticProblem> {
    if dim == 0 || min_curv > max_curv {
        return Err(Error::invalid(
            "quadratic needs dim >= 1 and min_curv <= max_curv",
        ));
    }
    let diag = (0..dim)
        .map(|i| {
            if dim == 1 {
                max_curv
            } else {
                min_curv + (max_curv - min_curv) * i as f64 / (dim - 1) as f64
            }
        })
        .collect();
    let mut rng = seeded_rng(seed, INSTANCE_STREAM);
    let center = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    QuadraticProblem::new(diag, center, constraint_radius, omega_radius)
}

impl Problem for QuadraticProblem {
    fn dimension(&self) -> usize {
        self.diag.len()
    }

    fn f_value(&self, z: &Point) -> Result<f64> {
        Ok(self
            .diag
            .iter()
            .zip(&self.center)
            .zip(z.iter())
            .map(|((d, c), x)| 0.5 * d * (x - c) * (x - c))
            .sum())
    }

    fn f_gradient(&self, z: &Point) -> Result<Point> {
        Ok(Point::from_iterator(
            z.len(),
            self.diag
                .iter()
                .zip(&self.center)
                .zip(z.iter())
                .map(|((d, c), x)| d * (x - c)),
        ))
    }

    fn h_value(&self, z: &Point) -> Result<f64> {
        Ok(match self.constraint_radius {
            Some(r) if z.norm() > r * (1.0 + 1e-12) => f64::INFINITY,
            _ => 0.0,
        })
    }

    fn h_prox(&self, z: &Point, _step: f64) -> Result<Point> {
        Ok(match self.constraint_radius {
            Some(r) => project_ball(z, r),
            None => z.clone(),
        })
    }

    fn omega_project(&self, z: &Point) -> Result<Point> {
        Ok(project_ball(z, self.omega_radius))
    }

    fn curvature(&self) -> CurvatureTriple {
        let max = self.diag.iter().copied().fold(0.0, f64::max);
        let min = self.diag.iter().copied().fold(0.0, f64::min);
        CurvatureTriple {
            lower: -min,
            upper: max,
            lipschitz: max.max(-min),
        }
    }
}
