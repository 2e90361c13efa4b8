//! Matrix completion with a log-sum spectral penalty over a Frobenius ball.
//!
//! The penalty `p(t) = beta log(1 + |t| / tau)` is split as a smooth
//! concave part `p(t) - p0 |t|` (kept in `f`) plus a nuclear norm
//! `mu p0 ||Z||_*` (kept in `h`), with `p0 = p'(0) = beta / tau`.

use nalgebra::{DMatrix, SVD};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ratings::{Observation, Ratings};
use super::rng::{seeded_rng, INSTANCE_STREAM, START_STREAM};
use crate::error::{Error, Result};
use crate::problem::{CurvatureTriple, Point, Problem};
use crate::prox::{project_ball, prox_nuclear_ball, singular_factorization};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McInstance {
    pub ratings: Ratings,
    pub mu: f64,
    pub beta: f64,
    /// Scale `tau` of the log-sum penalty.
    pub tau_pen: f64,
    pub radius: f64,
}

impl McInstance {
    pub fn new(ratings: Ratings, mu: f64, beta: f64, tau_pen: f64, radius: f64) -> Result<Self> {
        let inst = Self {
            ratings,
            mu,
            beta,
            tau_pen,
            radius,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Instance with the radius chosen by [`mc_radius`].
    pub fn with_scale_radius(
        ratings: Ratings,
        mu: f64,
        beta: f64,
        tau_pen: f64,
        scale_max: f64,
    ) -> Result<Self> {
        let radius = mc_radius(&ratings, scale_max)?;
        Self::new(ratings, mu, beta, tau_pen, radius)
    }

    pub fn p0(&self) -> f64 {
        self.beta / self.tau_pen
    }

    pub fn kappa(&self) -> f64 {
        self.beta / (self.tau_pen * self.tau_pen)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.ratings.rows, self.ratings.cols)
    }

    /// `(2 mu kappa, 1, max(1, 2 mu kappa))`.
    pub fn curvature_triple(&self) -> CurvatureTriple {
        let m = 2.0 * self.mu * self.kappa();
        CurvatureTriple {
            lower: m,
            upper: 1.0,
            lipschitz: m.max(1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.beta > 0.0 && self.tau_pen > 0.0) {
            return Err(Error::invalid("MC needs mu, beta, tau > 0"));
        }
        if !(self.radius > 0.0) {
            return Err(Error::invalid("MC radius must be positive"));
        }
        let (l, n) = self.shape();
        if l == 0 || n == 0 {
            return Err(Error::invalid("MC matrix must be non-empty"));
        }
        if self
            .ratings
            .observations
            .iter()
            .any(|o| o.row >= l || o.col >= n)
        {
            return Err(Error::invalid("MC observation index out of range"));
        }
        Ok(())
    }
}

/// Frobenius norm of the matrix holding the observed entries and
/// `scale_max` everywhere else.
pub fn mc_radius(ratings: &Ratings, scale_max: f64) -> Result<f64> {
    if !(scale_max > 0.0) {
        return Err(Error::invalid("scale_max must be positive"));
    }
    let observed: f64 = ratings.observations.iter().map(|o| o.value * o.value).sum();
    let missing = (ratings.rows * ratings.cols - ratings.len()) as f64;
    Ok((observed + missing * scale_max * scale_max).sqrt())
}

/// Rank-`rank` ground truth from uniform `[0, 1]` factors, affinely mapped
/// onto `[scale_min, scale_max]`, observed on `round(density * l * n)`
/// uniformly chosen entries.
pub fn generate_mc(
    l: usize,
    n: usize,
    rank: usize,
    density: f64,
    scale: (f64, f64),
    seed: u64,
) -> Result<Ratings> {
    if rank == 0 || rank > l.min(n) {
        return Err(Error::invalid(format!(
            "rank {rank} must be in [1, min(l, n)]"
        )));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::invalid(format!("density {density} not in (0, 1]")));
    }
    let (lo, hi) = scale;
    if !(lo < hi) {
        return Err(Error::invalid("scale_min must be below scale_max"));
    }
    let mut rng = seeded_rng(seed, INSTANCE_STREAM);
    let u = DMatrix::from_fn(l, rank, |_, _| rng.random::<f64>());
    let v = DMatrix::from_fn(n, rank, |_, _| rng.random::<f64>());
    let truth = u * v.transpose();
    let (tmin, tmax) = (truth.min(), truth.max());
    let span = if tmax > tmin { tmax - tmin } else { 1.0 };
    let total = l * n;
    let count = ((density * total as f64).round() as usize).clamp(1, total);
    let mut picks = sample(&mut rng, total, count).into_vec();
    picks.sort_unstable();
    let observations = picks
        .into_iter()
        .map(|p| {
            let (row, col) = (p % l, p / l);
            Observation {
                row,
                col,
                value: lo + (hi - lo) * (truth[(row, col)] - tmin) / span,
            }
        })
        .collect();
    Ok(Ratings {
        rows: l,
        cols: n,
        observations,
    })
}

/// Standard normal entries, scaled onto `B_R` when they fall outside it.
pub fn mc_initial_point(instance: &McInstance, seed: u64) -> Point {
    let (l, n) = instance.shape();
    let mut rng = seeded_rng(seed, START_STREAM);
    let z = Point::from_iterator(l * n, (0..l * n).map(|_| StandardNormal.sample(&mut rng)));
    project_ball(&z, instance.radius)
}

#[derive(Debug, Clone)]
pub struct McProblem {
    instance: McInstance,
    /// Flat column-major indices of the observations.
    flat: Vec<usize>,
}

pub fn mc_oracle(instance: McInstance) -> Result<McProblem> {
    instance.validate()?;
    let l = instance.ratings.rows;
    let flat = instance
        .ratings
        .observations
        .iter()
        .map(|o| o.row + o.col * l)
        .collect();
    Ok(McProblem { instance, flat })
}

impl McProblem {
    pub fn instance(&self) -> &McInstance {
        &self.instance
    }

    fn matrix(&self, z: &Point) -> DMatrix<f64> {
        let (l, n) = self.instance.shape();
        DMatrix::from_column_slice(l, n, z.as_slice())
    }

    fn data_fit(&self, z: &Point) -> f64 {
        self.flat
            .iter()
            .zip(&self.instance.ratings.observations)
            .map(|(&i, o)| (z[i] - o.value).powi(2))
            .sum::<f64>()
            * 0.5
    }

    /// `mu * sum_i [p(s_i) - p0 s_i]`.
    fn spectral_part(&self, sigma: &[f64]) -> f64 {
        let inst = &self.instance;
        let p0 = inst.p0();
        inst.mu
            * sigma
                .iter()
                .map(|&s| inst.beta * (s / inst.tau_pen).ln_1p() - p0 * s)
                .sum::<f64>()
    }

    fn singular_values(&self, z: &Point) -> Result<Vec<f64>> {
        let zm = self.matrix(z);
        if zm.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "MC point" });
        }
        let svd = SVD::try_new(zm, false, false, f64::EPSILON, 0)
            .ok_or_else(|| Error::Factorization("SVD did not converge".into()))?;
        Ok(svd.singular_values.as_slice().to_vec())
    }
}

impl Problem for McProblem {
    fn dimension(&self) -> usize {
        let (l, n) = self.instance.shape();
        l * n
    }

    fn f_value(&self, z: &Point) -> Result<f64> {
        let sigma = self.singular_values(z)?;
        Ok(self.data_fit(z) + self.spectral_part(&sigma))
    }

    fn f_gradient(&self, z: &Point) -> Result<Point> {
        Ok(self.f_value_and_gradient(z)?.1)
    }

    fn f_value_and_gradient(&self, z: &Point) -> Result<(f64, Point)> {
        let inst = &self.instance;
        let fac = singular_factorization(&self.matrix(z))?;
        let p0 = inst.p0();
        let weights: Vec<f64> = fac
            .values
            .iter()
            .map(|&s| inst.mu * (inst.beta / (inst.tau_pen + s) - p0))
            .collect();
        let spectral = fac.recompose_with(&weights);
        let mut grad = Point::from_column_slice(spectral.as_slice());
        for (&i, o) in self.flat.iter().zip(&inst.ratings.observations) {
            grad[i] += z[i] - o.value;
        }
        let value = self.data_fit(z) + self.spectral_part(fac.values.as_slice());
        Ok((value, grad))
    }

    fn h_value(&self, z: &Point) -> Result<f64> {
        if z.norm() > self.instance.radius * (1.0 + 1e-10) {
            return Ok(f64::INFINITY);
        }
        let nuclear: f64 = self.singular_values(z)?.iter().sum();
        Ok(self.instance.mu * self.instance.p0() * nuclear)
    }

    fn h_prox(&self, z: &Point, step: f64) -> Result<Point> {
        let inst = &self.instance;
        let out = prox_nuclear_ball(&self.matrix(z), inst.mu * inst.p0() * step, inst.radius)?;
        Ok(Point::from_column_slice(out.as_slice()))
    }

    fn omega_project(&self, z: &Point) -> Result<Point> {
        Ok(project_ball(z, self.instance.radius))
    }

    fn curvature(&self) -> CurvatureTriple {
        self.instance.curvature_triple()
    }
}
