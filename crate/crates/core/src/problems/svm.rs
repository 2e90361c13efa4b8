//! Binary classification with the nonconvex sigmoid loss over a ball.
//!
//! `f(z) = (1/p) sum_i [1 - tanh(v_i <z, u_i>)] + (lambda/2) ||z||^2`,
//! `h` = indicator of `B_r`, `Omega = B_r`.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::rng::{seeded_rng, INSTANCE_STREAM, START_STREAM};
use super::sparse::SparseVector;
use crate::error::{Error, Result};
use crate::problem::{CurvatureTriple, Point, Problem};
use crate::prox::project_ball;

/// Largest absolute second derivative of `t -> 1 - tanh(t)`.
pub const SIGMOID_CURVATURE: f64 = 0.769_800_358_919_501; // 4 sqrt(3) / 9

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmInstance {
    pub n: usize,
    pub features: Vec<SparseVector>,
    /// Each label is `-1.0` or `+1.0`.
    pub labels: Vec<f64>,
    pub lambda: f64,
    pub r: f64,
}

impl SvmInstance {
    pub fn p(&self) -> usize {
        self.features.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.is_empty() || self.features.len() != self.labels.len() {
            return Err(Error::invalid(
                "SVM needs matching, non-empty features and labels",
            ));
        }
        if self.labels.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(Error::invalid("SVM labels must be -1 or +1"));
        }
        if !(self.lambda > 0.0) || !(self.r > 0.0) {
            return Err(Error::invalid("SVM needs lambda > 0 and r > 0"));
        }
        if self
            .features
            .iter()
            .any(|u| u.indices.iter().any(|&i| i >= self.n))
        {
            return Err(Error::invalid("SVM feature index out of range"));
        }
        Ok(())
    }

    /// `(1/p) sum_i (4 sqrt 3 / 9) ||u_i||^2 + lambda`.
    pub fn curvature_bound(&self) -> f64 {
        let sum: f64 = self.features.iter().map(SparseVector::norm_squared).sum();
        SIGMOID_CURVATURE * sum / self.p() as f64 + self.lambda
    }
}

/// Oracle for an [`SvmInstance`].
#[derive(Debug, Clone)]
pub struct SvmProblem {
    instance: SvmInstance,
    curvature: CurvatureTriple,
}

impl SvmProblem {
    pub fn instance(&self) -> &SvmInstance {
        &self.instance
    }
}

pub fn svm_oracle(instance: SvmInstance) -> Result<SvmProblem> {
    instance.validate()?;
    let c = instance.curvature_bound();
    Ok(SvmProblem {
        instance,
        curvature: CurvatureTriple {
            lower: c,
            upper: c,
            lipschitz: c,
        },
    })
}

impl Problem for SvmProblem {
    fn dimension(&self) -> usize {
        self.instance.n
    }

    fn f_value(&self, z: &Point) -> Result<f64> {
        let p = self.instance.p() as f64;
        let zs = z.as_slice();
        let loss: f64 = self
            .instance
            .features
            .iter()
            .zip(&self.instance.labels)
            .map(|(u, &v)| 1.0 - (v * u.dot(zs)).tanh())
            .sum();
        Ok(loss / p + 0.5 * self.instance.lambda * z.norm_squared())
    }

    fn f_gradient(&self, z: &Point) -> Result<Point> {
        Ok(self.f_value_and_gradient(z)?.1)
    }

    fn f_value_and_gradient(&self, z: &Point) -> Result<(f64, Point)> {
        let inst = &self.instance;
        let p = inst.p() as f64;
        let mut grad = z * inst.lambda;
        let mut loss = 0.0;
        let zs = z.as_slice();
        for (u, &v) in inst.features.iter().zip(&inst.labels) {
            let t = v * u.dot(zs);
            let th = t.tanh();
            loss += 1.0 - th;
            // d/dt [1 - tanh t] = -(1 - tanh^2 t)
            u.axpy_into(-v * (1.0 - th * th) / p, grad.as_mut_slice());
        }
        Ok((loss / p + 0.5 * inst.lambda * z.norm_squared(), grad))
    }

    fn h_value(&self, z: &Point) -> Result<f64> {
        Ok(if z.norm() <= self.instance.r * (1.0 + 1e-10) {
            0.0
        } else {
            f64::INFINITY
        })
    }

    fn h_prox(&self, z: &Point, _step: f64) -> Result<Point> {
        Ok(project_ball(z, self.instance.r))
    }

    fn omega_project(&self, z: &Point) -> Result<Point> {
        Ok(project_ball(z, self.instance.r))
    }

    fn curvature(&self) -> CurvatureTriple {
        self.curvature
    }
}

/// Uniform sample from the ball of radius `r` in `R^n`.
pub fn uniform_in_ball<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> Point {
    let dir = Point::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)));
    let norm = dir.norm();
    let u: f64 = rng.random();
    let radius = r * u.powf(1.0 / n as f64);
    if norm == 0.0 {
        Point::zeros(n)
    } else {
        dir * (radius / norm)
    }
}

/// Synthetic instance: each `u_i` has `round(density * n)` (at least one)
/// uniform `[0, 1]` nonzeros, and `v_i = sign(<z_bar, u_i>)` for a hidden
/// `z_bar` uniform in `B_r` (ties labelled `+1`).
pub fn generate_svm(
    n: usize,
    p: usize,
    density: f64,
    lambda: f64,
    r: f64,
    seed: u64,
) -> Result<SvmInstance> {
    if n == 0 || p == 0 {
        return Err(Error::invalid("SVM needs n >= 1 and p >= 1"));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::invalid(format!("density {density} not in (0, 1]")));
    }
    let mut rng = seeded_rng(seed, INSTANCE_STREAM);
    let z_bar = uniform_in_ball(n, r, &mut rng);
    let nnz = ((density * n as f64).round() as usize).clamp(1, n);
    let mut features = Vec::with_capacity(p);
    let mut labels = Vec::with_capacity(p);
    for _ in 0..p {
        let mut indices = sample(&mut rng, n, nnz).into_vec();
        indices.sort_unstable();
        let values: Vec<f64> = indices.iter().map(|_| rng.random::<f64>()).collect();
        let u = SparseVector { indices, values };
        labels.push(if u.dot(z_bar.as_slice()) >= 0.0 {
            1.0
        } else {
            -1.0
        });
        features.push(u);
    }
    let inst = SvmInstance {
        n,
        features,
        labels,
        lambda,
        r,
    };
    inst.validate()?;
    Ok(inst)
}

/// Shared starting point: uniform in `B_r`.
pub fn svm_initial_point(instance: &SvmInstance, seed: u64) -> Point {
    let mut rng = seeded_rng(seed, START_STREAM);
    uniform_in_ball(instance.n, instance.r, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn single() -> SvmInstance {
        SvmInstance {
            n: 2,
            features: vec![SparseVector {
                indices: vec![0],
                values: vec![1.0],
            }],
            labels: vec![1.0],
            lambda: 0.0,
            r: 10.0,
        }
    }

    #[test]
    fn single_point_value_and_gradient() {
        let mut inst = single();
        inst.lambda = 1e-300; // validate() wants lambda > 0; negligible here
        let prob = svm_oracle(inst).unwrap();
        let z = Point::zeros(2);
        let (f, g) = prob.f_value_and_gradient(&z).unwrap();
        assert_eq!(f, 1.0);
        assert_eq!(g.as_slice(), &[-1.0, 0.0]);
    }

    #[test]
    fn curvature_formula_single_point() {
        assert_relative_eq!(
            single().curvature_bound(),
            4.0 * 3f64.sqrt() / 9.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            SIGMOID_CURVATURE,
            4.0 * 3f64.sqrt() / 9.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn full_density_gives_dense_vector() {
        let inst = generate_svm(2, 1, 1.0, 0.5, 50.0, 9).unwrap();
        assert_eq!(inst.features.len(), 1);
        assert_eq!(inst.features[0].indices, vec![0, 1]);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_svm(50, 20, 0.1, 0.05, 50.0, 4).unwrap();
        let b = generate_svm(50, 20, 0.1, 0.05, 50.0, 4).unwrap();
        let c = generate_svm(50, 20, 0.1, 0.05, 50.0, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.features.iter().all(|u| u.nnz() == 5));
    }

    #[test]
    fn rejects_bad_density() {
        assert!(generate_svm(10, 2, 0.0, 0.1, 1.0, 0).is_err());
        assert!(generate_svm(10, 2, 1.5, 0.1, 1.0, 0).is_err());
    }

    #[test]
    fn initial_point_lies_in_ball() {
        let inst = generate_svm(30, 5, 0.2, 0.2, 2.0, 1).unwrap();
        for seed in 0..20 {
            assert!(svm_initial_point(&inst, seed).norm() <= 2.0);
        }
    }
}
