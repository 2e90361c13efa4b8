//! Nonconvex quadratic program over the spectraplex.
//!
//! `f(Z) = -(alpha1/2) ||D P(Z)||^2 + (alpha2/2) ||Q(Z) - b||^2` with
//! `P(Z)_i = <P_i, Z>` and `Q(Z)_j = <Q_j, Z>`; `h` is the indicator of
//! `{Z PSD, tr Z = 1}`. `Z` is an `n x n` symmetric matrix stored
//! column-major.
//!
//! `Omega` defaults to the convex set `{Z PSD, ||Z||_F <= 1}`, which contains
//! the spectraplex. The unit sphere variant `{Z PSD, ||Z||_F = 1}` is kept
//! for comparison; it is not convex and does not contain the spectraplex.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::{seeded_rng, INSTANCE_STREAM};
use super::sparse::SparseSymmetric;
use crate::error::{Error, Result};
use crate::problem::{CurvatureTriple, Point, Problem};
use crate::prox::{
    project_psd_unit_ball, project_psd_unit_sphere, project_spectraplex, symmetric_factorization,
};

pub const POWER_TOL: f64 = 1e-8;
pub const POWER_MAX_ITER: usize = 5000;

/// Raw operator data before calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpData {
    pub l: usize,
    pub n: usize,
    pub b: Vec<f64>,
    /// Diagonal of `D`, integers in `[1, 1000]`.
    pub d: Vec<f64>,
    pub p_ops: Vec<SparseSymmetric>,
    pub q_ops: Vec<SparseSymmetric>,
}

/// Choice of the enclosing set `Omega`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QpOmega {
    #[default]
    PsdUnitBall,
    PsdUnitSphere,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpInstance {
    #[serde(flatten)]
    pub data: QpData,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Target upper curvature `M`.
    pub upper_target: f64,
    /// Target lower curvature `m`.
    pub lower_target: f64,
    #[serde(default)]
    pub omega: QpOmega,
}

/// `b ~ U[0,1]^l`, `D_ii ~ U{1..1000}`, and `n` operators `P_i` plus `l`
/// operators `Q_j`, each a symmetrized sparse matrix of the given density.
pub fn generate_qp(l: usize, n: usize, density: f64, seed: u64) -> Result<QpData> {
    if l == 0 || n == 0 {
        return Err(Error::invalid("QP needs l >= 1 and n >= 1"));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::invalid(format!("density {density} not in (0, 1]")));
    }
    let mut rng = seeded_rng(seed, INSTANCE_STREAM);
    let b = (0..l).map(|_| rng.random::<f64>()).collect();
    let d = (0..n)
        .map(|_| rng.random_range(1..=1000u32) as f64)
        .collect();
    let p_ops = (0..n)
        .map(|_| SparseSymmetric::random(n, density, &mut rng))
        .collect();
    let q_ops = (0..l)
        .map(|_| SparseSymmetric::random(n, density, &mut rng))
        .collect();
    Ok(QpData {
        l,
        n,
        b,
        d,
        p_ops,
        q_ops,
    })
}

/// Largest eigenvalue of a symmetric PSD operator by power iteration,
/// stopping when the Rayleigh quotient changes by at most `tol` relative.
pub fn power_iteration<F>(apply: F, start: Vec<f64>, tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut x = start;
    let n0 = norm(&x);
    if n0 == 0.0 {
        return Err(Error::invalid("power iteration start vector is zero"));
    }
    x.iter_mut().for_each(|v| *v /= n0);
    let mut lambda_prev = f64::NAN;
    for _ in 0..max_iter {
        let y = apply(&x);
        let lambda: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ny = norm(&y);
        if ny == 0.0 {
            return Ok(0.0);
        }
        if (lambda - lambda_prev).abs() <= tol * lambda.abs() {
            return Ok(lambda);
        }
        lambda_prev = lambda;
        x = y.into_iter().map(|v| v / ny).collect();
    }
    Err(Error::PowerIteration {
        iterations: max_iter,
    })
}

fn symmetric_start(n: usize) -> Vec<f64> {
    let mut rng = seeded_rng(0x5eed, INSTANCE_STREAM);
    let mut z = vec![0.0; n * n];
    for c in 0..n {
        for r in 0..=c {
            let v = rng.random::<f64>() + 0.5;
            z[r + c * n] = v;
            z[c + r * n] = v;
        }
    }
    z
}

/// `Op* W Op` applied to `z`: `sum_i w_i <S_i, z> S_i`.
fn gram_apply(ops: &[SparseSymmetric], weights: Option<&[f64]>, z: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; z.len()];
    for (i, s) in ops.iter().enumerate() {
        let w = weights.map_or(1.0, |w| w[i]);
        s.axpy_into(w * s.inner(z), &mut out);
    }
    out
}

/// Largest eigenvalues `(lambda_Q, lambda_P)` of `Q*Q` and `P* D^2 P`.
pub fn operator_norms(data: &QpData) -> Result<(f64, f64)> {
    let n = data.n;
    let d2: Vec<f64> = data.d.iter().map(|d| d * d).collect();
    let lq = power_iteration(
        |z| gram_apply(&data.q_ops, None, z),
        symmetric_start(n),
        POWER_TOL,
        POWER_MAX_ITER,
    )?;
    let lp = power_iteration(
        |z| gram_apply(&data.p_ops, Some(&d2), z),
        symmetric_start(n),
        POWER_TOL,
        POWER_MAX_ITER,
    )?;
    Ok((lq, lp))
}

/// Scales `(alpha1, alpha2)` so the Hessian `alpha2 Q*Q - alpha1 P*D^2P`
/// has spectrum inside `[-lower_target, upper_target]`, with each end
/// attained by its own term.
pub fn qp_calibrate(data: &QpData, upper_target: f64, lower_target: f64) -> Result<(f64, f64)> {
    if !(upper_target > 0.0) || !(lower_target >= 0.0) {
        return Err(Error::invalid("QP calibration needs M > 0 and m >= 0"));
    }
    let (lq, lp) = operator_norms(data)?;
    if lq <= 0.0 || (lower_target > 0.0 && lp <= 0.0) {
        return Err(Error::invalid("QP operators must be nonzero"));
    }
    let alpha2 = upper_target / lq;
    let alpha1 = if lower_target == 0.0 {
        0.0
    } else {
        lower_target / lp
    };
    Ok((alpha1, alpha2))
}

impl QpInstance {
    pub fn calibrated(data: QpData, upper_target: f64, lower_target: f64) -> Result<Self> {
        let (alpha1, alpha2) = qp_calibrate(&data, upper_target, lower_target)?;
        Ok(Self {
            data,
            alpha1,
            alpha2,
            upper_target,
            lower_target,
            omega: QpOmega::default(),
        })
    }

    /// `<Z, Hess f Z>` for a direction `z`.
    pub fn hessian_quadratic_form(&self, z: &[f64]) -> f64 {
        let data = &self.data;
        let q: f64 = data.q_ops.iter().map(|s| s.inner(z).powi(2)).sum();
        let p: f64 = data
            .p_ops
            .iter()
            .zip(&data.d)
            .map(|(s, d)| (d * s.inner(z)).powi(2))
            .sum();
        self.alpha2 * q - self.alpha1 * p
    }

    pub fn validate(&self) -> Result<()> {
        let data = &self.data;
        if data.b.len() != data.l
            || data.q_ops.len() != data.l
            || data.d.len() != data.n
            || data.p_ops.len() != data.n
        {
            return Err(Error::invalid("QP shape mismatch"));
        }
        if data.p_ops.iter().chain(&data.q_ops).any(|s| s.n != data.n) {
            return Err(Error::invalid("QP operator shape mismatch"));
        }
        if !(self.alpha1 >= 0.0) || !(self.alpha2 >= 0.0) {
            return Err(Error::invalid("QP alphas must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct QpProblem {
    instance: QpInstance,
}

pub fn qp_oracle(instance: QpInstance) -> Result<QpProblem> {
    instance.validate()?;
    Ok(QpProblem { instance })
}

impl QpProblem {
    pub fn instance(&self) -> &QpInstance {
        &self.instance
    }

    fn matrix(&self, z: &Point) -> DMatrix<f64> {
        let n = self.instance.data.n;
        DMatrix::from_column_slice(n, n, z.as_slice())
    }
}

/// Centroid `I / n` of the spectraplex.
pub fn qp_initial_point(n: usize) -> Point {
    let mut z = Point::zeros(n * n);
    for i in 0..n {
        z[i + i * n] = 1.0 / n as f64;
    }
    z
}

impl Problem for QpProblem {
    fn dimension(&self) -> usize {
        self.instance.data.n * self.instance.data.n
    }

    fn f_value(&self, z: &Point) -> Result<f64> {
        let inst = &self.instance;
        let zs = z.as_slice();
        let p: f64 = inst
            .data
            .p_ops
            .iter()
            .zip(&inst.data.d)
            .map(|(s, d)| (d * s.inner(zs)).powi(2))
            .sum();
        let q: f64 = inst
            .data
            .q_ops
            .iter()
            .zip(&inst.data.b)
            .map(|(s, b)| (s.inner(zs) - b).powi(2))
            .sum();
        Ok(-0.5 * inst.alpha1 * p + 0.5 * inst.alpha2 * q)
    }

    fn f_gradient(&self, z: &Point) -> Result<Point> {
        Ok(self.f_value_and_gradient(z)?.1)
    }

    fn f_value_and_gradient(&self, z: &Point) -> Result<(f64, Point)> {
        let inst = &self.instance;
        let zs = z.as_slice();
        let mut grad = Point::zeros(z.len());
        let g = grad.as_mut_slice();
        let mut p_sum = 0.0;
        for (s, d) in inst.data.p_ops.iter().zip(&inst.data.d) {
            let w = s.inner(zs);
            p_sum += (d * w).powi(2);
            if inst.alpha1 != 0.0 {
                s.axpy_into(-inst.alpha1 * d * d * w, g);
            }
        }
        let mut q_sum = 0.0;
        for (s, b) in inst.data.q_ops.iter().zip(&inst.data.b) {
            let r = s.inner(zs) - b;
            q_sum += r * r;
            s.axpy_into(inst.alpha2 * r, g);
        }
        Ok((-0.5 * inst.alpha1 * p_sum + 0.5 * inst.alpha2 * q_sum, grad))
    }

    fn h_value(&self, z: &Point) -> Result<f64> {
        let zm = self.matrix(z);
        let tol = 1e-9;
        if (&zm - zm.transpose()).norm() > tol * (1.0 + zm.norm()) || (zm.trace() - 1.0).abs() > tol
        {
            return Ok(f64::INFINITY);
        }
        let fac = symmetric_factorization(&zm)?;
        let min = fac.values.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(if min >= -tol { 0.0 } else { f64::INFINITY })
    }

    fn h_prox(&self, z: &Point, _step: f64) -> Result<Point> {
        let out = project_spectraplex(&self.matrix(z))?;
        Ok(Point::from_column_slice(out.as_slice()))
    }

    fn omega_project(&self, z: &Point) -> Result<Point> {
        let zm = self.matrix(z);
        let out = match self.instance.omega {
            QpOmega::PsdUnitBall => project_psd_unit_ball(&zm)?,
            QpOmega::PsdUnitSphere => project_psd_unit_sphere(&zm)?,
        };
        Ok(Point::from_column_slice(out.as_slice()))
    }

    fn curvature(&self) -> CurvatureTriple {
        let (m, big_m) = (self.instance.lower_target, self.instance.upper_target);
        CurvatureTriple {
            lower: m,
            upper: big_m,
            lipschitz: big_m.max(m),
        }
    }
}
