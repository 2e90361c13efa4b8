#![allow(dead_code)]

use acfista_core::error::Result;
use acfista_core::prox::{project_ball, soft_threshold};
use acfista_core::solver::SolverResult;
use acfista_core::{CurvatureTriple, Point, Problem};

/// `f(x) = x^4/4 - x^2/2` on `[-2, 2]`. Stationary points are `-1, 0, 1`.
pub struct Quartic;

impl Problem for Quartic {
    fn dimension(&self) -> usize {
        1
    }
    fn f_value(&self, z: &Point) -> Result<f64> {
        let x = z[0];
        Ok(x.powi(4) / 4.0 - x * x / 2.0)
    }
    fn f_gradient(&self, z: &Point) -> Result<Point> {
        let x = z[0];
        Ok(Point::from_element(1, x.powi(3) - x))
    }
    fn h_value(&self, z: &Point) -> Result<f64> {
        Ok(if z[0].abs() <= 2.0 {
            0.0
        } else {
            f64::INFINITY
        })
    }
    fn h_prox(&self, z: &Point, _step: f64) -> Result<Point> {
        Ok(Point::from_element(1, z[0].clamp(-2.0, 2.0)))
    }
    fn omega_project(&self, z: &Point) -> Result<Point> {
        self.h_prox(z, 1.0)
    }
    fn curvature(&self) -> CurvatureTriple {
        // f'' = 3x^2 - 1 on [-2, 2]
        CurvatureTriple::new(1.0, 11.0, 11.0).unwrap()
    }
}

/// `f(x) = x^4 / 4`, `h = 0`.
pub struct PureQuartic;

impl Problem for PureQuartic {
    fn dimension(&self) -> usize {
        1
    }
    fn f_value(&self, z: &Point) -> Result<f64> {
        Ok(z[0].powi(4) / 4.0)
    }
    fn f_gradient(&self, z: &Point) -> Result<Point> {
        Ok(Point::from_element(1, z[0].powi(3)))
    }
    fn h_value(&self, _z: &Point) -> Result<f64> {
        Ok(0.0)
    }
    fn h_prox(&self, z: &Point, _step: f64) -> Result<Point> {
        Ok(z.clone())
    }
    fn omega_project(&self, z: &Point) -> Result<Point> {
        Ok(project_ball(z, 1e6))
    }
    fn curvature(&self) -> CurvatureTriple {
        CurvatureTriple::new(0.0, 3.0, 3.0).unwrap()
    }
}

/// `f(z) = <g, z> + c`, `h = 0`.
pub struct Linear(pub Point);

impl Problem for Linear {
    fn dimension(&self) -> usize {
        self.0.len()
    }
    fn f_value(&self, z: &Point) -> Result<f64> {
        Ok(self.0.dot(z) + 3.0)
    }
    fn f_gradient(&self, _z: &Point) -> Result<Point> {
        Ok(self.0.clone())
    }
    fn h_value(&self, _z: &Point) -> Result<f64> {
        Ok(0.0)
    }
    fn h_prox(&self, z: &Point, _step: f64) -> Result<Point> {
        Ok(z.clone())
    }
    fn omega_project(&self, z: &Point) -> Result<Point> {
        Ok(z.clone())
    }
    fn curvature(&self) -> CurvatureTriple {
        CurvatureTriple::new(0.0, 0.0, 0.0).unwrap()
    }
}

/// `f = ||z - c||^2 / 2`, `h = lam ||z||_1`.
pub struct LassoLike {
    pub center: Point,
    pub lam: f64,
}

impl Problem for LassoLike {
    fn dimension(&self) -> usize {
        self.center.len()
    }
    fn f_value(&self, z: &Point) -> Result<f64> {
        Ok((z - &self.center).norm_squared() / 2.0)
    }
    fn f_gradient(&self, z: &Point) -> Result<Point> {
        Ok(z - &self.center)
    }
    fn h_value(&self, z: &Point) -> Result<f64> {
        Ok(self.lam * z.lp_norm(1))
    }
    fn h_prox(&self, z: &Point, step: f64) -> Result<Point> {
        Ok(Point::from_vec(soft_threshold(
            z.as_slice(),
            self.lam * step,
        )))
    }
    fn omega_project(&self, z: &Point) -> Result<Point> {
        Ok(project_ball(z, 1e6))
    }
    fn curvature(&self) -> CurvatureTriple {
        CurvatureTriple::new(0.0, 1.0, 1.0).unwrap()
    }
}

/// Euclidean projection onto the unit simplex by enumerating supports.
pub fn simplex_brute_force(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let t = (support.iter().map(|&i| v[i]).sum::<f64>() - 1.0) / support.len() as f64;
        let mut u = vec![0.0; n];
        let mut ok = true;
        for &i in &support {
            u[i] = v[i] - t;
            ok &= u[i] >= -1e-14;
        }
        // KKT: off-support coordinates must not want to enter
        ok &= (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .all(|i| v[i] - t <= 1e-14);
        if ok {
            let d: f64 = u.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, u.iter().map(|x| x.max(0.0)).collect()));
            }
        }
    }
    best.expect("some support satisfies KKT").1
}

/// Checks the per-record invariants every run must satisfy.
pub fn assert_trace_invariants(result: &SolverResult, gamma: f64, m_cap: f64) {
    for r in &result.trace {
        let rel = (r.a_next - r.m * r.a * r.a).abs() / r.a_next;
        assert!(rel <= 1e-12, "k={} recurrence error {rel:e}", r.k);
        assert!(
            r.m >= gamma * m_cap * (1.0 - 1e-15),
            "k={} M={} below floor",
            r.k,
            r.m
        );
    }
    let total: usize = result.trace.iter().map(|r| r.resolvents).sum();
    assert_eq!(total, result.total_resolvents);
}
