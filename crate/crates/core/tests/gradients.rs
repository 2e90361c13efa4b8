use acfista_core::problems::{
    generate_mc, generate_qp, generate_svm, mc_initial_point, mc_oracle, qp_oracle, seeded_rng,
    svm_oracle, uniform_in_ball, McInstance, QpInstance,
};
use acfista_core::verify::gradient_relative_error;
use acfista_core::{Point, Problem};
use nalgebra::DMatrix;
use rand::Rng;

fn worst_error<P: Problem>(problem: &P, points: impl Iterator<Item = Point>) -> f64 {
    points
        .map(|z| gradient_relative_error(problem, &z).unwrap())
        .fold(0.0, f64::max)
}

#[test]
fn svm_gradient_matches_finite_differences() {
    let inst = generate_svm(60, 30, 0.2, 1.0 / 30.0, 5.0, 4).unwrap();
    let prob = svm_oracle(inst).unwrap();
    let mut rng = seeded_rng(99, 0);
    let err = worst_error(&prob, (0..20).map(|_| uniform_in_ball(60, 5.0, &mut rng)));
    assert!(err <= 1e-5, "{err:e}");
}

fn random_density_matrix(n: usize, rng: &mut impl Rng) -> Point {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let s = &a * a.transpose();
    let s = &s / s.trace();
    Point::from_column_slice(s.as_slice())
}

#[test]
fn qp_gradient_matches_finite_differences() {
    let data = generate_qp(6, 8, 0.3, 5).unwrap();
    let prob = qp_oracle(QpInstance::calibrated(data, 1e4, 1e2).unwrap()).unwrap();
    let mut rng = seeded_rng(98, 0);
    let err = worst_error(&prob, (0..20).map(|_| random_density_matrix(8, &mut rng)));
    assert!(err <= 1e-5, "{err:e}");
}

#[test]
fn mc_gradient_matches_finite_differences() {
    let ratings = generate_mc(10, 14, 3, 0.3, (1.0, 5.0), 6).unwrap();
    let inst = McInstance::with_scale_radius(ratings, 1.0, 2.0, 1.0, 5.0).unwrap();
    let prob = mc_oracle(inst.clone()).unwrap();
    let err = worst_error(&prob, (0..20).map(|s| mc_initial_point(&inst, s)));
    assert!(err <= 1e-4, "{err:e}");
}
