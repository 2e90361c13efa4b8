use std::io::Write;

use acfista_core::problems::{
    generate_mc, generate_qp, generate_quadratic, generate_svm, load_ratings, McInstance,
    QpInstance, Ratings,
};
use acfista_core::{Instance, InstanceFile, Problem};

fn instances() -> Vec<Instance> {
    let ratings = generate_mc(6, 7, 2, 0.5, (1.0, 5.0), 3).unwrap();
    vec![
        Instance::Svm(generate_svm(40, 20, 0.1, 0.05, 10.0, 1).unwrap()),
        Instance::Qp(
            QpInstance::calibrated(generate_qp(3, 5, 0.4, 2).unwrap(), 100.0, 1.0).unwrap(),
        ),
        Instance::Mc(McInstance::with_scale_radius(ratings, 1.0, 2.0, 1.0, 5.0).unwrap()),
        Instance::Quadratic(generate_quadratic(5, -1.0, 3.0, Some(2.0), 2.0, 4).unwrap()),
    ]
}

#[test]
fn instance_files_round_trip_through_json() {
    for inst in instances() {
        let file = InstanceFile::new(7, Default::default(), inst);
        let text = serde_json::to_string(&file).unwrap();
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        back.check().unwrap();
        assert_eq!(back, file);
        assert!(text.contains(&format!("\"family\":\"{}\"", file.instance.family())));
    }
}

#[test]
fn generators_are_deterministic() {
    assert_eq!(instances(), instances());
    assert_ne!(
        generate_svm(40, 20, 0.1, 0.05, 10.0, 1).unwrap(),
        generate_svm(40, 20, 0.1, 0.05, 10.0, 2).unwrap()
    );
}

#[test]
fn initial_points_lie_in_dom_h() {
    for inst in instances() {
        let oracle = inst.oracle().unwrap();
        let z0 = inst.initial_point(11);
        assert_eq!(z0.len(), oracle.dimension());
        assert!(
            oracle.h_value(&z0).unwrap().is_finite(),
            "{}",
            inst.family()
        );
        assert_eq!(z0, inst.initial_point(11));
    }
}

#[test]
fn curvature_triples_are_consistent() {
    for inst in instances() {
        let t = inst.oracle().unwrap().curvature();
        assert!(t.lower >= 0.0 && t.upper >= 0.0);
        assert!(
            t.lipschitz >= t.upper.max(t.lower) * (1.0 - 1e-12),
            "{}",
            inst.family()
        );
    }
}

#[test]
fn qp_calibration_hits_targets() {
    let inst = QpInstance::calibrated(generate_qp(5, 9, 0.3, 8).unwrap(), 1e4, 1e2).unwrap();
    let t = qp_oracle_triple(&inst);
    assert_eq!((t.0, t.1), (1e2, 1e4));
}

fn qp_oracle_triple(inst: &QpInstance) -> (f64, f64) {
    let t = acfista_core::problems::qp_oracle(inst.clone())
        .unwrap()
        .curvature();
    (t.lower, t.upper)
}

#[test]
fn ratings_file_loads() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "1\t1\t5\t874965758").unwrap();
    writeln!(file, "3\t2\t4\t876893171").unwrap();
    writeln!(file).unwrap();
    writeln!(file, "2\t4\t1\t878542960").unwrap();
    let r: Ratings = load_ratings(file.path()).unwrap();
    assert_eq!((r.rows, r.cols, r.len()), (3, 4, 3));
    assert!(load_ratings("/nonexistent/ratings.data").is_err());
}
