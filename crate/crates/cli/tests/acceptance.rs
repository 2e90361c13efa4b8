//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.
//!
//! The solver battery is the shipped experiment configs, each with a
//! monotone AC-FISTA run added, plus a `gamma = 1` quadratic experiment.

use std::fmt::Write as _;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::rc::Rc;
use std::time::Instant;

use acfista_cli::experiment::solver_setup;
use acfista_cli::{build_instance, run_experiment, ExperimentConfig, MethodName, SolverSpec};
use acfista_core::diagnostics::theta_tau_series;
use acfista_core::problems::{
    generate_mc, generate_qp, generate_quadratic, generate_svm, mc_initial_point, mc_oracle,
    qp_oracle, seeded_rng, svm_oracle, uniform_in_ball, McInstance, QpInstance,
};
use acfista_core::prox::{project_ball, project_simplex, prox_l1_l2ball};
use acfista_core::solver::{initial_state, iterate, run, Method};
use acfista_core::verify::{check_stationarity, default_stationarity_tol, gradient_relative_error};
use acfista_core::{
    diagnose, DiagnosticsReport, IterateRule, Point, Problem, SolverConfig, SolverResult,
    TerminationMode, TerminationReason,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

type Outcome = Result<String, String>;

const MONOTONE: &str =
    r#"{"method": "ac_fista", "label": "AF-mono", "overrides": {"iterate_rule": "monotone"}}"#;

const GAMMA_ONE: &str = r#"{
    "name": "gamma-one", "seed": 11,
    "defaults": {"gamma": 1.0, "max_iterations": 5000},
    "problems": [
        {"label": "convex", "family": "quadratic", "dim": 30, "min_curv": 0.1, "max_curv": 50, "omega_radius": 1e6},
        {"label": "nonconvex", "family": "quadratic", "dim": 30, "min_curv": -5, "max_curv": 50,
         "constraint_radius": 2, "omega_radius": 2},
        {"label": "concave-heavy", "family": "quadratic", "dim": 10, "min_curv": -20, "max_curv": 3,
         "constraint_radius": 1, "omega_radius": 1}
    ],
    "solvers": [
        {"method": "ac_fista", "label": "AF"},
        {"method": "ac_fista_restart", "label": "AF(R)"},
        {"method": "ac_fista", "label": "AF-mono", "overrides": {"iterate_rule": "monotone"}}
    ]
}"#;

const SHIPPED: [&str; 4] = [
    "svm-desk.json",
    "qp-desk.json",
    "mc-desk.json",
    "quadratic-smoke.json",
];

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

struct Run {
    experiment: String,
    problem: String,
    solver: String,
    spec: SolverSpec,
    oracle: Rc<dyn Problem>,
    z0: Point,
    config: SolverConfig,
    method: Method,
    result: SolverResult,
    diagnostics: DiagnosticsReport,
}

impl Run {
    fn name(&self) -> String {
        format!("{}/{}/{}", self.experiment, self.problem, self.solver)
    }

    fn is_ac_fista(&self) -> bool {
        matches!(
            self.spec.method,
            MethodName::AcFista | MethodName::AcFistaRestart
        )
    }
}

struct Battery {
    runs: Vec<Run>,
}

impl Battery {
    fn build() -> anyhow::Result<Self> {
        let mut experiments = Vec::new();
        for name in SHIPPED {
            let mut experiment = ExperimentConfig::load(&config_path(name))?;
            if !experiment
                .solvers
                .iter()
                .any(|s| s.overrides.iterate_rule == Some(IterateRule::Monotone))
            {
                experiment.solvers.push(serde_json::from_str(MONOTONE)?);
            }
            experiments.push(experiment);
        }
        experiments.push(serde_json::from_str(GAMMA_ONE)?);

        let mut runs = Vec::new();
        for experiment in &experiments {
            experiment.validate()?;
            for (index, entry) in experiment.problems.iter().enumerate() {
                let seed = experiment.problem_seed(index);
                let instance = build_instance(&entry.spec, seed)?;
                let oracle: Rc<dyn Problem> = Rc::from(instance.oracle()?);
                let curvature = oracle.curvature();
                let z0 = instance.initial_point(seed);
                for spec in &experiment.solvers {
                    let (config, method) =
                        solver_setup(experiment, spec, curvature.upper, curvature.lipschitz, seed);
                    let result = run(oracle.as_ref(), &config, method, &z0)?;
                    let diagnostics = diagnose(&result);
                    runs.push(Run {
                        experiment: experiment.name.clone(),
                        problem: experiment.problem_label(index),
                        solver: spec.label(),
                        spec: spec.clone(),
                        oracle: oracle.clone(),
                        z0: z0.clone(),
                        config,
                        method,
                        result,
                        diagnostics,
                    });
                }
            }
        }
        Ok(Self { runs })
    }

    fn find(&self, experiment: &str, problem: &str, solver: &str) -> Result<&Run, String> {
        self.runs
            .iter()
            .find(|r| r.experiment == experiment && r.problem == problem && r.solver == solver)
            .ok_or_else(|| format!("no run {experiment}/{problem}/{solver}"))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn total_iterations(battery: &Battery) -> usize {
    battery.runs.iter().map(|r| r.result.trace.len()).sum()
}

fn ac1_recurrence(battery: &Battery) -> Outcome {
    let mut worst: f64 = 0.0;
    for run in &battery.runs {
        let floor = run.config.gamma * run.config.m_cap;
        for r in &run.result.trace {
            let rel = (r.a_next - r.m * r.a * r.a).abs() / r.a_next;
            worst = worst.max(rel);
            ensure(rel <= 1e-12, || {
                format!(
                    "{} k={}: A_next vs M a^2 rel error {rel:e}",
                    run.name(),
                    r.k
                )
            })?;
            ensure(r.m >= floor * (1.0 - 1e-15), || {
                format!("{} k={}: M={} below {floor}", run.name(), r.k, r.m)
            })?;
        }
    }
    Ok(format!(
        "{} runs, {} iterations, worst relative error {worst:.1e}",
        battery.runs.len(),
        total_iterations(battery)
    ))
}

fn ac2_theta_bound(battery: &Battery) -> Outcome {
    let mut min_margin = f64::INFINITY;
    let mut worst_tau_ratio: f64 = 0.0;
    for run in &battery.runs {
        let (theta, tau) = theta_tau_series(&run.result.ledger);
        let tau_cap = run.oracle.curvature().lipschitz / (run.config.gamma * run.config.m_cap);
        for (i, (&th, &ta)) in theta.iter().zip(&tau).enumerate() {
            let k = (i + 1) as f64;
            let lower = (k - 1.0) / (2.0 * k);
            min_margin = min_margin.min(th - lower);
            worst_tau_ratio = worst_tau_ratio.max(ta / tau_cap);
            ensure(th >= lower - 1e-12, || {
                format!("{} k={}: theta {th} < {lower}", run.name(), i + 1)
            })?;
            ensure(ta <= tau_cap * (1.0 + 1e-12), || {
                format!("{} k={}: tau {ta} > {tau_cap}", run.name(), i + 1)
            })?;
        }
    }
    Ok(format!(
        "{} traces, min theta margin {min_margin:.3e}, max tau / cap {worst_tau_ratio:.3e}",
        battery.runs.len()
    ))
}

fn ac3_fista_equivalence() -> Outcome {
    let q = generate_quadratic(40, 0.05, 25.0, None, 1e6, 3).map_err(|e| e.to_string())?;
    let config = SolverConfig {
        rho_hat: 1e-300,
        max_iterations: 400,
        ..SolverConfig::practical(25.0 / 0.9)
    };
    let z0 = Point::from_element(40, 3.0);
    let (mut state, g0) =
        initial_state(&q, &config, Method::AcFista, &z0).map_err(|e| e.to_string())?;
    let (mut checked, mut worst) = (0, 0.0f64);
    for _ in 0..config.max_iterations {
        let step = iterate(&q, &config, Method::AcFista, &state, g0, Instant::now())
            .map_err(|e| e.to_string())?;
        if step.record.is_good {
            let ratio = if state.a_sum == 0.0 {
                0.0
            } else {
                state.a_sum / step.record.a
            };
            let fista = &step.next.y + (&step.next.y - &state.y) * ratio;
            let err = (&step.next.x - &fista).norm() / (1.0 + fista.norm());
            worst = worst.max(err);
            ensure(err <= 1e-10, || {
                format!("k={}: x differs from FISTA update by {err:e}", state.k)
            })?;
            checked += 1;
        }
        state = step.next;
    }
    ensure(checked >= 100, || format!("only {checked} good iterations"))?;
    Ok(format!(
        "{checked} good iterations, worst relative error {worst:.1e}"
    ))
}

fn ac4_certificates(battery: &Battery) -> Outcome {
    let (mut certified, mut converged, mut capped) = (0, 0, Vec::new());
    for run in &battery.runs {
        let res = &run.result;
        let tol = default_stationarity_tol(&res.y_hat);
        let ok = check_stationarity(
            run.oracle.as_ref(),
            &res.y_hat,
            &res.v_hat,
            res.m_hat,
            &res.x_tilde_hat,
            tol,
        )
        .map_err(|e| format!("{}: {e}", run.name()))?;
        ensure(ok, || {
            format!("{}: returned pair fails the certificate", run.name())
        })?;
        certified += 1;
        match res.reason {
            TerminationReason::ToleranceMet => {
                ensure(res.final_residual <= run.config.rho_hat, || {
                    format!(
                        "{}: residual {} > {}",
                        run.name(),
                        res.final_residual,
                        run.config.rho_hat
                    )
                })?;
                ensure(
                    run.config.termination_mode == TerminationMode::Relative,
                    || format!("{}: not a relative criterion", run.name()),
                )?;
                if run.config.rho_hat <= 1e-7 {
                    converged += 1;
                }
            }
            _ => {
                ensure(!run.is_ac_fista(), || {
                    format!("{}: AC-FISTA stopped with {:?}", run.name(), res.reason)
                })?;
                capped.push(run.name());
            }
        }
    }
    let mut msg = format!("{certified} pairs certified, {converged} met relative 1e-7");
    if !capped.is_empty() {
        let _ = write!(
            msg,
            "; baselines at the iteration cap: {}",
            capped.join(", ")
        );
    }
    Ok(msg)
}

fn simplex_brute_force(v: &[f64]) -> Vec<f64> {
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

/// Accelerated projected gradient on the dual of
/// `min lam ||u||_1 + ||u - sigma||^2 / 2` over `||u|| <= r`.
fn l1_ball_dual_oracle(sigma: &[f64], lam: f64, r: f64) -> Vec<f64> {
    let n = sigma.len();
    let primal = |w: &[f64]| {
        project_ball(
            &DVector::from_iterator(n, sigma.iter().zip(w).map(|(s, w)| s - w)),
            r,
        )
    };
    let mut w = vec![0.0; n];
    let mut w_prev = w.clone();
    for it in 0..200_000 {
        let beta = it as f64 / (it as f64 + 3.0);
        let probe: Vec<f64> = w
            .iter()
            .zip(&w_prev)
            .map(|(a, b)| a + beta * (a - b))
            .collect();
        let u = primal(&probe);
        w_prev = w.clone();
        for i in 0..n {
            w[i] = (probe[i] + u[i]).clamp(-lam, lam);
        }
    }
    primal(&w).as_slice().to_vec()
}

/// Refining polar grid over the disk of radius `r`.
fn l1_ball_grid_oracle(sigma: &[f64], lam: f64, r: f64) -> Vec<f64> {
    let objective = |u: [f64; 2]| -> f64 {
        u.iter()
            .zip(sigma)
            .map(|(u, s)| lam * u.abs() + 0.5 * (u - s).powi(2))
            .sum()
    };
    let tau = std::f64::consts::TAU;
    let (mut rho_c, mut th_c, mut rho_half, mut th_half) = (r / 2.0, tau / 2.0, r / 2.0, tau / 2.0);
    let steps = 60;
    for _ in 0..60 {
        let mut best = (f64::INFINITY, rho_c, th_c);
        for i in 0..=steps {
            let rho = (rho_c - rho_half + 2.0 * rho_half * i as f64 / steps as f64).clamp(0.0, r);
            for j in 0..=steps {
                let th = th_c - th_half + 2.0 * th_half * j as f64 / steps as f64;
                let val = objective([rho * th.cos(), rho * th.sin()]);
                if val < best.0 {
                    best = (val, rho, th);
                }
            }
        }
        (rho_c, th_c) = (best.1, best.2);
        rho_half *= 0.5;
        th_half *= 0.5;
    }
    vec![rho_c * th_c.cos(), rho_c * th_c.sin()]
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn ac5_prox_oracles() -> Outcome {
    let mut rng = seeded_rng(505, 0);
    let mut simplex_worst: f64 = 0.0;
    for case in 0..200 {
        let n = 1 + case % 8;
        let scale = [0.1, 1.0, 5.0][case % 3];
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-scale..scale)).collect();
        let got = project_simplex(&v);
        let want = simplex_brute_force(&v);
        simplex_worst = simplex_worst.max(
            got.iter()
                .zip(&want)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
    }
    ensure(simplex_worst <= 1e-10, || {
        format!("simplex max error {simplex_worst:e}")
    })?;

    let mut ball_worst: f64 = 0.0;
    for case in 0..50 {
        let n = 2 + case % 2;
        let sigma: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..4.0)).collect();
        let lam = rng.random_range(0.0..1.5);
        let r = rng.random_range(0.2..3.0);
        let got = prox_l1_l2ball(&sigma, lam, r);
        let mut err = distance(&got, &l1_ball_dual_oracle(&sigma, lam, r));
        if n == 2 {
            err = err.max(distance(&got, &l1_ball_grid_oracle(&sigma, lam, r)));
        }
        ball_worst = ball_worst.max(err);
        ensure(err <= 1e-6, || {
            format!("l1 ball case {case}: sigma={sigma:?} lam={lam} r={r}: error {err:e}")
        })?;
    }
    Ok(format!("simplex 200 cases max error {simplex_worst:.1e}; l1 ball 50 cases max error {ball_worst:.1e}"))
}

fn worst_gradient_error(
    problem: &dyn Problem,
    points: impl Iterator<Item = Point>,
) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for z in points {
        worst = worst.max(gradient_relative_error(problem, &z).map_err(|e| e.to_string())?);
    }
    Ok(worst)
}

fn random_density_matrix(n: usize, rng: &mut impl Rng) -> Point {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let s = &a * a.transpose();
    let s = &s / s.trace();
    Point::from_column_slice(s.as_slice())
}

fn ac6_gradients() -> Outcome {
    let err = |e: acfista_core::Error| e.to_string();
    let svm = svm_oracle(generate_svm(500, 100, 0.05, 0.01, 50.0, 1).map_err(err)?).map_err(err)?;
    let mut rng = seeded_rng(606, 0);
    let svm_err =
        worst_gradient_error(&svm, (0..20).map(|_| uniform_in_ball(500, 50.0, &mut rng)))?;
    ensure(svm_err <= 1e-5, || format!("SVM error {svm_err:e}"))?;

    let qp_inst = QpInstance::calibrated(generate_qp(20, 60, 0.05, 1).map_err(err)?, 1e4, 1e2)
        .map_err(err)?;
    let qp = qp_oracle(qp_inst).map_err(err)?;
    let qp_err = worst_gradient_error(&qp, (0..20).map(|_| random_density_matrix(60, &mut rng)))?;
    ensure(qp_err <= 1e-5, || format!("QP error {qp_err:e}"))?;

    let ratings = generate_mc(40, 60, 5, 0.2, (1.0, 5.0), 1).map_err(err)?;
    let mc_inst = McInstance::with_scale_radius(ratings, 1.0, 2.0, 1.0, 5.0).map_err(err)?;
    let mc = mc_oracle(mc_inst.clone()).map_err(err)?;
    let mc_err = worst_gradient_error(&mc, (0..20).map(|s| mc_initial_point(&mc_inst, 100 + s)))?;
    ensure(mc_err <= 1e-4, || format!("MC error {mc_err:e}"))?;
    Ok(format!(
        "SVM 500 {svm_err:.1e}, QP 60x60 {qp_err:.1e}, MC 40x60 {mc_err:.1e}"
    ))
}

fn ac7_svm(battery: &Battery) -> Outcome {
    let mut parts = Vec::new();
    for solver in ["AF", "AF(R)"] {
        let run = battery.find("svm-desk", "svm", solver)?;
        let (res, diag) = (&run.result, &run.diagnostics);
        ensure(
            res.reason == TerminationReason::ToleranceMet && res.iterations <= 5000,
            || {
                format!(
                    "{solver}: {:?} after {} iterations",
                    res.reason, res.iterations
                )
            },
        )?;
        ensure(diag.bad_fraction <= 0.45, || {
            format!("{solver}: bad fraction {}", diag.bad_fraction)
        })?;
        ensure(diag.mean_resolvents_per_iteration <= 1.5, || {
            format!(
                "{solver}: {} resolvents per iteration",
                diag.mean_resolvents_per_iteration
            )
        })?;
        parts.push(format!(
            "{solver} {} iterations, bad {:.3}, {:.3} resolvents/iteration",
            res.iterations, diag.bad_fraction, diag.mean_resolvents_per_iteration
        ));
    }
    Ok(parts.join("; "))
}

fn ac8_qp(battery: &Battery) -> Outcome {
    let run = battery.find("qp-desk", "qp-m100", "AF")?;
    let (res, diag) = (&run.result, &run.diagnostics);
    ensure(
        res.reason == TerminationReason::ToleranceMet && res.iterations <= 5000,
        || format!("{:?} after {} iterations", res.reason, res.iterations),
    )?;
    let theta = diag.theta_bar.ok_or("no theta bar")?;
    let tau = diag.tau_bar.ok_or("no tau bar")?;
    ensure((0.4..=3.0).contains(&theta), || {
        format!("theta bar {theta}")
    })?;
    ensure(tau <= 4.0, || format!("tau bar {tau}"))?;
    Ok(format!(
        "{} iterations, theta bar {theta:.3}, tau bar {tau:.3}",
        res.iterations
    ))
}

fn ac9_mc(battery: &Battery) -> Outcome {
    let run = battery.find("mc-desk", "mc", "AF")?;
    let res = &run.result;
    ensure(
        res.reason == TerminationReason::ToleranceMet
            && res.iterations <= 3000
            && res.final_residual <= 5e-4,
        || {
            format!(
                "{:?} after {} iterations, residual {}",
                res.reason, res.iterations, res.final_residual
            )
        },
    )?;
    let bound = run.oracle.curvature().lipschitz;
    ensure((bound - 4.0).abs() <= 1e-12, || {
        format!("max(1, 2 mu kappa) = {bound}, expected 4")
    })?;
    let max_l = res
        .ledger
        .l_values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(max_l <= bound + 1e-6, || {
        format!("max L_k {max_l} > {bound}")
    })?;
    Ok(format!(
        "{} iterations, residual {:.2e}, max L_k {max_l:.4} <= {bound}",
        res.iterations, res.final_residual
    ))
}

fn ac10_dominance(battery: &Battery) -> Outcome {
    let af = battery.find("qp-desk", "qp-m100", "AF")?;
    let acg = battery.find("qp-desk", "qp-m100", "ACG")?;
    let (ra, rg) = (af.result.total_resolvents, acg.result.total_resolvents);
    ensure(ra < rg, || format!("AC-FISTA {ra} resolvents, AC-ACG {rg}"))?;
    let ledger = &af.result.ledger;
    let violations = ledger
        .c_values
        .iter()
        .zip(&ledger.c_tilde_values)
        .filter(|(c, ct)| ct < c)
        .count();
    ensure(violations == 0, || {
        format!("{violations} ledger entries with C_tilde < C")
    })?;
    Ok(format!(
        "AC-FISTA {ra} resolvents vs AC-ACG {rg}; C_tilde >= C on {} entries",
        ledger.len()
    ))
}

fn ac11_gamma_one(battery: &Battery) -> Outcome {
    let mut count = 0;
    for run in battery.runs.iter().filter(|r| r.experiment == "gamma-one") {
        let m_bar = run.oracle.curvature().upper;
        ensure(
            run.config.gamma == 1.0 && 0.9 * run.config.m_cap >= m_bar * (1.0 - 1e-15),
            || {
                format!(
                    "{}: setup does not satisfy gamma = 1, 0.9 M_cap >= {m_bar}",
                    run.name()
                )
            },
        )?;
        ensure(run.result.bad_count == 0, || {
            format!("{}: {} bad iterations", run.name(), run.result.bad_count)
        })?;
        count += 1;
    }
    ensure(count > 0, || "no gamma = 1 runs".into())?;
    Ok(format!("{count} runs, no bad iterations"))
}

fn ac12_monotone(battery: &Battery) -> Outcome {
    let (mut runs, mut steps) = (0, 0);
    for run in battery
        .runs
        .iter()
        .filter(|r| r.config.iterate_rule == IterateRule::Monotone)
    {
        let (state, _) = initial_state(run.oracle.as_ref(), &run.config, run.method, &run.z0)
            .map_err(|e| format!("{}: {e}", run.name()))?;
        let mut prev = state.phi_y;
        for r in run
            .result
            .trace
            .iter()
            .filter(|r| !r.terminal && !r.restarted)
        {
            ensure(r.phi <= prev + 1e-10, || {
                format!("{} k={}: phi {} after {prev}", run.name(), r.k, r.phi)
            })?;
            prev = r.phi;
            steps += 1;
        }
        runs += 1;
    }
    ensure(runs > 0, || "no monotone runs".into())?;
    Ok(format!("{runs} monotone runs, {steps} steps"))
}

fn collect_files(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n != "metadata.json") {
                let bytes = fs::read(&path).unwrap();
                files.push((path.strip_prefix(dir).unwrap().to_path_buf(), bytes));
            }
        }
    }
    files.sort();
    files
}

fn ac13_determinism() -> Outcome {
    let scratch = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for name in SHIPPED {
        let mut outputs = Vec::new();
        for pass in ["first", "second"] {
            let mut experiment =
                ExperimentConfig::load(&config_path(name)).map_err(|e| e.to_string())?;
            experiment.output_dir = scratch.path().join(pass).join(name);
            run_experiment(&experiment).map_err(|e| format!("{name}: {e:#}"))?;
            outputs.push(collect_files(&experiment.output_dir));
        }
        ensure(outputs[0] == outputs[1], || {
            format!("{name}: outputs differ between reruns")
        })?;
        ensure(
            outputs[0].iter().any(|(p, _)| p.ends_with("summary.csv")),
            || format!("{name}: no summary"),
        )?;
        compared += outputs[0].len();
    }
    Ok(format!(
        "{} configs rerun, {compared} trace and summary files identical",
        SHIPPED.len()
    ))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let start = Instant::now();
    let battery = Battery::build().map_err(|e| format!("battery failed: {e:#}"));
    let with_battery = |f: fn(&Battery) -> Outcome| -> Outcome {
        match &battery {
            Ok(b) => guarded(|| f(b)),
            Err(e) => Err(e.clone()),
        }
    };

    let results: Vec<(&str, Outcome)> = vec![
        ("recurrence identity", with_battery(ac1_recurrence)),
        ("theta bound", with_battery(ac2_theta_bound)),
        ("FISTA equivalence", guarded(ac3_fista_equivalence)),
        ("stationarity certificate", with_battery(ac4_certificates)),
        ("prox oracles", guarded(ac5_prox_oracles)),
        ("gradient checks", guarded(ac6_gradients)),
        ("desk SVM", with_battery(ac7_svm)),
        ("desk QP", with_battery(ac8_qp)),
        ("desk MC", with_battery(ac9_mc)),
        ("resolvent dominance", with_battery(ac10_dominance)),
        ("gamma = 1 all good", with_battery(ac11_gamma_one)),
        ("monotone descent", with_battery(ac12_monotone)),
        ("determinism", guarded(ac13_determinism)),
    ];

    let mut failed = 0;
    for (i, (title, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("AC-{:<2} PASS  {title}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("AC-{:<2} FAIL  {title}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
