//! Builds instances, runs every solver on a shared start, and writes results.

use std::fs;
use std::path::{Path, PathBuf};

use acfista_core::diagnostics::{diagnose, DiagnosticsReport};
use acfista_core::problems::{
    generate_mc, generate_qp, generate_quadratic, generate_svm, load_ratings, McInstance,
    QpInstance,
};
use acfista_core::solver::{run, Method};
use acfista_core::{Instance, InstanceFile, Point, SolverConfig, SolverResult};
use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::{ExperimentConfig, MethodName, ProblemSpec, SolverSpec};
use crate::output::{emit_summary_table, emit_trace, SummaryRow};

/// Builds the instance described by `spec`.
pub fn build_instance(spec: &ProblemSpec, seed: u64) -> Result<Instance> {
    Ok(match spec {
        ProblemSpec::Svm {
            n,
            p,
            density,
            lambda,
            r,
        } => {
            let lambda = lambda.unwrap_or(1.0 / *p as f64);
            Instance::Svm(generate_svm(*n, *p, *density, lambda, *r, seed)?)
        }
        ProblemSpec::Qp {
            l,
            n,
            density,
            upper,
            lower,
            omega,
        } => {
            let mut inst =
                QpInstance::calibrated(generate_qp(*l, *n, *density, seed)?, *upper, *lower)?;
            inst.omega = *omega;
            Instance::Qp(inst)
        }
        ProblemSpec::McSynthetic {
            l,
            n,
            rank,
            density,
            scale_min,
            scale_max,
            mu,
            beta,
            tau,
        } => {
            let ratings = generate_mc(*l, *n, *rank, *density, (*scale_min, *scale_max), seed)?;
            Instance::Mc(McInstance::with_scale_radius(
                ratings, *mu, *beta, *tau, *scale_max,
            )?)
        }
        ProblemSpec::McFile {
            path,
            mu,
            beta,
            tau,
            scale_max,
        } => {
            let ratings = load_ratings(path)
                .with_context(|| format!("loading ratings {}", path.display()))?;
            Instance::Mc(McInstance::with_scale_radius(
                ratings, *mu, *beta, *tau, *scale_max,
            )?)
        }
        ProblemSpec::Quadratic {
            dim,
            min_curv,
            max_curv,
            constraint_radius,
            omega_radius,
        } => Instance::Quadratic(generate_quadratic(
            *dim,
            *min_curv,
            *max_curv,
            *constraint_radius,
            *omega_radius,
            seed,
        )?),
        ProblemSpec::Instance { path } => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file: InstanceFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            file.check()?;
            file.instance
        }
    })
}

/// Solver configuration and method for one spec on one problem.
pub fn solver_setup(
    experiment: &ExperimentConfig,
    spec: &SolverSpec,
    upper: f64,
    lipschitz: f64,
    seed: u64,
) -> (SolverConfig, Method) {
    let mut config = SolverConfig::practical(upper.max(f64::MIN_POSITIVE) / 0.9);
    config.seed = seed;
    config.trace_stride = experiment.trace_stride;
    config.restart = spec.method == MethodName::AcFistaRestart;
    experiment
        .defaults
        .merged(&spec.overrides)
        .apply(&mut config);
    let method = match spec.method {
        MethodName::AcFista | MethodName::AcFistaRestart => Method::AcFista,
        MethodName::AcAcg => Method::AcAcg,
        MethodName::FistaConstant => Method::ConstantFista {
            m: spec.m_const.unwrap_or(lipschitz / 0.9),
        },
    };
    (config, method)
}

/// One solver run with its diagnostics.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub problem: String,
    pub solver: String,
    pub method: MethodName,
    pub result: SolverResult,
    pub diagnostics: DiagnosticsReport,
}

impl RunOutput {
    pub fn summary_row(&self) -> SummaryRow {
        SummaryRow {
            problem: self.problem.clone(),
            method: self.solver.clone(),
            iterations: self.result.iterations,
            resolvents: self.result.total_resolvents,
            wall_seconds: self.result.wall_seconds,
            final_phi: self.result.final_phi,
            final_residual: self.result.final_residual,
            theta_bar: self.diagnostics.theta_bar,
            tau_bar: self.diagnostics.tau_bar,
            bad_fraction: self.diagnostics.bad_fraction,
            reason: self.result.reason.as_str().into(),
        }
    }
}

/// Result of an experiment, with the files that were written.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub runs: Vec<RunOutput>,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct ReportRun<'a> {
    problem: &'a str,
    solver: &'a str,
    method: MethodName,
    summary: SummaryRow,
    diagnostics: &'a DiagnosticsReport,
}

#[derive(Serialize)]
struct Report<'a> {
    name: &'a str,
    seed: u64,
    runs: Vec<ReportRun<'a>>,
}

#[derive(Serialize)]
struct MetadataRun<'a> {
    problem: &'a str,
    solver: &'a str,
    wall_seconds: f64,
}

#[derive(Serialize)]
struct Metadata<'a> {
    name: &'a str,
    version: &'static str,
    started_unix_seconds: u64,
    runs: Vec<MetadataRun<'a>>,
}

/// Runs every problem and solver of `experiment` without writing files.
pub fn run_all(experiment: &ExperimentConfig) -> Result<Vec<RunOutput>> {
    experiment.validate()?;
    let mut runs = Vec::new();
    for index in 0..experiment.problems.len() {
        let label = experiment.problem_label(index);
        let seed = experiment.problem_seed(index);
        let instance = build_instance(&experiment.problems[index].spec, seed)
            .with_context(|| format!("building problem {label:?}"))?;
        let oracle = instance
            .oracle()
            .with_context(|| format!("building oracle for {label:?}"))?;
        let curvature = oracle.curvature();
        let z0: Point = instance.initial_point(seed);
        for spec in &experiment.solvers {
            let solver = spec.label();
            let (config, method) =
                solver_setup(experiment, spec, curvature.upper, curvature.lipschitz, seed);
            let result = run(oracle.as_ref(), &config, method, &z0)
                .with_context(|| format!("solver {solver:?} on problem {label:?} failed"))?;
            let diagnostics = diagnose(&result);
            runs.push(RunOutput {
                problem: label.clone(),
                solver,
                method: spec.method,
                result,
                diagnostics,
            });
        }
    }
    Ok(runs)
}

fn write(path: PathBuf, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    files.push(path);
    Ok(())
}

/// Runs `experiment` and writes traces, `summary.csv`, `report.json` and
/// `metadata.json` under its output directory.
pub fn run_experiment(experiment: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let started = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let runs = run_all(experiment)?;
    let out: &Path = &experiment.output_dir;
    let timings = experiment.timings_in_csv;
    let mut files = Vec::new();

    for r in &runs {
        let path = out.join(&r.problem).join(format!("{}.trace.csv", r.solver));
        write(path, &emit_trace(&r.result.trace, timings), &mut files)?;
    }
    let rows: Vec<SummaryRow> = runs.iter().map(RunOutput::summary_row).collect();
    write(
        out.join("summary.csv"),
        &emit_summary_table(&rows, timings)?,
        &mut files,
    )?;

    let report = Report {
        name: &experiment.name,
        seed: experiment.seed,
        runs: runs
            .iter()
            .zip(&rows)
            .map(|(r, row)| ReportRun {
                problem: &r.problem,
                solver: &r.solver,
                method: r.method,
                summary: row.clone(),
                diagnostics: &r.diagnostics,
            })
            .collect(),
    };
    write(
        out.join("report.json"),
        &serde_json::to_string_pretty(&report)?,
        &mut files,
    )?;

    let metadata = Metadata {
        name: &experiment.name,
        version: env!("CARGO_PKG_VERSION"),
        started_unix_seconds: started,
        runs: runs
            .iter()
            .map(|r| MetadataRun {
                problem: &r.problem,
                solver: &r.solver,
                wall_seconds: r.result.wall_seconds,
            })
            .collect(),
    };
    write(
        out.join("metadata.json"),
        &serde_json::to_string_pretty(&metadata)?,
        &mut files,
    )?;
    Ok(ExperimentOutcome { runs, files })
}
