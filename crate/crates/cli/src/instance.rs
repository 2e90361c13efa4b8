//! Instance generation for the `gen-instance` subcommand.

use std::collections::BTreeMap;

use acfista_core::problems::QpOmega;
use acfista_core::InstanceFile;
use anyhow::{bail, Result};

use crate::config::ProblemSpec;
use crate::experiment::build_instance;

/// Generator parameters; unset values take the desk-scale defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenParams {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub l: Option<usize>,
    pub rank: Option<usize>,
    pub density: Option<f64>,
    pub lambda: Option<f64>,
    pub r: Option<f64>,
    pub upper: Option<f64>,
    pub lower: Option<f64>,
    pub scale_min: Option<f64>,
    pub scale_max: Option<f64>,
    pub mu: Option<f64>,
    pub beta: Option<f64>,
    pub tau: Option<f64>,
}

pub const FAMILIES: [&str; 4] = ["svm", "qp", "mc", "quadratic"];

/// The problem spec that `family` with `params` denotes.
pub fn spec_for(family: &str, g: &GenParams) -> Result<ProblemSpec> {
    Ok(match family {
        "svm" => ProblemSpec::Svm {
            n: g.n.unwrap_or(500),
            p: g.p.unwrap_or(100),
            density: g.density.unwrap_or(0.05),
            lambda: g.lambda,
            r: g.r.unwrap_or(50.0),
        },
        "qp" => ProblemSpec::Qp {
            l: g.l.unwrap_or(20),
            n: g.n.unwrap_or(60),
            density: g.density.unwrap_or(0.05),
            upper: g.upper.unwrap_or(1e4),
            lower: g.lower.unwrap_or(1e2),
            omega: QpOmega::default(),
        },
        "mc" => ProblemSpec::McSynthetic {
            l: g.l.unwrap_or(80),
            n: g.n.unwrap_or(120),
            rank: g.rank.unwrap_or(5),
            density: g.density.unwrap_or(0.2),
            scale_min: g.scale_min.unwrap_or(1.0),
            scale_max: g.scale_max.unwrap_or(5.0),
            mu: g.mu.unwrap_or(1.0),
            beta: g.beta.unwrap_or(2.0),
            tau: g.tau.unwrap_or(1.0),
        },
        "quadratic" => ProblemSpec::Quadratic {
            dim: g.n.unwrap_or(10),
            min_curv: g.lower.unwrap_or(-1.0),
            max_curv: g.upper.unwrap_or(10.0),
            constraint_radius: g.r,
            omega_radius: g.r.unwrap_or(10.0),
        },
        other => bail!(
            "unknown family {other:?}; expected one of {}",
            FAMILIES.join(", ")
        ),
    })
}

/// Numeric parameters of `spec`, recorded in the instance file.
fn provenance(spec: &ProblemSpec) -> BTreeMap<String, f64> {
    let value = serde_json::to_value(spec).expect("spec serializes");
    value
        .as_object()
        .into_iter()
        .flatten()
        .filter_map(|(k, v)| v.as_f64().map(|x| (k.clone(), x)))
        .collect()
}

pub fn generate_instance_file(family: &str, params: &GenParams, seed: u64) -> Result<InstanceFile> {
    let spec = spec_for(family, params)?;
    let instance = build_instance(&spec, seed)?;
    Ok(InstanceFile::new(seed, provenance(&spec), instance))
}
