//! Problem families, their generators, and a serializable instance container.

mod mc;
mod qp;
mod quadratic;
mod ratings;
mod rng;
mod sparse;
mod svm;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub use mc::{generate_mc, mc_initial_point, mc_oracle, mc_radius, McInstance, McProblem};
pub use qp::{
    generate_qp, operator_norms, power_iteration, qp_calibrate, qp_initial_point, qp_oracle,
    QpData, QpInstance, QpOmega, QpProblem, POWER_MAX_ITER, POWER_TOL,
};
pub use quadratic::{generate_quadratic, QuadraticProblem};
pub use ratings::{load_ratings, parse_ratings, Observation, Ratings};
pub use rng::{seeded_rng, INSTANCE_STREAM, START_STREAM};
pub use sparse::{SparseSymmetric, SparseVector};
pub use svm::{
    generate_svm, svm_initial_point, svm_oracle, uniform_in_ball, SvmInstance, SvmProblem,
    SIGMOID_CURVATURE,
};

use crate::error::{Error, Result};
use crate::problem::{Point, Problem};
use crate::prox::project_ball;

/// Any generated or loaded instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Instance {
    Svm(SvmInstance),
    Qp(QpInstance),
    Mc(McInstance),
    Quadratic(QuadraticProblem),
}

impl Instance {
    pub fn family(&self) -> &'static str {
        match self {
            Instance::Svm(_) => "svm",
            Instance::Qp(_) => "qp",
            Instance::Mc(_) => "mc",
            Instance::Quadratic(_) => "quadratic",
        }
    }

    pub fn oracle(&self) -> Result<Box<dyn Problem>> {
        Ok(match self {
            Instance::Svm(i) => Box::new(svm_oracle(i.clone())?),
            Instance::Qp(i) => Box::new(qp_oracle(i.clone())?),
            Instance::Mc(i) => Box::new(mc_oracle(i.clone())?),
            Instance::Quadratic(q) => Box::new(q.clone()),
        })
    }

    /// Deterministic starting point for the family.
    pub fn initial_point(&self, seed: u64) -> Point {
        match self {
            Instance::Svm(i) => svm_initial_point(i, seed),
            Instance::Qp(i) => qp_initial_point(i.data.n),
            Instance::Mc(i) => mc_initial_point(i, seed),
            Instance::Quadratic(q) => {
                let mut rng = seeded_rng(seed, START_STREAM);
                let z = Point::from_iterator(
                    q.diag.len(),
                    (0..q.diag.len()).map(|_| StandardNormal.sample(&mut rng)),
                );
                project_ball(&z, q.constraint_radius.unwrap_or(q.omega_radius))
            }
        }
    }
}

pub const INSTANCE_FORMAT: &str = "acfista-instance";
pub const INSTANCE_VERSION: u32 = 1;

/// On-disk wrapper for an [`Instance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    /// Generator parameters, kept for provenance.
    #[serde(default)]
    pub params: std::collections::BTreeMap<String, f64>,
    pub instance: Instance,
}

impl InstanceFile {
    pub fn new(
        seed: u64,
        params: std::collections::BTreeMap<String, f64>,
        instance: Instance,
    ) -> Self {
        Self {
            format: INSTANCE_FORMAT.into(),
            version: INSTANCE_VERSION,
            seed,
            params,
            instance,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.format != INSTANCE_FORMAT || self.version != INSTANCE_VERSION {
            return Err(Error::invalid(format!(
                "unsupported instance format {} v{}",
                self.format, self.version
            )));
        }
        Ok(())
    }
}
