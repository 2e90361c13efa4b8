//! Accelerated composite gradient methods with adaptive curvature.
//!
//! The main entry point is [`run_ac_fista`], which minimizes `f + h` where
//! `f` is smooth (possibly nonconvex) and `h` has a cheap proximal map. The
//! step size is driven by an average of observed curvatures rather than by
//! a line search, so most iterations cost one resolvent.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod problem;
pub mod problems;
pub mod prox;
pub mod solver;
pub mod verify;

pub use config::{IterateRule, SolverConfig, TerminationMode};
pub use diagnostics::{diagnose, DiagnosticsReport};
pub use error::{Error, Result};
pub use problem::{evaluate_phi, smooth_eval, CurvatureTriple, Point, Problem};
pub use problems::{Instance, InstanceFile};
pub use solver::{
    run, run_ac_acg, run_ac_fista, run_fista_constant, CurvatureLedger, IterationRecord, Method,
    SolverResult, TerminationReason,
};
