//! Experiment runners over problem files: τ-profiles, Main Criterion
//! checks and the GCD-bound pipeline, plus report emission.

pub mod criterion;
pub mod pipeline;
pub mod problem;
pub mod report;
pub mod tau;

pub use criterion::{run_main_criterion, CriterionReport, CriterionRow, Pigeonhole, TauEntry, Verdict};
pub use pipeline::{run_gcd_pipeline, GcdPipelineReport};
pub use problem::{ExperimentKind, Problem, ProblemFile};
pub use report::{emit_report, render, Format, PointList, Report};
pub use tau::{estimate_tau, run_tau_estimate, witness_ratio, TauProfile, TauRow, TauSettings};
