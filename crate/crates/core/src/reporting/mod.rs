//! Experiment configs, result records and the acceptance grid.
//!
//! A run is a validated [`ExperimentConfig`] turned into a [`ResultRecord`]
//! by [`run`]; [`write_record`] persists it as `record.json` plus one CSV per
//! numeric series.

mod config;
mod record;
mod runner;
mod verify;

pub use config::{
    config_with_overrides, parse_config, render_config, ExperimentConfig, ExperimentKind, GridConfig, GridKindConfig,
    DEFAULT_REPLICATES, DEFAULT_SEED,
};
pub use record::{
    emit_plot_data, write_record, ClassifyReport, Outcome, ResultRecord, Series, LIBRARY_VERSION,
};
pub use runner::{
    rerun, run, DEFAULT_SCALING_TIMES, LAPLACE_ALPHAS, LAPLACE_LAMBDAS, LAPLACE_LAMBDAS_SINGLE_ALPHA,
};
pub use verify::{check_reproducibility, verify_all, CriterionResult, ReproducibilityCheck, VerifyPlan, VerifyReport};
