//! Monte Carlo experiments, file formats and the command-line front end for
//! the `rsfr-core` radar model.

pub mod analysis;
pub mod ccdf;
pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod rates;
pub mod spec;
mod trials;

pub use analysis::{bound_table, run_analysis, AnalysisReport, BoundRow, CodeSource};
pub use ccdf::{run_ccdf_experiment, CcdfPoint, CcdfTable, Quantity};
pub use config::{run_recover, RecoverConfig, RecoverOutput};
pub use error::{Error, Result};
pub use rates::{run_exact_rate_experiment, run_hit_rate_experiment, MetricName, MetricsRow};
pub use spec::{ExperimentKind, ExperimentSpec, ModeSpec, Scale};

pub use rsfr_core;
