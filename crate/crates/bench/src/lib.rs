//! Experiment orchestration: the budget sweep, the MSE metric, results
//! files and the `rsfd-bench` command line.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod results;

pub use error::{BenchError, Result};
pub use experiment::{run_experiment, run_on_dataset, DatasetSource, ExperimentConfig, ExperimentResult};
pub use metrics::mse_avg;
pub use results::{summarize, SummaryRow};
