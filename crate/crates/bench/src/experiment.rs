use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use rsfd_core::data::{self, Dataset, LoadOptions};
use rsfd_core::solution::{self, simulate_counts};
use rsfd_core::{AttributeSchema, FrequencyTable, RandomSource};

use crate::error::{BenchError, Result};
use crate::metrics::mse_avg;

/// Where the population comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    /// `n` users with i.i.d. uniform values.
    Synthetic { n: usize, cardinalities: Vec<usize> },
    /// A categorical CSV, optionally read with a named preset's settings.
    Csv {
        path: PathBuf,
        preset: Option<String>,
        columns: Option<Vec<String>>,
    },
}

impl DatasetSource {
    /// Identifier written to the `dataset` column.
    pub fn id(&self) -> String {
        match self {
            DatasetSource::Synthetic { n, cardinalities } => {
                format!("synthetic-n{n}-d{}", cardinalities.len())
            }
            DatasetSource::Csv { path, preset, .. } => preset.clone().unwrap_or_else(|| {
                path.file_stem()
                    .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
            }),
        }
    }

    /// Materializes the population. Synthetic data is drawn from `seed`.
    pub fn load(&self, seed: u64) -> Result<Dataset> {
        match self {
            DatasetSource::Synthetic { n, cardinalities } => {
                let schema = AttributeSchema::from_cardinalities(cardinalities)
                    .map_err(|e| BenchError::Usage(format!("synthetic schema: {e}")))?;
                Ok(data::gen_uniform(*n, &schema, seed))
            }
            DatasetSource::Csv {
                path,
                preset,
                columns,
            } => {
                let mut options = match preset {
                    Some(name) => data::preset(name)
                        .ok_or_else(|| BenchError::Usage(format!("unknown dataset preset `{name}`")))?
                        .options(),
                    None => LoadOptions::default(),
                };
                if columns.is_some() {
                    options.columns = columns.clone();
                }
                Ok(data::load_csv(path, &options)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub solutions: Vec<String>,
    pub epsilons: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    /// Record per-cell wall time. Off makes results files reproducible byte for byte.
    pub timing: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(BenchError::Usage("runs must be at least 1".into()));
        }
        if self.solutions.is_empty() {
            return Err(BenchError::Usage("no solutions selected".into()));
        }
        for s in &self.solutions {
            solution::get(s).map_err(|e| BenchError::Usage(e.to_string()))?;
        }
        if self.epsilons.is_empty() {
            return Err(BenchError::Usage("no privacy budgets given".into()));
        }
        for &e in &self.epsilons {
            if !(e > 0.0 && e.is_finite()) {
                return Err(BenchError::Usage(format!(
                    "privacy budget must be positive and finite, got {e}"
                )));
            }
        }
        if self.epsilons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::Usage("privacy budgets must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// One row of the results file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub dataset: String,
    pub solution: String,
    pub epsilon: f64,
    pub run: usize,
    pub mse_avg: f64,
    pub wall_time_s: f64,
    pub seed: u64,
}

/// Loads the dataset and sweeps every `(solution, ε, run)` cell.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentResult>> {
    config.validate()?;
    let dataset = config.dataset.load(config.seed)?;
    run_on_dataset(&config.dataset.id(), &dataset, config)
}

/// Sweeps the grid over an already loaded population.
///
/// Cell `(s, e, r)` draws user `u` from substream `[s, e, r, u]` of the
/// seed, where `s` is the solution's position in the registry, so neither
/// the worker count nor the order of `config.solutions` changes any number.
pub fn run_on_dataset(id: &str, dataset: &Dataset, config: &ExperimentConfig) -> Result<Vec<ExperimentResult>> {
    config.validate()?;
    let truth = data::true_frequencies(dataset);

    let mut solutions: Vec<(usize, &str)> = config
        .solutions
        .iter()
        .map(|s| (solution::canonical_index(s).expect("validated"), s.as_str()))
        .collect();
    solutions.sort_unstable();
    solutions.dedup();

    let cells: Vec<(usize, &str, usize, f64, usize)> = solutions
        .iter()
        .flat_map(|&(s, name)| {
            config.epsilons.iter().enumerate().flat_map(move |(e, &eps)| {
                (0..config.runs).map(move |r| (s, name, e, eps, r))
            })
        })
        .collect();

    let root = RandomSource::new(config.seed);
    let run_cell = |&(s, name, e, eps, r): &(usize, &str, usize, f64, usize)| {
        let started = Instant::now();
        let source = root.derive(&[s as u64, e as u64, r as u64]);
        let cell = || -> Result<f64> {
            let protocol = solution::get(name)?.prepare(dataset.schema(), eps)?;
            let counts = simulate_counts(protocol.as_ref(), dataset.records(), &source);
            let estimate = protocol.estimate(&counts)?;
            log_absent(&estimate, name, eps, r);
            mse_avg(&truth, &estimate)
        };
        let mse = cell().map_err(|err| BenchError::Cell {
            solution: name.to_string(),
            epsilon: eps,
            run: r,
            source: Box::new(err),
        })?;
        Ok(ExperimentResult {
            dataset: id.to_string(),
            solution: name.to_string(),
            epsilon: eps,
            run: r,
            mse_avg: mse,
            wall_time_s: if config.timing {
                started.elapsed().as_secs_f64()
            } else {
                0.0
            },
            seed: config.seed,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| BenchError::Usage(format!("worker pool: {e}")))?;
    // `collect` keeps cell order, so rows come out canonically sorted.
    pool.install(|| cells.par_iter().map(run_cell).collect())
}

fn log_absent(estimate: &FrequencyTable, solution: &str, epsilon: f64, run: usize) {
    let absent = estimate.absent_count();
    if absent > 0 {
        log::warn!("{solution} epsilon={epsilon} run={run}: {absent} attribute(s) received no reports and were excluded");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(workers: usize) -> ExperimentConfig {
        ExperimentConfig {
            dataset: DatasetSource::Synthetic {
                n: 2000,
                cardinalities: vec![4, 3],
            },
            solutions: vec!["rsfd-adp".into(), "spl-adp".into()],
            epsilons: vec![0.5, 2.0],
            runs: 3,
            seed: 9,
            workers,
            timing: false,
            out: None,
        }
    }

    #[test]
    fn rows_are_canonically_ordered() {
        let rows = run_experiment(&config(1)).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        assert_eq!(rows[0].solution, "spl-adp");
        assert_eq!(rows[11].solution, "rsfd-adp");
        assert_eq!((rows[4].epsilon, rows[4].run), (2.0, 1));
        assert!(rows.iter().all(|r| r.mse_avg >= 0.0 && r.wall_time_s == 0.0));
        assert_eq!(rows[0].dataset, "synthetic-n2000-d2");
    }

    #[test]
    fn worker_count_does_not_change_results() {
        assert_eq!(run_experiment(&config(1)).unwrap(), run_experiment(&config(4)).unwrap());
    }

    #[test]
    fn solution_order_does_not_change_results() {
        let mut c = config(1);
        let a = run_experiment(&c).unwrap();
        c.solutions.reverse();
        assert_eq!(a, run_experiment(&c).unwrap());
    }

    #[test]
    fn invalid_configs() {
        let mut c = config(1);
        c.epsilons = vec![1.0, 0.5];
        assert!(matches!(c.validate(), Err(BenchError::Usage(_))));
        c.epsilons = vec![0.0];
        assert!(matches!(c.validate(), Err(BenchError::Usage(_))));
        c = config(1);
        c.runs = 0;
        assert!(matches!(c.validate(), Err(BenchError::Usage(_))));
        c = config(1);
        c.solutions = vec!["olh".into()];
        assert!(matches!(c.validate(), Err(BenchError::Usage(_))));
    }
}
