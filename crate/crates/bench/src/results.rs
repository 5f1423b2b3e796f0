//! Flat CSV files: one row per cell, and the per-group aggregate.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{BenchError, Result};
use crate::experiment::ExperimentResult;

pub const RESULTS_HEADER: [&str; 7] = ["dataset", "solution", "epsilon", "run", "mse_avg", "wall_time_s", "seed"];
pub const SUMMARY_HEADER: [&str; 6] = ["dataset", "solution", "epsilon", "mse_mean", "mse_std", "runs"];

/// `x` with 9 significant digits in positional notation.
pub fn format_epsilon(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    // The exponent after rounding to 9 significant digits, so carries are accounted for.
    let sci = format!("{x:.8e}");
    let exponent: i32 = sci[sci.find('e').expect("scientific notation") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (8 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_results<W: Write>(out: W, rows: &[ExperimentResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER).map_err(csv_io)?;
    for r in rows {
        w.write_record([
            r.dataset.clone(),
            r.solution.clone(),
            format_epsilon(r.epsilon),
            r.run.to_string(),
            r.mse_avg.to_string(),
            format!("{:.6}", r.wall_time_s),
            r.seed.to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_results_file(path: &Path, rows: &[ExperimentResult]) -> Result<()> {
    write_results(std::fs::File::create(path)?, rows)
}

pub fn read_results<R: Read>(input: R, name: &str) -> Result<Vec<ExperimentResult>> {
    let bad = |line: u64, reason: String| BenchError::Results {
        path: name.to_string(),
        reason: format!("line {line}: {reason}"),
    };
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if header.iter().ne(RESULTS_HEADER) {
        return Err(bad(1, format!("expected header {}", RESULTS_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| &record[i];
        let num = |i: usize| -> Result<f64> {
            field(i)
                .parse()
                .map_err(|_| bad(line, format!("{} is not a number", RESULTS_HEADER[i])))
        };
        let int = |i: usize| -> Result<u64> {
            field(i)
                .parse()
                .map_err(|_| bad(line, format!("{} is not an integer", RESULTS_HEADER[i])))
        };
        rows.push(ExperimentResult {
            dataset: field(0).to_string(),
            solution: field(1).to_string(),
            epsilon: num(2)?,
            run: int(3)? as usize,
            mse_avg: num(4)?,
            wall_time_s: num(5)?,
            seed: int(6)?,
        });
    }
    Ok(rows)
}

pub fn read_results_file(path: &Path) -> Result<Vec<ExperimentResult>> {
    let file = std::fs::File::open(path).map_err(|e| BenchError::Results {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    read_results(file, &path.display().to_string())
}

fn csv_io(e: csv::Error) -> BenchError {
    BenchError::Io(std::io::Error::other(e))
}

/// Mean and dispersion of `mse_avg` over the runs of one cell group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub solution: String,
    pub epsilon: f64,
    pub mse_mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub mse_std: f64,
    pub runs: usize,
}

/// Groups by `(dataset, solution, ε)` in order of first appearance.
///
/// ε values are grouped by their serialized form, so rows read back from a
/// file land in the same group as the in-memory rows that produced them.
pub fn summarize(rows: &[ExperimentResult]) -> Vec<SummaryRow> {
    // ((dataset, solution, serialized ε), ε, mse values)
    type Group = ((String, String, String), f64, Vec<f64>);
    let mut groups: Vec<Group> = Vec::new();
    for r in rows {
        let key = (r.dataset.clone(), r.solution.clone(), format_epsilon(r.epsilon));
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.2.push(r.mse_avg),
            None => groups.push((key, r.epsilon, vec![r.mse_avg])),
        }
    }
    groups
        .into_iter()
        .map(|((dataset, solution, _), epsilon, values)| {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let std = if values.len() > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            SummaryRow {
                dataset,
                solution,
                epsilon,
                mse_mean: mean,
                mse_std: std,
                runs: values.len(),
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER).map_err(csv_io)?;
    for r in rows {
        w.write_record([
            r.dataset.clone(),
            r.solution.clone(),
            format_epsilon(r.epsilon),
            r.mse_mean.to_string(),
            r.mse_std.to_string(),
            r.runs.to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_file(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_summary(std::fs::File::create(path)?, rows)
}
