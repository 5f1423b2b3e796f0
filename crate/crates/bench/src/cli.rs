use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rsfd_core::audit::{self, Neighboring};
use rsfd_core::solution;
use rsfd_core::AttributeSchema;

use crate::error::{BenchError, Result};
use crate::experiment::{run_experiment, DatasetSource, ExperimentConfig};
use crate::results;

#[derive(Debug, Parser)]
#[command(name = "rsfd-bench", version, about = "Frequency estimation experiments under local differential privacy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep solutions x budgets x runs and write one CSV row per cell.
    Run(RunArgs),
    /// Exact privacy-loss ratios of a solution on a small domain.
    Audit(AuditArgs),
    /// Aggregate a results file into mean and std per (dataset, solution, epsilon).
    Summarize(SummarizeArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Categorical CSV file.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    dataset: Option<PathBuf>,

    /// Loader settings for a known dataset (nursery, adult, ms-fimu, census-income).
    #[arg(long, requires = "dataset")]
    preset: Option<String>,

    /// Columns to keep, comma separated.
    #[arg(long, requires = "dataset", value_delimiter = ',')]
    columns: Option<Vec<String>>,

    /// Uniform synthetic data as `n,d,kspec`, e.g. `50000,5,10x5` or `1000,3,2,4,8`.
    #[arg(long)]
    synthetic: Option<String>,

    /// Solutions, comma separated. Defaults to all of them.
    #[arg(long, value_delimiter = ',')]
    solutions: Option<Vec<String>>,

    /// Budgets: a list such as `0.5,1,ln3` or a range `ln2..ln7`.
    #[arg(long, default_value = "ln2..ln7")]
    eps: String,

    #[arg(long, default_value_t = 100)]
    runs: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    #[arg(long, default_value = "results.csv")]
    out: PathBuf,

    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,

    /// Write 0 in wall_time_s so that reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NeighboringArg {
    OneAttr,
    Any,
    Both,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long)]
    protocol: String,

    #[arg(long)]
    d: usize,

    /// Cardinalities, comma separated; a single value applies to every attribute.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,

    #[arg(long)]
    eps: String,

    #[arg(long, value_enum, default_value_t = NeighboringArg::Both)]
    neighboring: NeighboringArg,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    #[arg(long = "in")]
    input: PathBuf,

    #[arg(long)]
    out: PathBuf,
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args, stdout),
        Command::Audit(args) => audit_cmd(args, stdout),
        Command::Summarize(args) => summarize(args, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn usage(msg: impl Into<String>) -> BenchError {
    BenchError::Usage(msg.into())
}

fn parse_budget(token: &str) -> Result<f64> {
    let token = token.trim();
    let value = match token.strip_prefix("ln") {
        Some(arg) => arg
            .trim()
            .parse::<f64>()
            .map(f64::ln)
            .map_err(|_| usage(format!("invalid budget `{token}`")))?,
        None => token
            .parse::<f64>()
            .map_err(|_| usage(format!("invalid budget `{token}`")))?,
    };
    if !(value > 0.0 && value.is_finite()) {
        return Err(usage(format!("privacy budget must be positive and finite, got `{token}`")));
    }
    Ok(value)
}

/// `ln2..ln7` expands to ln 2, ln 3, ..., ln 7; anything else is a comma list.
pub fn parse_epsilons(spec: &str) -> Result<Vec<f64>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let bound = |s: &str| -> Result<u64> {
            s.trim()
                .strip_prefix("ln")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| usage(format!("range bounds must look like `ln2`, got `{s}`")))
        };
        let (lo, hi) = (bound(lo)?, bound(hi)?);
        if lo < 2 || hi < lo {
            return Err(usage(format!("empty or non-positive budget range `{spec}`")));
        }
        return Ok((lo..=hi).map(|x| (x as f64).ln()).collect());
    }
    spec.split(',').map(parse_budget).collect()
}

/// `kspec` items are `k` or `kxm` (k repeated m times).
pub fn parse_synthetic(spec: &str) -> Result<(usize, Vec<usize>)> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() < 3 {
        return Err(usage(format!("--synthetic expects n,d,kspec, got `{spec}`")));
    }
    let int = |s: &str| -> Result<usize> { s.parse().map_err(|_| usage(format!("`{s}` is not a count"))) };
    let n = int(parts[0])?;
    let d = int(parts[1])?;
    if n == 0 {
        return Err(usage("--synthetic needs at least one user"));
    }
    let mut ks = Vec::new();
    for item in &parts[2..] {
        match item.split_once('x') {
            Some((k, m)) => ks.extend(std::iter::repeat_n(int(k)?, int(m)?)),
            None => ks.push(int(item)?),
        }
    }
    if ks.len() == 1 && d > 1 {
        ks = vec![ks[0]; d];
    }
    if ks.len() != d {
        return Err(usage(format!("kspec lists {} cardinalities but d = {d}", ks.len())));
    }
    AttributeSchema::from_cardinalities(&ks).map_err(|e| usage(e.to_string()))?;
    Ok((n, ks))
}

fn run(args: RunArgs, stdout: &mut dyn Write) -> Result<()> {
    let epsilons = parse_epsilons(&args.eps)?;
    let dataset = match (&args.dataset, &args.synthetic) {
        (Some(path), None) => DatasetSource::Csv {
            path: path.clone(),
            preset: args.preset.clone(),
            columns: args.columns.clone(),
        },
        (None, Some(spec)) => {
            let (n, cardinalities) = parse_synthetic(spec)?;
            DatasetSource::Synthetic { n, cardinalities }
        }
        _ => return Err(usage("exactly one of --dataset and --synthetic is required")),
    };
    let config = ExperimentConfig {
        dataset,
        solutions: args
            .solutions
            .unwrap_or_else(|| solution::names().map(String::from).collect()),
        epsilons,
        runs: args.runs,
        seed: args.seed,
        workers: args.workers,
        timing: !args.no_timing,
        out: Some(args.out.clone()),
    };
    let rows = run_experiment(&config)?;
    results::write_results_file(&args.out, &rows)?;
    writeln!(stdout, "wrote {} rows to {}", rows.len(), args.out.display())?;
    Ok(())
}

fn audit_cmd(args: AuditArgs, stdout: &mut dyn Write) -> Result<()> {
    let epsilon = parse_budget(&args.eps)?;
    if args.d == 0 {
        return Err(usage("--d must be at least 1"));
    }
    let ks = match args.k.len() {
        1 => vec![args.k[0]; args.d],
        n if n == args.d => args.k.clone(),
        n => return Err(usage(format!("--k lists {n} cardinalities but --d is {}", args.d))),
    };
    let schema = AttributeSchema::from_cardinalities(&ks).map_err(|e| usage(e.to_string()))?;
    let table = audit::enumerate_channel(&args.protocol, &schema, epsilon).map_err(|e| usage(e.to_string()))?;
    writeln!(
        stdout,
        "protocol={} d={} k={:?} eps={} outputs={}",
        args.protocol,
        args.d,
        ks,
        epsilon,
        table.outputs().len()
    )?;
    let mut print = |label: &str, n: Neighboring| -> Result<()> {
        let bound = audit::max_ratio(&table, n);
        write!(stdout, "{label} max ratio: {:.9} (eps {:.9})", bound.ratio, bound.ratio.ln())?;
        if let Some(w) = bound.witness {
            write!(
                stdout,
                "  witness: {:?} vs {:?} -> {:?}",
                w.numerator_input.values(),
                w.denominator_input.values(),
                w.output
            )?;
        }
        writeln!(stdout)?;
        Ok(())
    };
    if matches!(args.neighboring, NeighboringArg::OneAttr | NeighboringArg::Both) {
        print("one-attribute", Neighboring::OneAttribute)?;
    }
    if matches!(args.neighboring, NeighboringArg::Any | NeighboringArg::Both) {
        print("any-pair", Neighboring::Any)?;
    }
    Ok(())
}

fn summarize(args: SummarizeArgs, stdout: &mut dyn Write) -> Result<()> {
    let rows = results::read_results_file(&args.input)?;
    let summary = results::summarize(&rows);
    results::write_summary_file(&args.out, &summary)?;
    writeln!(stdout, "wrote {} groups to {}", summary.len(), args.out.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_specs() {
        let grid = parse_epsilons("ln2..ln7").unwrap();
        assert_eq!(grid.len(), 6);
        assert_eq!(grid[0], 2f64.ln());
        assert_eq!(grid[5], 7f64.ln());
        assert_eq!(parse_epsilons("0.5, 1,ln3").unwrap(), vec![0.5, 1.0, 3f64.ln()]);
        assert!(parse_epsilons("0").is_err());
        assert!(parse_epsilons("ln1").is_err());
        assert!(parse_epsilons("ln7..ln2").is_err());
        assert!(parse_epsilons("2..7").is_err());
        assert!(parse_epsilons("abc").is_err());
    }

    #[test]
    fn synthetic_specs() {
        assert_eq!(parse_synthetic("50000,5,10x5").unwrap(), (50000, vec![10; 5]));
        assert_eq!(parse_synthetic("10,4,10x2,20x2").unwrap(), (10, vec![10, 10, 20, 20]));
        assert_eq!(parse_synthetic("10,3,2,3,4").unwrap(), (10, vec![2, 3, 4]));
        assert_eq!(parse_synthetic("10,3,7").unwrap(), (10, vec![7; 3]));
        assert!(parse_synthetic("10,3,2x2").is_err());
        assert!(parse_synthetic("10,2,1x2").is_err());
        assert!(parse_synthetic("0,1,2").is_err());
        assert!(parse_synthetic("10,2").is_err());
    }
}
