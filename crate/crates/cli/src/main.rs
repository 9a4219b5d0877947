use std::path::PathBuf;
use std::process::ExitCode;

use alstop::corpus::synth::SyntheticConfig;
use alstop::corpus::DEFAULT_MIN_COUNT;
use alstop_cli::run::print;
use alstop_cli::{cmd_replay, cmd_report, cmd_run, cmd_sweep, prepare, ExperimentSpec, Format, PrepareRequest};
use anyhow::Result;
use clap::{Args, Parser, Subcommand};

/// Simulated pool-based active learning with stopping criteria.
#[derive(Parser)]
#[command(name = "alstop", version)]
struct Cli {
    /// Worker threads for folds (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Featurize a raw corpus into per-fold sparse files and a fold manifest.
    Prepare(PrepareArgs),
    /// Run active learning on every fold; write traces, summary, plots and a manifest.
    Run(RunArgs),
    /// Vary one stopping parameter (intensity, longevity or stop-set size).
    Sweep(SweepArgs),
    /// Recompute the summary and plots from trace CSVs.
    Report(ReportArgs),
    /// Rerun the experiment recorded in a manifest and verify every output hash.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct PrepareArgs {
    /// Raw corpus (directory per class, or an svmlight file).
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// textdir, svmlight or synthetic.
    #[arg(long, default_value = "textdir")]
    layout: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Positive class directory; other classes are negative.
    #[arg(long)]
    positive: Option<String>,
    /// Minimum occurrences for a term to become a feature.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    min_count: usize,
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// TOML experiment file (or a run manifest); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset path; omit with --format synthetic.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// auto, svmlight, textdir, prepared or synthetic.
    #[arg(long)]
    format: Option<Format>,
    /// Positive class for directory corpora.
    #[arg(long)]
    positive: Option<String>,
    #[arg(long)]
    min_count: Option<usize>,
    #[arg(long)]
    folds: Option<usize>,
    /// Master seed; every other seed is derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// svm or maxent.
    #[arg(long)]
    learner: Option<String>,
    /// Comma-separated: sp, v2008, sc2000, zwh2008, ls2008, minerr.
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<String>>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    seed_size: Option<usize>,
    /// SP intensity (mean kappa needed to stop).
    #[arg(long)]
    kappa_cutoff: Option<f64>,
    /// SP longevity (number of kappa values averaged).
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    stop_set_size: Option<usize>,
    /// Stop querying after this many batches.
    #[arg(long, alias = "halt-after")]
    max_iterations: Option<usize>,
    /// SVM cost C.
    #[arg(long)]
    cost: Option<f64>,
    /// Maxent L2 strength.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Train every SVM from scratch instead of from the previous solution.
    #[arg(long)]
    cold_start: bool,
    /// Confidence level of the significance tests.
    #[arg(long)]
    confidence: Option<f64>,
    /// Also write every model's stop-set predictions.
    #[arg(long)]
    keep_predictions: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated SP intensities, replayed over stored traces.
    #[arg(long, value_delimiter = ',')]
    sweep_intensity: Option<Vec<f64>>,
    /// Comma-separated SP window lengths, replayed over stored traces.
    #[arg(long, value_delimiter = ',')]
    sweep_longevity: Option<Vec<usize>>,
    /// Comma-separated stop-set sizes, one fresh run each.
    #[arg(long, value_delimiter = ',')]
    sweep_stop_set_size: Option<Vec<usize>>,
}

#[derive(Args)]
struct ReportArgs {
    /// Run directory or directory of fold_XX.csv traces.
    #[arg(long)]
    traces: PathBuf,
    /// Where to write the summary and plots (default: the traces directory).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
}

#[derive(Args)]
struct ReplayArgs {
    manifest: PathBuf,
    /// Output directory of the rerun (default: `replay` next to the manifest).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn spec(&self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::load(path)?,
            None => ExperimentSpec::default(),
        };
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = &self.$field {
                    spec.$field = v.clone();
                }
            };
            ($field:ident, some) => {
                if let Some(v) = &self.$field {
                    spec.$field = Some(v.clone());
                }
            };
        }
        set!(dataset, some);
        set!(format);
        set!(positive, some);
        set!(min_count);
        set!(folds);
        set!(seed);
        set!(out);
        set!(learner);
        set!(criteria);
        set!(batch_size, some);
        set!(seed_size, some);
        set!(kappa_cutoff, some);
        set!(window, some);
        set!(stop_set_size, some);
        set!(max_iterations, some);
        set!(cost, some);
        set!(lambda, some);
        set!(tolerance, some);
        set!(confidence);
        if self.cold_start {
            spec.warm_start = Some(false);
        }
        if self.keep_predictions {
            spec.keep_predictions = true;
        }
        Ok(spec)
    }
}

fn execute(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Prepare(a) => {
            let summary = prepare(&PrepareRequest {
                dataset: a.dataset,
                layout: a.layout,
                out: a.out.clone(),
                folds: a.folds,
                seed: a.seed,
                positive: a.positive,
                min_count: a.min_count,
                synthetic: SyntheticConfig::default(),
            })?;
            print(&format!(
                "{} examples ({} positive) in {} folds of sizes {:?}; wrote {} files to {}\n",
                summary.examples,
                summary.positives,
                summary.fold_sizes.len(),
                summary.fold_sizes,
                summary.files.len(),
                a.out.display()
            ));
        }
        Command::Run(a) => {
            let spec = a.spec()?;
            let output = cmd_run(&spec)?;
            print(&output.summary.render_text());
            print(&format!("outputs in {}\n", spec.out.display()));
        }
        Command::Sweep(a) => {
            let mut spec = a.run.spec()?;
            if a.sweep_intensity.is_some() || a.sweep_longevity.is_some() || a.sweep_stop_set_size.is_some() {
                spec.sweep.intensity = a.sweep_intensity;
                spec.sweep.longevity = a.sweep_longevity;
                spec.sweep.stop_set_size = a.sweep_stop_set_size;
            }
            let table = cmd_sweep(&spec)?;
            print(&table.render_text());
        }
        Command::Report(a) => {
            let out = a.out.unwrap_or_else(|| a.traces.clone());
            let summary = cmd_report(&a.traces, &out, a.confidence)?;
            print(&summary.render_text());
        }
        Command::Replay(a) => {
            let report = cmd_replay(&a.manifest, a.out.as_deref())?;
            for f in &report.matched {
                print(&format!("ok        {f}\n"));
            }
            for f in &report.mismatched {
                print(&format!("MISMATCH  {f}\n"));
            }
            for f in &report.missing {
                print(&format!("MISSING   {f}\n"));
            }
            return Ok(report.ok());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
