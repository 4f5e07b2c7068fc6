use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use maxent_bench::config::{ConfigFile, EstimatorKind, ExperimentConfig, Mode};
use maxent_bench::error::{BenchError, Result};
use maxent_bench::output::{render_table, write_atomic};
use maxent_bench::{emit_outputs, load_source, run_experiment};
use maxent_quantile::streamgen::{generate, preset, StreamSpec};

#[derive(Parser)]
#[command(
    version,
    about = "Compare streaming quantile estimators against an exact oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every selected estimator at every bin budget.
    Run(RunArgs),
    /// Bin-budget sweep: histogram methods at each budget, baselines at the largest.
    Sweep(RunArgs),
    /// Write a synthetic stream to a file, one value per line.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Quantile level in (0, 1].
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated bin budgets.
    #[arg(long, value_delimiter = ',')]
    bins: Option<Vec<usize>>,
    /// Comma-separated subset of interpolated, aligned, p2, reservoir, equispaced, oracle.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    estimators: Option<Vec<EstimatorKind>>,
    /// `preset:NAME`, a file path, `file:PATH#COLUMN`, or `stream` for the config's [stream] table.
    #[arg(long)]
    source: Option<String>,
    /// Seed for the reservoir sampler.
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate every k-th step.
    #[arg(long)]
    stride: Option<usize>,
    /// Stream steps excluded from scoring (default: largest estimator warm-up).
    #[arg(long)]
    warmup_skip: Option<usize>,
    /// Worker threads for advancing estimators.
    #[arg(long)]
    threads: Option<usize>,
    /// Merge criterion for the data-aligned method: discrete or differential.
    #[arg(long)]
    merge_entropy: Option<String>,
    #[arg(long)]
    out_trace: Option<PathBuf>,
    #[arg(long)]
    out_summary: Option<PathBuf>,
    /// Gnuplot data file.
    #[arg(long)]
    out_plot: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Preset stream name.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Config file whose [stream] table describes the stream.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replace the stream's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Also write the stream description as TOML.
    #[arg(long)]
    spec_out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<EstimatorKind, String> {
    s.parse().map_err(|e: BenchError| e.to_string())
}

impl RunArgs {
    fn into_config(self, mode: Mode) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            q: self.q,
            bins: self.bins,
            estimators: self.estimators,
            source: self.source,
            seed: self.seed,
            stride: self.stride,
            warmup_skip: self.warmup_skip,
            threads: self.threads,
            merge_entropy: self.merge_entropy,
            out_trace: self.out_trace,
            out_summary: self.out_summary,
            out_plot: self.out_plot,
            stream: None,
        };
        ExperimentConfig::resolve(mode, file.overridden_by(flags))
    }
}

fn run(args: RunArgs, mode: Mode) -> Result<()> {
    let cfg = args.into_config(mode)?;
    let data = load_source(&cfg)?;
    info!("loaded {} values from {}", data.len(), cfg.source);
    let outcome = run_experiment(&cfg, &data)?;
    emit_outputs(
        &outcome.trace,
        &outcome.summaries,
        cfg.out_trace.as_deref(),
        cfg.out_summary.as_deref(),
        cfg.out_plot.as_deref(),
    )?;
    println!(
        "{} values, q = {}, warm-up skip {}",
        data.len(),
        cfg.q,
        outcome.warmup_skip
    );
    print!("{}", render_table(&outcome.summaries));
    Ok(())
}

fn gen(args: GenArgs) -> Result<()> {
    let mut spec: StreamSpec = match (&args.preset, &args.config) {
        (Some(name), _) => {
            preset(name).ok_or_else(|| BenchError::Config(format!("unknown preset {name:?}")))?
        }
        (None, Some(path)) => ConfigFile::load(path)?
            .stream
            .ok_or_else(|| BenchError::Config(format!("{}: no [stream] table", path.display())))?,
        (None, None) => return Err(BenchError::Config("gen needs --preset or --config".into())),
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let data = generate(&spec)?;
    let mut text = String::with_capacity(data.len() * 20);
    for v in &data {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    write_atomic(&args.out, &text)?;
    if let Some(p) = &args.spec_out {
        write_atomic(p, &spec.to_toml())?;
    }
    println!("wrote {} values to {}", data.len(), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a, Mode::Run),
        Command::Sweep(a) => run(a, Mode::Sweep),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
