use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mtbias_cli::config::{Flags, RunConfig};
use mtbias_cli::pipeline::Pipeline;
use mtbias_cli::CliError;
use mtbias_core::stats::DenominatorPolicy;

/// Gender-bias audit pipeline for Turkish/English machine translation.
#[derive(Debug, Parser)]
#[command(name = "mtbias", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Match the occupation lists and normalize every lexicon into <out>/corpus.
    CorpusBuild,
    /// Generate probe sentences into <out>/probes.jsonl.
    Probes,
    /// Translate every probe with every backend into <out>/records.jsonl.
    Translate,
    /// Detect gender signals and aggregate into <out>/report.json.
    Analyze,
    /// Render tables, figures and summary.md from <out>/report.json.
    Report,
    /// Run all stages in order, stopping at the first failure.
    RunAll,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Denominator {
    /// he/she translations only
    Gendered,
    /// every probe
    All,
}

#[derive(Debug, Args)]
struct Opts {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Use the deterministic mock backends.
    #[arg(long, global = true)]
    mock: bool,
    /// Seed for the mock backends.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Translation cache (JSONL).
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Serve translations from the cache only; misses fail.
    #[arg(long, global = true)]
    cache_only: bool,
    /// Worker threads for translation and detection.
    #[arg(long, global = true, value_name = "N")]
    parallelism: Option<usize>,
    /// Output directory (default: out).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Skip stages whose inputs and settings are unchanged.
    #[arg(long, global = true)]
    resume: bool,
    /// Denominator for female shares.
    #[arg(long, global = true, value_enum)]
    denominator: Option<Denominator>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let o = cli.opts;
    let cfg = RunConfig::from_flags(Flags {
        config: o.config,
        mock: o.mock,
        seed: o.seed,
        cache: o.cache,
        cache_only: o.cache_only,
        parallelism: o.parallelism,
        out: o.out,
        resume: o.resume,
        denominator: o.denominator.map(|d| match d {
            Denominator::Gendered => DenominatorPolicy::GenderedOnly,
            Denominator::All => DenominatorPolicy::AllProbes,
        }),
    })?;
    let p = Pipeline::new(cfg);
    match cli.command {
        Command::CorpusBuild => p.corpus_build().map(drop),
        Command::Probes => p.probes().map(drop),
        Command::Translate => p.translate().map(drop),
        Command::Analyze => p.analyze().map(drop),
        Command::Report => p.report().map(drop),
        Command::RunAll => p.run_all(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
