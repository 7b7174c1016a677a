use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aniso_rearrange::budget::BudgetFile;
use aniso_rearrange::config::{Experiment, ExperimentConfig};
use aniso_rearrange::corpus::write_corpus;
use aniso_rearrange::report::summary_text;
use aniso_rearrange::runner::{build_corpus, calibrate, collect_reports, run_experiment, write_outputs, Budgets, RunOptions};
use aniso_rearrange::Error;

/// Rearrangement inequality experiments on sampled functions.
#[derive(Parser)]
#[command(name = "agf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (falls back to AGF_THREADS, then the config).
    #[arg(long)]
    threads: Option<usize>,
    /// Log embedding ratios with some θ_j < p, without verdicts.
    #[arg(long)]
    explore_open_case: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write the configured corpus as AGF files with an index.
    Corpus {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure and freeze budgets for inequalities without explicit constants.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Budget file to write (defaults to the configured one).
        #[arg(long)]
        budget: Option<PathBuf>,
        /// Replace an existing budget file.
        #[arg(long)]
        force: bool,
    },
    /// Run one experiment, or `all`.
    Run {
        experiment: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: Option<PathBuf>,
    },
    /// Summarize the reports under an output directory.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(common: &Common) -> Result<(ExperimentConfig, RunOptions), Error> {
    let mut cfg = ExperimentConfig::from_path(&common.config)?;
    if let Some(s) = common.seed {
        cfg = cfg.with_seed(s);
    }
    let env_threads = match std::env::var("AGF_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().ok().filter(|&t| t > 0).ok_or_else(|| Error::Config(format!("AGF_THREADS='{v}' is not a positive integer")))?),
        Err(_) => None,
    };
    if common.threads == Some(0) {
        return Err(Error::Config("--threads must be positive".into()));
    }
    let opts = RunOptions {
        threads: common.threads.or(env_threads).or(cfg.threads),
        explore_open_case: common.explore_open_case,
    };
    Ok((cfg, opts))
}

/// Configured paths are relative to the configuration file.
fn budget_path(flag: Option<PathBuf>, cfg: &ExperimentConfig, config: &Path) -> Result<PathBuf, Error> {
    flag.or_else(|| cfg.budget.as_ref().map(|b| config.parent().unwrap_or(Path::new(".")).join(b)))
        .ok_or_else(|| Error::Config("no budget file: pass --budget or set 'budget' in the config".into()))
}

fn out_dir(flag: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("agf-out"))
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Corpus { common, out } => {
            let (cfg, _) = load(&common)?;
            let members = build_corpus(&cfg)?;
            let dir = out_dir(out, &cfg);
            write_corpus(&members, &dir)?;
            println!("wrote {} functions to {}", members.len(), dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Calibrate { common, budget, force } => {
            let (cfg, opts) = load(&common)?;
            let path = budget_path(budget, &cfg, &common.config)?;
            if path.exists() && !force {
                return Err(Error::Config(format!("{} exists; pass --force to overwrite", path.display())));
            }
            let b = calibrate(&cfg, &opts)?;
            b.write(&path, force)?;
            print!("{}", b.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { experiment, common, out, budget } => {
            let exp: Experiment = experiment.parse()?;
            let (cfg, opts) = load(&common)?;
            let b = BudgetFile::read(&budget_path(budget, &cfg, &common.config)?)?;
            let outputs = run_experiment(&cfg, exp, Budgets::Frozen(&b), &opts)?;
            write_outputs(&outputs, &out_dir(out, &cfg))?;
            let all: Vec<_> = outputs.iter().flat_map(|o| o.reports.iter().cloned()).collect();
            print!("{}", summary_text(&all));
            Ok(if outputs.iter().any(|o| o.has_failures()) { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Report { out } => {
            let reports = collect_reports(&out)?;
            print!("{}", summary_text(&reports));
            Ok(if reports.iter().any(|r| r.is_fail()) { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("agf: {e}");
            ExitCode::from(2)
        }
    }
}
