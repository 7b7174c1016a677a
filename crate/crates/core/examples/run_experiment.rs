//! Programmatic calibration and run of a small configuration.

use aniso_rearrange::config::{Experiment, ExperimentConfig};
use aniso_rearrange::report::summary_text;
use aniso_rearrange::runner::{calibrate, run_experiment, Budgets, RunOptions};

const CONFIG: &str = "
seed = 11
corpus = hat-multilinear 16x16
corpus = random-general 16 count=2
p = 1
delta = 1/8
delta = 1/4
h = 1/8
sigma = all
";

fn main() -> aniso_rearrange::Result<()> {
    let cfg = ExperimentConfig::parse(CONFIG)?;
    let opts = RunOptions::default();
    let budgets = calibrate(&cfg, &opts)?;
    print!("{}", budgets.to_text());
    let outputs = run_experiment(&cfg, Experiment::All, Budgets::Frozen(&budgets), &opts)?;
    let reports: Vec<_> = outputs.into_iter().flat_map(|o| o.reports).collect();
    print!("{}", summary_text(&reports));
    Ok(())
}
