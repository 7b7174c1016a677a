//! Experiment orchestration.
//!
//! Jobs run per corpus member on a dedicated thread pool; results are
//! collected in member order and then sorted by
//! `(function_id, inequality_id, params_json)`, so the emitted files do not
//! depend on the thread count.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde_json::json;

use crate::budget::{is_calibrated, BudgetFile};
use crate::config::{Experiment, ExperimentConfig};
use crate::corpus::{corpus_hash, generate_corpus, CorpusMember};
use crate::error::{Error, Result};
use crate::geometry::{build_gauge, GaugeGrid};
use crate::norms::derive_params;
use crate::report::{summary_text, write_reports_csv, write_traces_csv, InequalityReport, LimitTrace, Verdict};
use crate::verify::{self, hard_budget, ids, NormFlavor};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub explore_open_case: bool,
}

/// Gauge table for one member and one axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeDump {
    pub function_id: String,
    pub sigma: String,
    pub csv: Vec<u8>,
}

/// Everything one experiment produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub experiment: Experiment,
    pub reports: Vec<InequalityReport>,
    pub traces: Vec<LimitTrace>,
    pub gauges: Vec<GaugeDump>,
    /// Skipped jobs and truncated sweeps.
    pub notes: Vec<String>,
}

impl RunOutput {
    pub fn has_failures(&self) -> bool {
        self.reports.iter().any(InequalityReport::is_fail)
    }
}

/// Budget source: a frozen file, or calibration mode where every calibrated
/// inequality gets an infinite budget.
#[derive(Debug, Clone, Copy)]
pub enum Budgets<'a> {
    Calibrating,
    Frozen(&'a BudgetFile),
}

impl Budgets<'_> {
    /// Calibrated budget for `id`; NaN when the file has none, which fails
    /// every non-degenerate check.
    fn get(&self, id: &str) -> f64 {
        match self {
            Budgets::Calibrating => f64::INFINITY,
            Budgets::Frozen(b) => b.get(id).unwrap_or(f64::NAN),
        }
    }
}

pub fn build_corpus(cfg: &ExperimentConfig) -> Result<Vec<CorpusMember>> {
    let mut out = Vec::new();
    for spec in &cfg.corpus {
        out.extend(generate_corpus(spec)?);
    }
    Ok(out)
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t);
    }
    b.build().map_err(|e| Error::Resource(format!("thread pool: {e}")))
}

/// Runs every concrete experiment of `exp`. With frozen budgets the corpus
/// hash must match the one recorded in the budget file.
pub fn run_experiment(cfg: &ExperimentConfig, exp: Experiment, budgets: Budgets<'_>, opts: &RunOptions) -> Result<Vec<RunOutput>> {
    cfg.validate()?;
    let corpus = build_corpus(cfg)?;
    if let Budgets::Frozen(b) = budgets {
        b.check_hash(&corpus_hash(&corpus))?;
    }
    let explore = opts.explore_open_case || cfg.explore_open_case;
    pool(opts.threads.or(cfg.threads))?.install(|| {
        exp.expand()
            .into_iter()
            .map(|e| run_one(cfg, e, &corpus, budgets, explore))
            .collect()
    })
}

#[derive(Default)]
struct MemberOut {
    reports: Vec<InequalityReport>,
    traces: Vec<LimitTrace>,
    gauges: Vec<GaugeDump>,
    notes: Vec<String>,
}

fn run_one(cfg: &ExperimentConfig, exp: Experiment, corpus: &[CorpusMember], budgets: Budgets<'_>, explore: bool) -> Result<RunOutput> {
    use rayon::prelude::*;
    let parts: Vec<MemberOut> = corpus
        .par_iter()
        .map(|m| member_jobs(cfg, exp, m, budgets, explore))
        .collect::<Result<_>>()?;
    let mut out = RunOutput {
        experiment: exp,
        reports: Vec::new(),
        traces: Vec::new(),
        gauges: Vec::new(),
        notes: Vec::new(),
    };
    for p in parts {
        out.reports.extend(p.reports);
        out.traces.extend(p.traces);
        out.gauges.extend(p.gauges);
        out.notes.extend(p.notes);
    }
    out.reports.sort_by_cached_key(|r| (r.function_id.clone(), r.inequality_id.clone(), r.params.to_string()));
    out.traces.sort_by_cached_key(|t| (t.function_id.clone(), t.trace_id.clone(), t.params.to_string()));
    Ok(out)
}

fn member_jobs(cfg: &ExperimentConfig, exp: Experiment, m: &CorpusMember, budgets: Budgets<'_>, explore: bool) -> Result<MemberOut> {
    let f = &m.function;
    let fid = m.id.as_str();
    let n = f.dims();
    let mut out = MemberOut::default();
    match exp {
        Experiment::RearrEstimate => {
            for &p in &cfg.p {
                for &d in &cfg.delta {
                    out.reports.push(verify::verify_isotropic_estimate(f, fid, p, d, budgets.get(ids::ISOTROPIC))?);
                }
            }
        }
        Experiment::AnisoEstimate => {
            if n < 2 {
                return Ok(out);
            }
            if f.len() > cfg.max_gauge_cells {
                out.notes.push(format!("{fid}: gauge skipped, {} cells exceed max_gauge_cells", f.len()));
                return Ok(out);
            }
            for sigma in cfg.sigma.for_dims(n) {
                let gauge = build_gauge(f, &sigma, &GaugeGrid::AllEven)?;
                for &p in &cfg.p {
                    out.reports.extend(verify::verify_anisotropic_estimate(
                        f,
                        fid,
                        p,
                        &gauge,
                        &cfg.h,
                        (budgets.get(ids::ANISO_INTEGRAL), budgets.get(ids::ANISO_SUP)),
                    )?);
                }
                out.reports.extend(verify::gauge_reports(&gauge, fid));
                let mut csv = Vec::new();
                gauge.write_csv(f.cell_sizes(), &mut csv)?;
                out.gauges.push(GaugeDump {
                    function_id: fid.to_string(),
                    sigma: sigma.to_string(),
                    csv,
                });
            }
        }
        Experiment::Embedding => {
            let mut flavors = vec![NormFlavor::Lorentz];
            flavors.extend(cfg.sigma.for_dims(n).into_iter().map(NormFlavor::Mixed));
            for pt in cfg.embed.iter().filter(|pt| pt.beta.len() == n) {
                for &p in &cfg.p {
                    let params = derive_params(p, &pt.beta, &pt.theta)?;
                    if !params.admissible || (params.open_case && !explore) {
                        out.notes.push(format!("{fid}: skipped p={p} beta={:?} theta={:?} (inadmissible or open case)", pt.beta, pt.theta));
                        continue;
                    }
                    for flavor in &flavors {
                        let id = match flavor {
                            NormFlavor::Lorentz => ids::EMBEDDING_LORENTZ,
                            NormFlavor::Mixed(_) => ids::EMBEDDING_MIXED,
                        };
                        out.reports.extend(verify::verify_embedding(f, fid, &params, flavor, budgets.get(id), explore)?);
                    }
                }
            }
        }
        Experiment::LimitSweep => {
            if !m.family.is_lipschitz() {
                return Ok(out);
            }
            if let Some(s) = cfg.sweep.as_ref().filter(|s| s.beta.len() == n) {
                let mut flavors = vec![NormFlavor::Lorentz];
                flavors.extend(cfg.sigma.for_dims(n).into_iter().map(NormFlavor::Mixed));
                for flavor in &flavors {
                    let res = verify::limiting_sweep(f, fid, s.p, &s.beta, &s.theta, &s.axes, s.m_max, flavor, budgets.get(ids::SWEEP))?;
                    let tag = match flavor {
                        NormFlavor::Lorentz => "lorentz".to_string(),
                        NormFlavor::Mixed(sg) => format!("mixed{sg}"),
                    };
                    if res.truncated {
                        out.notes.push(format!("{fid}: {tag} sweep truncated at the admissibility bound"));
                    }
                    for mut t in [res.with_factors, res.control] {
                        t.params["flavor"] = json!(tag);
                        out.traces.push(t);
                    }
                    out.reports.extend(res.reports);
                }
            }
            for alpha in cfg.lipschitz_alpha.iter().filter(|a| a.len() == n) {
                for &p in &cfg.p {
                    let lp = crate::norms::derive_lipschitz_params(p, alpha)?;
                    if !lp.admissible {
                        continue;
                    }
                    out.reports.push(verify::verify_lipschitz_corollary(f, fid, p, alpha, budgets.get(ids::LIPSCHITZ_COROLLARY))?);
                }
            }
        }
        Experiment::Bbm => {
            // piecewise-constant representatives have finite slope only for p = 1
            if m.family.is_lipschitz() {
                for k in 0..n {
                    for &theta in &cfg.limit_theta {
                        out.traces.push(verify::verify_limit_relations(f, fid, k, 1.0, theta, cfg.limit_m)?);
                    }
                }
                if n == 1 && f.len() <= cfg.max_gagliardo_cells {
                    out.traces.push(verify::verify_bbm(f, fid, 1.0, cfg.bbm_m)?);
                }
            }
            if f.len() > cfg.max_gagliardo_cells {
                out.notes.push(format!("{fid}: Gagliardo checks skipped, {} cells exceed max_gagliardo_cells", f.len()));
                return Ok(out);
            }
            for &p in &cfg.p {
                for &a in cfg.bourgain_alpha.iter().filter(|&&a| a * p < n as f64) {
                    out.reports.extend(verify::verify_bourgain(
                        f,
                        fid,
                        p,
                        a,
                        (budgets.get(ids::BOURGAIN), budgets.get(ids::BOURGAIN_LORENTZ)),
                    )?);
                }
            }
        }
        Experiment::ModulusLemmas => {
            let sigmas = cfg.sigma.for_dims(n);
            for &p in &cfg.p {
                out.reports.extend(verify::verify_rearrangement_modulus(f, fid, p, &cfg.delta, &sigmas)?);
                out.reports.extend(verify::verify_modulus_lemmas(f, fid, p, &cfg.delta)?);
            }
        }
        Experiment::Appendix => {
            if m.family.is_mdec() {
                for (i, &p) in cfg.p.iter().enumerate() {
                    let (rs, ws): (&[u32], &[f64]) = if i == 0 { (&cfg.oper_r, &cfg.oper_a) } else { (&[], &[]) };
                    out.reports.extend(verify::verify_appendix_ops(f, fid, rs, ws, &cfg.mu, &cfg.h, p)?);
                }
            }
            for sigma in cfg.sigma.for_dims(n) {
                for &p in &cfg.p {
                    let mut rs = vec![1.0, p, 2.0 * p];
                    rs.dedup();
                    for r in rs {
                        let id = if r <= p { ids::LORENTZ_MIXED_LOWER } else { ids::LORENTZ_MIXED_UPPER };
                        out.reports.push(verify::verify_lorentz_comparison(f, fid, p, r, &sigma, budgets.get(id))?);
                    }
                }
            }
        }
        Experiment::All => unreachable!("expanded before dispatch"),
    }
    debug_assert!(out.reports.iter().all(|r| is_calibrated(&r.inequality_id) || hard_budget(&r.inequality_id, n, 0.0, 1.0).is_some()));
    Ok(out)
}

/// Calibration: runs everything with infinite budgets and freezes twice the
/// worst ratio per inequality.
pub fn calibrate(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<BudgetFile> {
    let outputs = run_experiment(cfg, Experiment::All, Budgets::Calibrating, opts)?;
    let reports: Vec<InequalityReport> = outputs.into_iter().flat_map(|o| o.reports).collect();
    BudgetFile::calibrate(&reports, &corpus_hash(&build_corpus(cfg)?))
}

fn file_tag(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

fn plot_script(o: &RunOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script; run from this directory");
    let _ = writeln!(s, "set terminal pngcairo size 1000,600");
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set output 'ratios.png'");
    let _ = writeln!(s, "set title '{}: ratio and budget per report row'", o.experiment);
    let _ = writeln!(s, "plot 'ratios.dat' using 1:2 with points title 'ratio', '' using 1:3 with steps title 'budget'");
    if !o.traces.is_empty() {
        let _ = writeln!(s, "unset logscale y");
        let _ = writeln!(s, "set output 'traces.png'");
        let _ = writeln!(s, "set title '{}: limit traces'", o.experiment);
        let _ = writeln!(s, "set xlabel 'parameter'");
        let _ = writeln!(
            s,
            "plot for [i=0:{}] 'traces.dat' index i using 1:2 with linespoints notitle, for [i=0:{}] 'traces.dat' index i using 1:3 with lines dashtype 2 notitle",
            o.traces.len() - 1,
            o.traces.len() - 1
        );
    }
    s
}

/// Writes `reports.csv`, `summary.txt`, `traces.csv`, gauge tables, plot data
/// and a gnuplot script per experiment under `dir/<experiment>/`, plus a
/// combined `dir/summary.txt`.
pub fn write_outputs(outputs: &[RunOutput], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut all = Vec::new();
    for o in outputs {
        let d = dir.join(o.experiment.name());
        std::fs::create_dir_all(&d)?;
        write_reports_csv(&o.reports, std::io::BufWriter::new(std::fs::File::create(d.join("reports.csv"))?))?;
        let mut summary = summary_text(&o.reports);
        for note in &o.notes {
            summary.push_str(&format!("note: {note}\n"));
        }
        std::fs::write(d.join("summary.txt"), summary)?;
        if !o.traces.is_empty() {
            write_traces_csv(&o.traces, std::io::BufWriter::new(std::fs::File::create(d.join("traces.csv"))?))?;
            let mut dat = String::new();
            for t in &o.traces {
                let _ = writeln!(dat, "# {} {} {}", t.trace_id, t.function_id, t.params);
                for p in &t.points {
                    let _ = writeln!(dat, "{:e} {:e} {:e}", p.parameter, p.value, p.target);
                }
                dat.push_str("\n\n");
            }
            std::fs::write(d.join("traces.dat"), dat)?;
        }
        if !o.gauges.is_empty() {
            let gd = d.join("gauges");
            std::fs::create_dir_all(&gd)?;
            for g in &o.gauges {
                std::fs::write(gd.join(format!("{}__{}.csv", file_tag(&g.function_id), file_tag(&g.sigma))), &g.csv)?;
            }
        }
        let mut dat = String::new();
        for (i, r) in o.reports.iter().enumerate() {
            if r.verdict != Verdict::Degenerate {
                let _ = writeln!(dat, "{i} {:e} {:e} {}", r.ratio, r.budget, r.inequality_id);
            }
        }
        std::fs::write(d.join("ratios.dat"), dat)?;
        std::fs::write(d.join("plot.gp"), plot_script(o))?;
        all.extend(o.reports.iter().cloned());
    }
    let mut f = std::fs::File::create(dir.join("summary.txt"))?;
    f.write_all(summary_text(&all).as_bytes())?;
    Ok(())
}

/// Reads every `*/reports.csv` under `dir`.
pub fn collect_reports(dir: &Path) -> Result<Vec<InequalityReport>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path().join("reports.csv"))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Config(format!("no reports under {}", dir.display())));
    }
    let mut out = Vec::new();
    for p in paths {
        out.extend(crate::report::read_reports_csv(std::fs::File::open(p)?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = "
        seed = 5
        corpus = hat-multilinear 8x8
        corpus = random-mdec 4x4 count=2
        corpus = random-general 8 count=2
        p = 1
        delta = 1/8
        delta = 1/4
        h = 1/8
        embed = beta=1/2,1/2 theta=1,1
        sweep_beta = 1/2,1/2
        sweep_theta = 1,1
        sweep_axes = 1,2
        sweep_m = 3
        limit_theta = 1
        limit_m = 3
        bbm_m = 2
        bourgain_alpha = 1/2
        oper_r = 1
        oper_a = 1
        mu = 2
    ";

    #[test]
    fn calibrate_then_run_passes() {
        let cfg = ExperimentConfig::parse(CFG).unwrap();
        let opts = RunOptions { threads: Some(2), ..Default::default() };
        let b = calibrate(&cfg, &opts).unwrap();
        assert!(b.budgets.values().all(|v| *v > 0.0 && v.is_finite()));
        let outs = run_experiment(&cfg, Experiment::All, Budgets::Frozen(&b), &opts).unwrap();
        assert_eq!(outs.len(), Experiment::EACH.len());
        for o in &outs {
            assert!(!o.has_failures(), "{}: {:?}", o.experiment, o.reports.iter().filter(|r| r.is_fail()).collect::<Vec<_>>());
        }
        let moved = cfg.clone().with_seed(6);
        assert!(matches!(run_experiment(&moved, Experiment::All, Budgets::Frozen(&b), &opts), Err(Error::HashMismatch { .. })));
        let dir = tempfile::tempdir().unwrap();
        write_outputs(&outs, dir.path()).unwrap();
        assert!(dir.path().join("aniso-estimate/gauges").is_dir());
        let back = collect_reports(dir.path()).unwrap();
        assert_eq!(back.len(), outs.iter().map(|o| o.reports.len()).sum::<usize>());
    }
}
