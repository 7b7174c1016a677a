//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aniso_rearrange::budget::BudgetFile;
use aniso_rearrange::config::{Experiment, ExperimentConfig};
use aniso_rearrange::corpus::{generate_corpus, CorpusSpec, Family};
use aniso_rearrange::geometry::{build_gauge, loomis_whitney_check, minimal_projection_chain, CellSet, GaugeGrid};
use aniso_rearrange::norms::derive_params;
use aniso_rearrange::rearrange::{decreasing_rearrangement, distribution, iterated_rearrangement};
use aniso_rearrange::runner::{build_corpus, run_experiment, Budgets, RunOptions, RunOutput};
use aniso_rearrange::verify::{hard_budget, ids};
use aniso_rearrange::{GridFunction, InequalityReport, Permutation, Verdict};

const NORM_RTOL: f64 = 1e-12;
const SWEEP_WITH_FACTORS_MAX: f64 = 2.0;
const SWEEP_CONTROL_MIN: f64 = 5.0;
const BESOV_LIMIT_GAP: f64 = 0.10;
const BBM_GAP: f64 = 0.15;

type Check = Result<String, String>;

fn desk() -> (ExperimentConfig, BudgetFile) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let cfg = ExperimentConfig::from_path(&dir.join("configs/desk.cfg")).expect("desk config");
    let budget = BudgetFile::read(&dir.join("budgets/desk.budget")).expect("desk budget");
    (cfg, budget)
}

fn run(exp: Experiment) -> Result<Vec<RunOutput>, String> {
    let (cfg, b) = desk();
    run_experiment(&cfg, exp, Budgets::Frozen(&b), &RunOptions::default()).map_err(|e| e.to_string())
}

fn failures(reports: &[InequalityReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| r.is_fail())
        .map(|r| format!("{} {} {} ratio={} budget={}", r.inequality_id, r.function_id, r.params, r.ratio, r.budget))
        .collect()
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1. Equimeasurability and norm preservation on 200 seeded members.
fn c1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut members = Vec::new();
    for i in 0..200 {
        let n = 1 + i % 3;
        let shape: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=32)).collect();
        let family = Family::ALL[i % Family::ALL.len()];
        let f = generate_corpus(&CorpusSpec::unit_cube(family, shape, 1000 + i as u64, 1)).map_err(|e| e.to_string())?;
        members.push(f.into_iter().next().unwrap().function);
    }
    let mut levels_checked = 0;
    for (i, f) in members.iter().enumerate() {
        let sf = decreasing_rearrangement(f);
        let mut levels: Vec<f64> = f.values().to_vec();
        levels.push(0.0);
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        for &y in &levels {
            let lf = distribution(f, y).map_err(|e| e.to_string())?;
            // f* is nonincreasing: {f* > y} is [0, end of the last piece above y)
            let ls = sf.pieces().filter(|p| p.2 > y).map(|p| p.1).fold(0.0, f64::max);
            require(lf == ls, || format!("member {i}: λ_f({y}) = {lf} but λ_f*({y}) = {ls}"))?;
            levels_checked += 1;
        }
        let sigmas = Permutation::all(f.dims());
        let rs: Vec<GridFunction> = sigmas.iter().map(|s| iterated_rearrangement(f, s).unwrap()).collect();
        for p in [1.0, 1.5, 2.0, 3.0] {
            let a = f.lp_norm(p).unwrap();
            let b = sf.lp_norm(p).unwrap();
            require((a - b).abs() <= NORM_RTOL * a, || format!("member {i} p={p}: ‖f‖={a} ‖f*‖={b}"))?;
            for r in &rs {
                let c = r.lp_norm(p).unwrap();
                require((a - c).abs() <= NORM_RTOL * a, || format!("member {i} p={p}: ‖f‖={a} ‖Rσf‖={c}"))?;
            }
        }
    }
    Ok(format!("200 members, {levels_checked} levels, p ∈ {{1, 1.5, 2, 3}}"))
}

/// `sup` over cell unions `S` with `|S| ≥ t` of `min_S |f|`, zero once `t`
/// exceeds the grid.
fn sup_inf(vals: &[f64], v: f64, t: f64) -> f64 {
    let n = vals.len();
    let mut best = 0.0f64;
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as f64) * v < t {
            continue;
        }
        let m = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| vals[i].abs()).fold(f64::INFINITY, f64::min);
        best = best.max(m);
    }
    best
}

/// 2. f* against the sup-inf definition, all grids with at most 9 cells.
fn c2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut shapes = Vec::new();
    for a in 1..=9usize {
        shapes.push(vec![a]);
        for b in 1..=9 / a {
            shapes.push(vec![a, b]);
            for c in 1..=9 / (a * b) {
                shapes.push(vec![a, b, c]);
            }
        }
    }
    let mut evals = 0;
    for shape in &shapes {
        let len: usize = shape.iter().product();
        for _ in 0..25 {
            let sizes: Vec<f64> = shape.iter().map(|_| [0.5, 0.25, 1.0, 0.125][rng.gen_range(0..4)]).collect();
            let vals: Vec<f64> = (0..len).map(|_| f64::from(rng.gen_range(-4i32..=6)) / 2.0).collect();
            let f = GridFunction::from_signed(shape.clone(), sizes, vec![0.0; shape.len()], vals.clone()).map_err(|e| e.to_string())?;
            let sf = decreasing_rearrangement(&f);
            let v = f.cell_volume();
            let mut ts = vec![1e-9 * v];
            for k in 1..=len + 1 {
                ts.extend([(k as f64 - 0.5) * v, k as f64 * v, (k as f64 + 1e-9) * v]);
            }
            for t in ts {
                let want = sup_inf(&vals, v, t);
                let got = sf.eval(t);
                require(got == want, || format!("shape {shape:?} vals {vals:?}: f*({t}) = {got}, sup-inf {want}"))?;
                evals += 1;
            }
        }
    }
    Ok(format!("{} shapes × 25 grids, {evals} evaluations", shapes.len()))
}

fn hard_ids_seen(reports: &[InequalityReport]) -> BTreeSet<String> {
    reports.iter().filter(|r| r.verdict == Verdict::Pass).map(|r| r.inequality_id.clone()).collect()
}

/// 3. Explicit constants over the desk corpus and parameter grids.
fn c3() -> Check {
    let mut reports = Vec::new();
    for exp in [Experiment::ModulusLemmas, Experiment::Appendix] {
        reports.extend(run(exp)?.into_iter().flat_map(|o| o.reports));
    }
    let hard: Vec<InequalityReport> = reports.into_iter().filter(|r| hard_budget(&r.inequality_id, 1, 0.0, 2.0).is_some()).collect();
    let bad = failures(&hard);
    require(bad.is_empty(), || format!("{} violations, first: {}", bad.len(), bad[0]))?;
    let seen = hard_ids_seen(&hard);
    for id in [
        ids::REARRANGED_MODULUS_1D,
        ids::ITERATED_MODULUS,
        ids::AVERAGED_MODULUS,
        ids::STEKLOV_DISTANCE,
        ids::STEKLOV_DERIVATIVE,
        ids::OPERATOR_T,
        ids::AXIS_DECREMENT,
    ] {
        require(seen.contains(id), || format!("no decided {id} report"))?;
    }
    Ok(format!("{} reports, {} inequalities, 0 violations", hard.len(), seen.len()))
}

/// 4. Loomis–Whitney on random masks and on every gauge chain set.
fn c4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..500 {
        let n = rng.gen_range(2..=3);
        let shape: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=16)).collect();
        let len: usize = shape.iter().product();
        let density: f64 = rng.gen_range(0.02..1.0);
        let cells: Vec<usize> = (0..len).filter(|_| rng.gen_bool(density)).collect();
        let e = CellSet::new(shape.clone(), vec![1.0 / 16.0; n], cells, None).map_err(|e| e.to_string())?;
        let r = loomis_whitney_check(&e, "mask").map_err(|e| e.to_string())?;
        require(r.verdict != Verdict::Fail, || format!("mask {i} {shape:?}: {} > {}", r.lhs, r.rhs))?;
    }
    let (cfg, _) = desk();
    let mut points = 0;
    for m in build_corpus(&cfg).map_err(|e| e.to_string())? {
        let f = &m.function;
        if f.dims() < 2 {
            continue;
        }
        for sigma in Permutation::all(f.dims()) {
            let g = build_gauge(f, &sigma, &GaugeGrid::AllEven).map_err(|e| e.to_string())?;
            for pt in g.points() {
                require(pt.loomis_whitney_holds, || format!("{} σ={sigma} t={}", m.id, pt.t))?;
                points += 1;
            }
        }
    }
    Ok(format!("500 masks, {points} gauge points (each a full chain)"))
}

/// 5. Gauge product bound everywhere; the anisotropic estimates under budgets.
fn c5() -> Check {
    let out = run(Experiment::AnisoEstimate)?;
    let reports: Vec<InequalityReport> = out.into_iter().flat_map(|o| o.reports).collect();
    let bad = failures(&reports);
    require(bad.is_empty(), || format!("{} failures, first: {}", bad.len(), bad[0]))?;
    let product: Vec<&InequalityReport> = reports.iter().filter(|r| r.inequality_id == ids::GAUGE_PRODUCT).collect();
    require(product.iter().all(|r| r.verdict != Verdict::Fail), || "gauge product violated".into())?;
    let (cfg, _) = desk();
    let ids_2d: BTreeSet<String> = build_corpus(&cfg).map_err(|e| e.to_string())?.into_iter().filter(|m| m.function.dims() == 2).map(|m| m.id).collect();
    let members_2d = ids_2d.len();
    let mut hs = BTreeSet::new();
    let mut axes = BTreeSet::new();
    let mut fids = BTreeSet::new();
    for r in reports.iter().filter(|r| r.inequality_id == ids::ANISO_INTEGRAL || r.inequality_id == ids::ANISO_SUP) {
        if ids_2d.contains(&r.function_id) {
            hs.insert(r.params["h"].to_string());
            axes.insert(r.params["axis"].to_string());
            fids.insert(r.function_id.clone());
        }
    }
    require(hs.len() >= 6, || format!("only {} h values", hs.len()))?;
    require(axes.len() == 2, || format!("axes covered: {axes:?}"))?;
    require(fids.len() == members_2d, || format!("{} of {members_2d} 2-D members covered", fids.len()))?;
    Ok(format!("{} gauge product reports, {} estimate reports over {} h values", product.len(), reports.len() - product.len(), hs.len()))
}

/// Columns of `cells` (2-D, row-major) along `axis`: cell counts per column.
fn columns(cells: &[usize], shape: &[usize], axis: usize) -> Vec<usize> {
    let mut counts = vec![0usize; shape[1 - axis]];
    for &c in cells {
        let (i0, i1) = (c / shape[1], c % shape[1]);
        counts[if axis == 0 { i1 } else { i0 }] += 1;
    }
    counts.into_iter().filter(|&k| k > 0).collect()
}

/// Fewest whole columns holding at least `need` cells, by enumeration.
fn exhaustive_min_columns(cols: &[usize], need: usize) -> usize {
    (0u32..(1 << cols.len()))
        .filter(|m| (0..cols.len()).filter(|&i| m & (1 << i) != 0).map(|i| cols[i]).sum::<usize>() >= need)
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

fn check_chain(shape: &[usize], cells: Vec<usize>) -> Result<(), String> {
    let e = CellSet::new(shape.to_vec(), vec![0.2, 0.2], cells, None).map_err(|e| e.to_string())?;
    if e.is_empty() {
        return Ok(());
    }
    let chain = minimal_projection_chain(&e).map_err(|e| e.to_string())?;
    for j in 1..=2 {
        let need = e.count().div_ceil(1 << j);
        let prev = &chain[j - 1];
        let cur = &chain[j];
        require(cur.is_subset_of(prev) && cur.count() >= need, || format!("{shape:?} {:?}: step {j} not a subset of enough cells", e.cells()))?;
        let greedy = columns(cur.cells(), shape, j - 1).len();
        let best = exhaustive_min_columns(&columns(prev.cells(), shape, j - 1), need);
        require(greedy == best, || format!("{shape:?} {:?}: step {j} uses {greedy} columns, minimum {best}", e.cells()))?;
        // whole columns: every chosen column is complete in the previous set
        let prev_cols = columns(prev.cells(), shape, j - 1);
        require(columns(cur.cells(), shape, j - 1).iter().all(|k| prev_cols.contains(k)), || "partial column".into())?;
    }
    Ok(())
}

/// 6. Greedy chain against the exhaustive whole-column minimum, up to 5×5.
fn c6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut sets = 0usize;
    for a in 1..=5usize {
        for b in 1..=5usize {
            let len = a * b;
            if len <= 12 {
                for mask in 0u32..(1 << len) {
                    check_chain(&[a, b], (0..len).filter(|&i| mask & (1 << i) != 0).collect())?;
                    sets += 1;
                }
            } else {
                for _ in 0..4000 {
                    let d: f64 = rng.gen_range(0.05..1.0);
                    check_chain(&[a, b], (0..len).filter(|_| rng.gen_bool(d)).collect())?;
                    sets += 1;
                }
            }
        }
    }
    Ok(format!("{sets} sets (exhaustive up to 12 cells)"))
}

/// 7. Embedding under calibrated budgets, both flavors; Minkowski exact.
fn c7() -> Check {
    let reports: Vec<InequalityReport> = run(Experiment::Embedding)?.into_iter().flat_map(|o| o.reports).collect();
    let bad = failures(&reports);
    require(bad.is_empty(), || format!("{} failures, first: {}", bad.len(), bad[0]))?;
    let (cfg, _) = desk();
    let (mut below, mut above) = (0, 0);
    for pt in &cfg.embed {
        for &p in &cfg.p {
            let bp = derive_params(p, &pt.beta, &pt.theta).map_err(|e| e.to_string())?;
            if bp.admissible && !bp.open_case {
                if bp.theta <= bp.q {
                    below += 1;
                } else {
                    above += 1;
                }
            }
        }
    }
    require(cfg.embed.len() >= 6 && below > 0 && above > 0, || format!("{} points, θ ≤ q: {below}, θ > q: {above}", cfg.embed.len()))?;
    let count = |id: &str| reports.iter().filter(|r| r.inequality_id == id && r.verdict == Verdict::Pass).count();
    let (l, m, k) = (count(ids::EMBEDDING_LORENTZ), count(ids::EMBEDDING_MIXED), count(ids::MINKOWSKI));
    require(l > 0 && m > 0 && k > 0, || format!("lorentz {l}, mixed {m}, minkowski {k}"))?;
    Ok(format!("{} points ({below} with θ ≤ q, {above} with θ > q); lorentz {l}, mixed {m}, minkowski {k} pass", cfg.embed.len()))
}

/// 8. Limiting sweep: bounded with the factors, growing without them.
fn c8() -> Check {
    let out = run(Experiment::LimitSweep)?;
    let traces: Vec<_> = out.iter().flat_map(|o| o.traces.iter()).filter(|t| t.params["flavor"] == "lorentz").collect();
    require(!traces.is_empty(), || "no sweep traces".into())?;
    let mut worst_with: f64 = 0.0;
    let mut least_control = f64::INFINITY;
    for t in &traces {
        require(t.points.len() == 8, || format!("{}: {} sweep points", t.function_id, t.points.len()))?;
        match t.trace_id.as_str() {
            "sweep-with-factors" => worst_with = worst_with.max(t.growth()),
            "sweep-control" => least_control = least_control.min(t.growth()),
            _ => {}
        }
    }
    require(worst_with <= SWEEP_WITH_FACTORS_MAX, || format!("with factors grows {worst_with:.3}×"))?;
    require(least_control >= SWEEP_CONTROL_MIN, || format!("control grows only {least_control:.3}×"))?;
    let bad = failures(&out.iter().flat_map(|o| o.reports.clone()).collect::<Vec<_>>());
    require(bad.is_empty(), || format!("{} failures, first: {}", bad.len(), bad[0]))?;
    Ok(format!("with factors ≤ {worst_with:.3}× of m=1, control ≥ {least_control:.3}×"))
}

/// 9. Besov and Gagliardo limits on the hat corpus.
fn c9() -> Check {
    let out = run(Experiment::Bbm)?;
    let traces: Vec<_> = out.iter().flat_map(|o| o.traces.iter()).collect();
    let mut worst_besov: f64 = 0.0;
    let mut thetas = BTreeSet::new();
    for t in traces.iter().filter(|t| t.trace_id == "besov-limit") {
        require(t.points.len() == 8, || format!("{}: {} points", t.function_id, t.points.len()))?;
        thetas.insert(t.params["theta"].to_string());
        worst_besov = worst_besov.max(t.last_gap().unwrap());
    }
    require(thetas.len() == 2, || format!("θ values {thetas:?}"))?;
    require(worst_besov < BESOV_LIMIT_GAP, || format!("Besov limit gap {worst_besov:.4}"))?;
    let bbm: Vec<_> = traces.iter().filter(|t| t.trace_id == "gagliardo-limit").collect();
    require(bbm.iter().any(|t| t.function_id.contains("-64-")), || "no 64-cell Gagliardo trace".into())?;
    let mut worst_bbm: f64 = 0.0;
    for t in &bbm {
        require(t.points.len() == 6, || format!("{}: {} points", t.function_id, t.points.len()))?;
        worst_bbm = worst_bbm.max(t.last_gap().unwrap());
    }
    require(worst_bbm < BBM_GAP, || format!("BBM gap {worst_bbm:.4}"))?;
    Ok(format!("Besov gap {worst_besov:.2e} at m=8, BBM gap {worst_bbm:.2e} at m=6"))
}

fn csv_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            csv_files(&p, out);
        } else if p.extension().is_some_and(|x| x == "csv") {
            out.push(p);
        }
    }
}

/// 10. `run all` with 1 and 8 threads writes byte-identical CSVs.
fn c10() -> Check {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/desk.cfg");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    for threads in ["1", "8"] {
        let out = tmp.path().join(threads);
        let o = Command::new(env!("CARGO_BIN_EXE_agf"))
            .args(["run", "all", "--config"])
            .arg(&cfg)
            .args(["--threads", threads, "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        require(o.status.success(), || format!("threads={threads}: exit {:?}", o.status.code()))?;
    }
    let mut files = Vec::new();
    csv_files(&tmp.path().join("1"), &mut files);
    files.sort();
    require(files.len() > 7, || format!("only {} CSV files", files.len()))?;
    for a in &files {
        let b = tmp.path().join("8").join(a.strip_prefix(tmp.path().join("1")).unwrap());
        let (x, y) = (std::fs::read(a).unwrap(), std::fs::read(&b).map_err(|_| format!("{} missing", b.display()))?);
        require(x == y, || format!("{} differs", b.display()))?;
    }
    Ok(format!("{} CSV files identical", files.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Check); 10] = [
        (1, "equimeasurability and norm preservation", 60, c1),
        (2, "sup-inf oracle", 10, c2),
        (3, "explicit constants", 180, c3),
        (4, "Loomis-Whitney", 30, c4),
        (5, "anisotropic gauge and estimates", 120, c5),
        (6, "minimal projection chain", 30, c6),
        (7, "embedding and Minkowski step", 120, c7),
        (8, "limiting sweep", 120, c8),
        (9, "limit relations", 120, c9),
        (10, "determinism across thread counts", 600, c10),
    ];
    let mut failed = 0;
    for (no, name, limit, f) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let res = res.and_then(|d| if took <= Duration::from_secs(limit) { Ok(d) } else { Err(format!("{d}; over the {limit} s limit")) });
        match res {
            Ok(d) => println!("criterion {no:>2} PASS  {name}: {d} [{:.1} s]", took.as_secs_f64()),
            Err(d) => {
                failed += 1;
                println!("criterion {no:>2} FAIL  {name}: {d} [{:.1} s]", took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
