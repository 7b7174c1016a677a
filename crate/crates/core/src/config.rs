//! Flat `key = value` experiment configuration.
//!
//! One assignment per line, `#` starts a comment, list-valued keys are
//! repeated, vectors are comma separated and numbers may be written as
//! fractions (`1/4`) or `inf`. `include = path` splices another file,
//! resolved relative to the including file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::corpus::{CorpusSpec, Family};
use crate::error::{Error, Result};
use crate::rearrange::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    RearrEstimate,
    AnisoEstimate,
    Embedding,
    LimitSweep,
    Bbm,
    ModulusLemmas,
    Appendix,
    All,
}

impl Experiment {
    /// Every concrete experiment, in run order.
    pub const EACH: [Experiment; 7] = [
        Experiment::RearrEstimate,
        Experiment::AnisoEstimate,
        Experiment::Embedding,
        Experiment::LimitSweep,
        Experiment::Bbm,
        Experiment::ModulusLemmas,
        Experiment::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::RearrEstimate => "rearr-estimate",
            Experiment::AnisoEstimate => "aniso-estimate",
            Experiment::Embedding => "embedding",
            Experiment::LimitSweep => "limit-sweep",
            Experiment::Bbm => "bbm",
            Experiment::ModulusLemmas => "modulus-lemmas",
            Experiment::Appendix => "appendix",
            Experiment::All => "all",
        }
    }

    /// The concrete experiments this selection expands to.
    pub fn expand(self) -> Vec<Experiment> {
        if self == Experiment::All {
            Self::EACH.to_vec()
        } else {
            vec![self]
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::EACH
            .into_iter()
            .chain([Experiment::All])
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

/// Besov exponents of one embedding parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingPoint {
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub p: f64,
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
    /// Zero-based.
    pub axes: Vec<usize>,
    pub m_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSpec {
    All,
    /// Zero-based axis orders; only those matching a member's dimension apply.
    List(Vec<Vec<usize>>),
}

impl SigmaSpec {
    pub fn for_dims(&self, n: usize) -> Vec<Permutation> {
        match self {
            SigmaSpec::All => Permutation::all(n),
            SigmaSpec::List(l) => l.iter().filter(|s| s.len() == n).filter_map(|s| Permutation::new(s.clone()).ok()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub corpus: Vec<CorpusSpec>,
    /// Entries whose seed was given explicitly and does not follow `seed`.
    pub corpus_seed_pinned: Vec<bool>,
    pub p: Vec<f64>,
    pub delta: Vec<f64>,
    pub h: Vec<f64>,
    pub sigma: SigmaSpec,
    pub embed: Vec<EmbeddingPoint>,
    pub sweep: Option<SweepConfig>,
    pub lipschitz_alpha: Vec<Vec<f64>>,
    pub limit_theta: Vec<f64>,
    pub limit_m: u32,
    pub bbm_m: u32,
    pub bourgain_alpha: Vec<f64>,
    pub max_gagliardo_cells: usize,
    pub max_gauge_cells: usize,
    pub oper_r: Vec<u32>,
    pub oper_a: Vec<f64>,
    pub mu: Vec<f64>,
    pub out: Option<PathBuf>,
    pub budget: Option<PathBuf>,
    pub threads: Option<usize>,
    pub explore_open_case: bool,
}

pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Config(format!("not a number: '{s}'"));
    let v = match s {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        _ => match s.split_once('/') {
            Some((a, b)) => a.trim().parse::<f64>().map_err(|_| bad())? / b.trim().parse::<f64>().map_err(|_| bad())?,
            None => s.parse::<f64>().map_err(|_| bad())?,
        },
    };
    if v.is_nan() {
        return Err(bad());
    }
    Ok(v)
}

fn parse_vec(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_real).collect()
}

fn parse_int<T: FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Config(format!("not an integer: '{s}'")))
}

fn parse_axes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| match parse_int::<usize>(t)? {
            0 => Err(Error::Config("axes are numbered from 1".into())),
            k => Ok(k - 1),
        })
        .collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("not a boolean: '{s}'"))),
    }
}

/// Raw assignments in file order, includes expanded.
fn collect_lines(text: &str, base: Option<&Path>, depth: usize, out: &mut Vec<(String, String, String)>) -> Result<()> {
    if depth > 8 {
        return Err(Error::Config("include nesting too deep".into()));
    }
    let origin = base.map_or_else(|| "<config>".to_string(), |p| p.display().to_string());
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{origin}:{}: expected key = value", no + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k == "include" {
            let path = base.and_then(Path::parent).unwrap_or(Path::new(".")).join(v);
            let inner = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{origin}:{}: include {}: {e}", no + 1, path.display())))?;
            collect_lines(&inner, Some(&path), depth + 1, out)?;
        } else {
            out.push((k.to_string(), v.to_string(), format!("{origin}:{}", no + 1)));
        }
    }
    Ok(())
}

fn parse_corpus(v: &str, entry: usize, seed: Option<u64>) -> Result<(CorpusSpec, bool)> {
    let mut tok = v.split_whitespace();
    let family: Family = tok.next().ok_or_else(|| Error::Config("corpus entry needs a family".into()))?.parse()?;
    let shape: Vec<usize> = tok
        .next()
        .ok_or_else(|| Error::Config("corpus entry needs a shape like 16x16".into()))?
        .split('x')
        .map(parse_int)
        .collect::<Result<_>>()?;
    let mut spec = CorpusSpec::unit_cube(family, shape, seed.unwrap_or(0).wrapping_add(entry as u64), 1);
    let mut explicit_seed = false;
    for t in tok {
        let (k, val) = t.split_once('=').ok_or_else(|| Error::Config(format!("corpus option '{t}' is not key=value")))?;
        match k {
            "count" => spec.count = parse_int(val)?,
            "seed" => {
                spec.seed = parse_int(val)?;
                explicit_seed = true;
            }
            "cell" => {
                let c = parse_vec(val)?;
                spec.cell_sizes = if c.len() == 1 { vec![c[0]; spec.shape.len()] } else { c };
            }
            _ => return Err(Error::Config(format!("unknown corpus option '{k}'"))),
        }
    }
    Ok((spec, explicit_seed))
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse_with_base(&text, Some(path))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_base(text, None)
    }

    fn parse_with_base(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut lines = Vec::new();
        collect_lines(text, base, 0, &mut lines)?;
        let mut cfg = ExperimentConfig {
            experiment: None,
            seed: 0,
            corpus: Vec::new(),
            corpus_seed_pinned: Vec::new(),
            p: Vec::new(),
            delta: Vec::new(),
            h: Vec::new(),
            sigma: SigmaSpec::All,
            embed: Vec::new(),
            sweep: None,
            lipschitz_alpha: Vec::new(),
            limit_theta: Vec::new(),
            limit_m: 8,
            bbm_m: 6,
            bourgain_alpha: Vec::new(),
            max_gagliardo_cells: 1024,
            max_gauge_cells: 4096,
            oper_r: Vec::new(),
            oper_a: Vec::new(),
            mu: Vec::new(),
            out: None,
            budget: None,
            threads: None,
            explore_open_case: false,
        };
        let mut seed = None;
        let mut corpus_raw = Vec::new();
        let mut sigmas: Vec<Vec<usize>> = Vec::new();
        let mut sigma_all = false;
        let (mut sb, mut st, mut sa, mut sm, mut sp) = (None, None, None, None, None);
        for (k, v, at) in &lines {
            let ctx = |e: Error| match e {
                Error::Config(m) => Error::Config(format!("{at}: {m}")),
                other => other,
            };
            let v = v.as_str();
            (|| -> Result<()> {
                match k.as_str() {
                    "experiment" => cfg.experiment = Some(v.parse()?),
                    "seed" => seed = Some(parse_int(v)?),
                    "corpus" => corpus_raw.push(v.to_string()),
                    "p" => cfg.p.push(parse_real(v)?),
                    "delta" => cfg.delta.push(parse_real(v)?),
                    "h" => cfg.h.push(parse_real(v)?),
                    "sigma" if v == "all" => sigma_all = true,
                    "sigma" => sigmas.push(parse_axes(v)?),
                    "embed" => {
                        let (mut beta, mut theta) = (None, None);
                        for t in v.split_whitespace() {
                            match t.split_once('=') {
                                Some(("beta", x)) => beta = Some(parse_vec(x)?),
                                Some(("theta", x)) => theta = Some(parse_vec(x)?),
                                _ => return Err(Error::Config(format!("embed expects beta=… theta=…, got '{t}'"))),
                            }
                        }
                        cfg.embed.push(EmbeddingPoint {
                            beta: beta.ok_or_else(|| Error::Config("embed needs beta".into()))?,
                            theta: theta.ok_or_else(|| Error::Config("embed needs theta".into()))?,
                        });
                    }
                    "sweep_beta" => sb = Some(parse_vec(v)?),
                    "sweep_theta" => st = Some(parse_vec(v)?),
                    "sweep_axes" => sa = Some(parse_axes(v)?),
                    "sweep_m" => sm = Some(parse_int(v)?),
                    "sweep_p" => sp = Some(parse_real(v)?),
                    "lipschitz_alpha" => cfg.lipschitz_alpha.push(parse_vec(v)?),
                    "limit_theta" => cfg.limit_theta.push(parse_real(v)?),
                    "limit_m" => cfg.limit_m = parse_int(v)?,
                    "bbm_m" => cfg.bbm_m = parse_int(v)?,
                    "bourgain_alpha" => cfg.bourgain_alpha.push(parse_real(v)?),
                    "max_gagliardo_cells" => cfg.max_gagliardo_cells = parse_int(v)?,
                    "max_gauge_cells" => cfg.max_gauge_cells = parse_int(v)?,
                    "oper_r" => cfg.oper_r.push(parse_int(v)?),
                    "oper_a" => cfg.oper_a.push(parse_real(v)?),
                    "mu" => cfg.mu.push(parse_real(v)?),
                    "out" => cfg.out = Some(PathBuf::from(v)),
                    "budget" => cfg.budget = Some(PathBuf::from(v)),
                    "threads" => cfg.threads = Some(parse_int(v)?),
                    "explore_open_case" => cfg.explore_open_case = parse_bool(v)?,
                    _ => return Err(Error::Config(format!("unknown key '{k}'"))),
                }
                Ok(())
            })()
            .map_err(ctx)?;
        }
        cfg.seed = seed.ok_or_else(|| Error::Config("'seed' is mandatory".into()))?;
        for (i, raw) in corpus_raw.iter().enumerate() {
            let (spec, pinned) = parse_corpus(raw, i, Some(cfg.seed))?;
            cfg.corpus.push(spec);
            cfg.corpus_seed_pinned.push(pinned);
        }
        cfg.sigma = if sigma_all || sigmas.is_empty() { SigmaSpec::All } else { SigmaSpec::List(sigmas) };
        cfg.sweep = match (sb, st, sa, sm, sp) {
            (None, None, None, None, None) => None,
            (Some(beta), Some(theta), Some(axes), m, p) => Some(SweepConfig {
                p: p.unwrap_or(1.0),
                beta,
                theta,
                axes,
                m_max: m.unwrap_or(8),
            }),
            _ => return Err(Error::Config("a sweep needs sweep_beta, sweep_theta and sweep_axes".into())),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replaces the seed and rederives corpus seeds that were not pinned.
    pub fn with_seed(mut self, seed: u64) -> Self {
        let delta = seed.wrapping_sub(self.seed);
        for (c, &pinned) in self.corpus.iter_mut().zip(&self.corpus_seed_pinned) {
            if !pinned {
                c.seed = c.seed.wrapping_add(delta);
            }
        }
        self.seed = seed;
        self
    }

    /// Checks every grid against the preconditions of the verifiers that use it.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.corpus.is_empty() {
            return bad("at least one corpus entry is required".into());
        }
        for c in &self.corpus {
            if c.shape.is_empty() || c.shape.contains(&0) || c.count == 0 || c.cell_sizes.len() != c.shape.len() {
                return bad(format!("invalid corpus entry for {}", c.family));
            }
            if c.cell_sizes.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return bad("cell sizes must be positive".into());
            }
        }
        if let Some(p) = self.p.iter().find(|&&p| !(p >= 1.0 && p.is_finite())) {
            return bad(format!("p = {p} is outside [1, ∞)"));
        }
        for (name, list) in [("delta", &self.delta), ("h", &self.h), ("mu", &self.mu)] {
            if let Some(x) = list.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
                return bad(format!("{name} = {x} must be positive and finite"));
            }
        }
        if let Some(m) = self.mu.iter().find(|&&m| m <= 1.0) {
            return bad(format!("mu = {m} must exceed 1"));
        }
        if let SigmaSpec::List(l) = &self.sigma {
            for s in l {
                if Permutation::new(s.clone()).is_err() {
                    return bad(format!("sigma {:?} is not a permutation", s.iter().map(|k| k + 1).collect::<Vec<_>>()));
                }
            }
        }
        let check_bt = |beta: &[f64], theta: &[f64]| -> Result<()> {
            if beta.len() != theta.len() || beta.is_empty() {
                return bad("beta and theta need one entry per axis".into());
            }
            if beta.iter().any(|&b| !(b > 0.0 && b < 1.0)) {
                return bad("beta entries must lie in (0,1)".into());
            }
            if theta.iter().any(|&t| !(t >= 1.0)) {
                return bad("theta entries must be at least 1".into());
            }
            Ok(())
        };
        for e in &self.embed {
            check_bt(&e.beta, &e.theta)?;
        }
        if let Some(s) = &self.sweep {
            check_bt(&s.beta, &s.theta)?;
            if s.axes.is_empty() || s.axes.iter().any(|&k| k >= s.beta.len()) {
                return bad("sweep axes out of range".into());
            }
            if !(s.p >= 1.0 && s.p.is_finite()) || !(1..=30).contains(&s.m_max) {
                return bad("sweep needs 1 ≤ p < ∞ and 1 ≤ sweep_m ≤ 30".into());
            }
        }
        for a in &self.lipschitz_alpha {
            if a.is_empty() || a.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
                return bad("lipschitz_alpha entries must lie in (0,1]".into());
            }
        }
        if self.limit_theta.iter().any(|&t| !(t >= 1.0 && t.is_finite())) {
            return bad("limit_theta must be finite and at least 1".into());
        }
        if !(1..=30).contains(&self.limit_m) || !(1..=30).contains(&self.bbm_m) {
            return bad("limit_m and bbm_m must lie in 1..=30".into());
        }
        if self.bourgain_alpha.iter().any(|&a| !(0.5..1.0).contains(&a)) {
            return bad("bourgain_alpha must lie in [1/2, 1)".into());
        }
        if self.oper_r.iter().any(|&r| !(r == 1 || r == 2)) {
            return bad("oper_r must be 1 or 2".into());
        }
        if self.oper_a.iter().any(|&a| !(a > -1.0 && a.is_finite())) {
            return bad("oper_a must be finite and greater than -1".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        # desk run
        seed = 7
        experiment = embedding
        corpus = hat-multilinear 16x16
        corpus = random-general 8 count=3 seed=99
        p = 1
        p = 3/2
        delta = 1/4
        sigma = 2,1
        embed = beta=0.5,0.5 theta=1,1
        sweep_beta = 0.5,0.5
        sweep_theta = 1,1
        sweep_axes = 1,2
        limit_theta = inf
    ";

    #[test]
    fn parses_sample() {
        let e = ExperimentConfig::parse(SAMPLE);
        assert!(e.is_err(), "limit_theta = inf must be refused");
        let cfg = ExperimentConfig::parse(&SAMPLE.replace("limit_theta = inf", "limit_theta = 2")).unwrap();
        assert_eq!(cfg.experiment, Some(Experiment::Embedding));
        assert_eq!(cfg.p, vec![1.0, 1.5]);
        assert_eq!(cfg.corpus.len(), 2);
        assert_eq!(cfg.corpus[0].seed, 7);
        assert_eq!(cfg.corpus[1].seed, 99);
        assert_eq!(cfg.corpus[1].count, 3);
        assert_eq!(cfg.sigma, SigmaSpec::List(vec![vec![1, 0]]));
        assert_eq!(cfg.sweep.as_ref().unwrap().axes, vec![0, 1]);
        let moved = cfg.with_seed(8);
        assert_eq!(moved.corpus[0].seed, 8);
        assert_eq!(moved.corpus[1].seed, 99);
    }

    #[test]
    fn malformed_configs_are_rejected() {
        for bad in [
            "corpus = hat-multilinear 4",
            "seed = 1\ncorpus = hat-multilinear 4\nfoo = 1",
            "seed = 1\ncorpus = nope 4",
            "seed = 1\ncorpus = hat-multilinear 4\np = 0.5",
            "seed = 1\ncorpus = hat-multilinear 4\nembed = beta=1.2 theta=1",
            "seed = 1\ncorpus = hat-multilinear 4\nsigma = 1,1",
            "seed = 1\nnot an assignment",
        ] {
            assert!(matches!(ExperimentConfig::parse(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn include_is_relative() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("corpus.cfg"), "corpus = indicator-box 4x4\n").unwrap();
        std::fs::write(dir.path().join("main.cfg"), "seed = 3\ninclude = corpus.cfg\n").unwrap();
        let cfg = ExperimentConfig::from_path(&dir.path().join("main.cfg")).unwrap();
        assert_eq!(cfg.corpus[0].shape, vec![4, 4]);
    }
}
