//! Seeded test-function families.
//!
//! | family | domain | notes |
//! |---|---|---|
//! | `indicator-box` | ℝⁿ, origin 0 | `f* = χ_(0,Nv]`; Besov seminorms finite only for `α < 1/p` |
//! | `separable-exp-staircase` | ℝ₊ⁿ | `Π_k exp(-a_k x_k)` at cell centres, random rates; M_dec, values distinct for generic rates |
//! | `anisotropic-staircase` | ℝ₊ⁿ | product of per-axis random staircases, step width `2^k` cells on axis `k`; M_dec with ties |
//! | `hat-multilinear` | ℝⁿ, origin 0 | `Π_k max(0, 1 - |2x_k - 1|)` at cell centres; finite `sup ω_k/δ` |
//! | `random-mdec` | ℝ₊ⁿ | suffix sums of sparse random increments; M_dec |
//! | `random-general` | ℝⁿ, origin 0 | sparse values quantized to sixteenths; ties and zeros |
//!
//! Deterministic families ignore `count` and the seed beyond the member id.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::io::{to_agf_bytes, write_agf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    IndicatorBox,
    SeparableExpStaircase,
    AnisotropicStaircase,
    HatMultilinear,
    RandomMdec,
    RandomGeneral,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::IndicatorBox,
        Family::SeparableExpStaircase,
        Family::AnisotropicStaircase,
        Family::HatMultilinear,
        Family::RandomMdec,
        Family::RandomGeneral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::IndicatorBox => "indicator-box",
            Family::SeparableExpStaircase => "separable-exp-staircase",
            Family::AnisotropicStaircase => "anisotropic-staircase",
            Family::HatMultilinear => "hat-multilinear",
            Family::RandomMdec => "random-mdec",
            Family::RandomGeneral => "random-general",
        }
    }

    /// Members are nonincreasing in every variable on ℝ₊ⁿ.
    pub fn is_mdec(self) -> bool {
        matches!(self, Family::SeparableExpStaircase | Family::AnisotropicStaircase | Family::RandomMdec)
    }

    /// Members have finite `sup_δ ω_k(f;δ)/δ` uniformly in the grid.
    pub fn is_lipschitz(self) -> bool {
        matches!(self, Family::HatMultilinear)
    }

    fn is_deterministic(self) -> bool {
        matches!(self, Family::IndicatorBox | Family::HatMultilinear)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown corpus family '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub family: Family,
    pub shape: Vec<usize>,
    pub cell_sizes: Vec<f64>,
    pub seed: u64,
    pub count: usize,
}

impl CorpusSpec {
    /// Cell sizes `1/L_k`, so the grid covers the unit cube.
    pub fn unit_cube(family: Family, shape: Vec<usize>, seed: u64, count: usize) -> Self {
        let cell_sizes = shape.iter().map(|&l| 1.0 / l as f64).collect();
        CorpusSpec {
            family,
            shape,
            cell_sizes,
            seed,
            count,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.shape.is_empty() || self.shape.contains(&0) {
            return Err(Error::Config("corpus shape needs positive extents".into()));
        }
        if self.cell_sizes.len() != self.shape.len() || self.cell_sizes.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::Config("one positive cell size per axis".into()));
        }
        if self.count == 0 {
            return Err(Error::Config("corpus count must be positive".into()));
        }
        Ok(())
    }

    fn shape_tag(&self) -> String {
        self.shape.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("x")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMember {
    pub id: String,
    pub family: Family,
    pub seed: u64,
    pub index: usize,
    pub function: GridFunction,
}

pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusMember>> {
    spec.validate()?;
    let count = if spec.family.is_deterministic() { 1 } else { spec.count };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..count)
        .map(|index| {
            let function = match spec.family {
                Family::IndicatorBox => indicator_box(spec),
                Family::SeparableExpStaircase => separable_exp(spec, &mut rng),
                Family::AnisotropicStaircase => anisotropic_staircase(spec, &mut rng),
                Family::HatMultilinear => hat(spec),
                Family::RandomMdec => random_mdec(spec, &mut rng),
                Family::RandomGeneral => random_general(spec, &mut rng),
            }?;
            Ok(CorpusMember {
                id: format!("{}-{}-s{}-{}", spec.family, spec.shape_tag(), spec.seed, index),
                family: spec.family,
                seed: spec.seed,
                index,
                function,
            })
        })
        .collect()
}

fn centres(spec: &CorpusSpec, k: usize) -> impl Iterator<Item = f64> + '_ {
    (0..spec.shape[k]).map(move |i| (i as f64 + 0.5) * spec.cell_sizes[k])
}

/// Outer product of per-axis profiles, last axis fastest.
fn product(spec: &CorpusSpec, profiles: &[Vec<f64>]) -> Vec<f64> {
    let mut vals = vec![1.0];
    for prof in profiles {
        vals = vals.iter().flat_map(|&v| prof.iter().map(move |&w| v * w)).collect();
    }
    debug_assert_eq!(vals.len(), spec.shape.iter().product::<usize>());
    vals
}

fn on_line(spec: &CorpusSpec, vals: Vec<f64>) -> Result<GridFunction> {
    GridFunction::new(spec.shape.clone(), spec.cell_sizes.clone(), vec![0.0; spec.shape.len()], vals)
}

fn on_orthant(spec: &CorpusSpec, vals: Vec<f64>) -> Result<GridFunction> {
    GridFunction::on_positive_orthant(spec.shape.clone(), spec.cell_sizes.clone(), vals)
}

fn indicator_box(spec: &CorpusSpec) -> Result<GridFunction> {
    on_line(spec, vec![1.0; spec.shape.iter().product()])
}

fn hat(spec: &CorpusSpec) -> Result<GridFunction> {
    let profiles: Vec<Vec<f64>> = (0..spec.shape.len())
        .map(|k| {
            let len = spec.shape[k] as f64 * spec.cell_sizes[k];
            centres(spec, k).map(|x| (1.0 - (2.0 * x / len - 1.0).abs()).max(0.0)).collect()
        })
        .collect();
    on_line(spec, product(spec, &profiles))
}

fn separable_exp(spec: &CorpusSpec, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let profiles: Vec<Vec<f64>> = (0..spec.shape.len())
        .map(|k| {
            let len = spec.shape[k] as f64 * spec.cell_sizes[k];
            let rate = rng.gen_range(0.5..3.0) / len;
            centres(spec, k).map(|x| (-rate * x).exp()).collect()
        })
        .collect();
    on_orthant(spec, product(spec, &profiles))
}

fn anisotropic_staircase(spec: &CorpusSpec, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let profiles: Vec<Vec<f64>> = (0..spec.shape.len())
        .map(|k| {
            let width = 1usize << k.min(4);
            let steps = spec.shape[k].div_ceil(width);
            let mut level = 1.0;
            let heights: Vec<f64> = (0..steps)
                .map(|_| {
                    let h = level;
                    level -= rng.gen_range(0.2..1.0) / steps as f64;
                    h
                })
                .collect();
            (0..spec.shape[k]).map(|i| heights[i / width].max(0.0)).collect()
        })
        .collect();
    on_orthant(spec, product(spec, &profiles))
}

fn random_mdec(spec: &CorpusSpec, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let len: usize = spec.shape.iter().product();
    let mut vals: Vec<f64> = (0..len)
        .map(|_| if rng.gen_bool(0.4) { f64::from(rng.gen_range(1u8..=8)) / 8.0 } else { 0.0 })
        .collect();
    // suffix sums along every axis keep values nonincreasing per variable
    let strides = strides(&spec.shape);
    for (k, &l) in spec.shape.iter().enumerate() {
        let s = strides[k];
        for lin in (0..len).rev() {
            if (lin / s) % l + 1 < l {
                vals[lin] += vals[lin + s];
            }
        }
    }
    on_orthant(spec, vals)
}

fn random_general(spec: &CorpusSpec, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let len: usize = spec.shape.iter().product();
    let vals = (0..len)
        .map(|_| if rng.gen_bool(0.7) { f64::from(rng.gen_range(1u8..=16)) / 16.0 } else { 0.0 })
        .collect();
    on_line(spec, vals)
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

/// SHA-256 over member ids and AGF bytes, in order, as lowercase hex.
pub fn corpus_hash(members: &[CorpusMember]) -> String {
    let mut h = Sha256::new();
    for m in members {
        h.update((m.id.len() as u64).to_le_bytes());
        h.update(m.id.as_bytes());
        let bytes = to_agf_bytes(&m.function);
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `<id>.agf` per member and an `index.csv`.
pub fn write_corpus(members: &[CorpusMember], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut index = csv::Writer::from_path(dir.join("index.csv"))?;
    index.write_record(["function_id", "family", "seed", "index", "shape", "cell_sizes", "file"])?;
    for m in members {
        let file = format!("{}.agf", m.id);
        write_agf(&m.function, std::io::BufWriter::new(std::fs::File::create(dir.join(&file))?))?;
        let join = |v: Vec<String>| v.join("x");
        index.write_record([
            m.id.clone(),
            m.family.to_string(),
            m.seed.to_string(),
            m.index.to_string(),
            join(m.function.shape().iter().map(|l| l.to_string()).collect()),
            join(m.function.cell_sizes().iter().map(|c| format!("{c:e}")).collect()),
            file,
        ])?;
    }
    index.flush()?;
    let mut hash = std::fs::File::create(dir.join("corpus.sha256"))?;
    writeln!(hash, "{}", corpus_hash(members))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::decreasing_rearrangement;

    #[test]
    fn indicator_box_measure() {
        let m = generate_corpus(&CorpusSpec::unit_cube(Family::IndicatorBox, vec![4, 4], 0, 3)).unwrap();
        assert_eq!(m.len(), 1);
        let f = &m[0].function;
        assert_eq!(f.support_cells(), 16);
        let sf = decreasing_rearrangement(f);
        assert!((sf.support_end() - 16.0 * f.cell_volume()).abs() < 1e-15);
    }

    #[test]
    fn seeded_members_are_reproducible() {
        let spec = CorpusSpec::unit_cube(Family::SeparableExpStaircase, vec![8, 8], 7, 2);
        let a = generate_corpus(&spec).unwrap();
        let b = generate_corpus(&spec).unwrap();
        assert_eq!(to_agf_bytes(&a[1].function), to_agf_bytes(&b[1].function));
        assert_eq!(corpus_hash(&a), corpus_hash(&b));
        let c = generate_corpus(&CorpusSpec { seed: 8, ..spec }).unwrap();
        assert_ne!(corpus_hash(&a), corpus_hash(&c));
    }

    #[test]
    fn mdec_families_pass_the_predicate() {
        for fam in Family::ALL.into_iter().filter(|f| f.is_mdec()) {
            for shape in [vec![9], vec![5, 7], vec![4, 3, 5]] {
                for m in generate_corpus(&CorpusSpec::unit_cube(fam, shape, 3, 4)).unwrap() {
                    assert!(m.function.is_mdec(), "{}", m.id);
                }
            }
        }
    }

    #[test]
    fn unknown_family_is_rejected() {
        assert!("cantor-dust".parse::<Family>().is_err());
        assert_eq!("hat-multilinear".parse::<Family>().unwrap(), Family::HatMultilinear);
    }
}
