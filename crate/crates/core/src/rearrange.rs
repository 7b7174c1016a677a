//! Distribution functions and nonincreasing rearrangements.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::grid::{AxisDomain, GridFunction};
use crate::step::StepFunction;

/// Order in which axes are rearranged, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &k in &order {
            if k >= n || seen[k] {
                return param(format!("{order:?} is not a permutation of 0..{n}"));
            }
            seen[k] = true;
        }
        Ok(Self(order))
    }

    /// From axis labels `1..=n`.
    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return param("one-based axis labels start at 1");
        }
        Self::new(order.iter().map(|k| k - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Self(cur.clone())];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Self(cur.clone()));
        }
    }

    pub fn axes(&self) -> &[usize] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.0.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "({})", labels.join(","))
    }
}

/// `λ_f(y) = v · #{cells : value > y}`.
pub fn distribution(f: &GridFunction, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return param(format!("distribution level must be ≥ 0, got {y}"));
    }
    let count = f.values().iter().filter(|v| **v > y).count();
    Ok(count as f64 * f.cell_volume())
}

fn descending(a: &f64, b: &f64) -> Ordering {
    b.total_cmp(a)
}

/// The left-continuous nonincreasing rearrangement `f*` as an exact step
/// function with breakpoints at multiples of the cell volume.
pub fn decreasing_rearrangement(f: &GridFunction) -> StepFunction {
    let mut vals: Vec<f64> = f.values().iter().copied().filter(|v| *v > 0.0).collect();
    vals.sort_unstable_by(descending);
    let v = f.cell_volume();
    let breaks = (1..=vals.len()).map(|k| k as f64 * v).collect();
    StepFunction::new(breaks, vals).expect("sorted cell values form a valid step function")
}

/// Sorts every 1-D section along `axis` in nonincreasing order. The axis is
/// reinterpreted as ℝ₊ anchored at 0.
pub fn axis_rearrangement(f: &GridFunction, axis: usize) -> Result<GridFunction> {
    if axis >= f.dims() {
        return param(format!("axis {} out of range for a {}-dimensional grid", axis + 1, f.dims()));
    }
    let stride = f.strides()[axis];
    let starts = f.section_starts(axis);
    let sorted: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&s| {
            let mut sec = f.section(axis, s);
            sec.sort_unstable_by(descending);
            sec
        })
        .collect();
    let mut values = f.values().to_vec();
    for (s, sec) in starts.iter().zip(sorted) {
        for (i, v) in sec.into_iter().enumerate() {
            values[s + i * stride] = v;
        }
    }
    let mut domains = f.domains().to_vec();
    domains[axis] = AxisDomain::HalfLine;
    Ok(f.with_values(values).with_domains(domains))
}

/// `R_σ f = R_{k_n} ⋯ R_{k_1} f`.
pub fn iterated_rearrangement(f: &GridFunction, sigma: &Permutation) -> Result<GridFunction> {
    if sigma.len() != f.dims() {
        return param(format!(
            "permutation {sigma} has {} entries for a {}-dimensional grid",
            sigma.len(),
            f.dims()
        ));
    }
    sigma
        .axes()
        .iter()
        .try_fold(f.clone(), |g, &k| axis_rearrangement(&g, k))
}

/// A coordinatewise nonincreasing function with a strict total order on its
/// support: value descending, ties broken by ascending linear cell index.
#[derive(Debug, Clone)]
pub struct Strictified {
    original: GridFunction,
    order: Vec<usize>,
    rank: Vec<usize>,
    jitter_step: f64,
}

impl Strictified {
    pub fn original(&self) -> &GridFunction {
        &self.original
    }

    /// Support cells (linear indices) from largest to smallest.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Rank of a cell in the strict order, `None` off the support.
    pub fn rank(&self, cell: usize) -> Option<usize> {
        let r = self.rank[cell];
        (r != usize::MAX).then_some(r)
    }

    pub fn jitter_step(&self) -> f64 {
        self.jitter_step
    }

    /// Values with the deterministic jitter `η (N - rank)` added on the support.
    /// Used only to realise the order; norms are always taken from
    /// [`Self::original`].
    pub fn jittered(&self) -> GridFunction {
        let n = self.order.len();
        let mut vals = self.original.values().to_vec();
        for (r, &c) in self.order.iter().enumerate() {
            vals[c] += self.jitter_step * (n - r) as f64;
        }
        self.original.with_values(vals)
    }
}

/// Builds the strict order for an `f` that is nonincreasing in every variable
/// on ℝ₊ⁿ.
pub fn strictify(f: &GridFunction) -> Result<Strictified> {
    if !f.is_mdec() {
        return Err(Error::Precondition(
            "strictify needs a function on the positive orthant that is nonincreasing in every variable".into(),
        ));
    }
    let vals = f.values();
    let mut order: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.0).collect();
    order.sort_by(|&a, &b| descending(&vals[a], &vals[b]).then(a.cmp(&b)));
    let mut rank = vec![usize::MAX; vals.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let mut gap = order.last().map_or(1.0, |&c| vals[c]);
    for w in order.windows(2) {
        let d = vals[w[0]] - vals[w[1]];
        if d > 0.0 && d < gap {
            gap = d;
        }
    }
    let jitter_step = gap / (4.0 * vals.len().max(1) as f64);
    Ok(Strictified {
        original: f.clone(),
        order,
        rank,
        jitter_step,
    })
}

/// `t ↦ g(t) - g(2t)` for a nonincreasing step function `g`.
pub fn dyadic_decrement(sf: &StepFunction) -> Result<StepFunction> {
    if !sf.is_nonincreasing() {
        return Err(Error::Precondition("dyadic decrement needs a nonincreasing step function".into()));
    }
    let mut breaks: Vec<f64> = sf
        .breakpoints()
        .iter()
        .flat_map(|&t| [t, t / 2.0])
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let values = breaks.iter().map(|&b| sf.eval(b) - sf.eval(2.0 * b)).collect();
    StepFunction::new(breaks, values)
}
