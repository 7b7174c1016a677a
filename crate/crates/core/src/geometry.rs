//! Level-set geometry on the cell lattice.
//!
//! Sets are unions of grid cells, so measures and projections are integer
//! counts times a cell volume and every inequality between them is checked in
//! integer arithmetic.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::grid::GridFunction;
use crate::moduli::ModulusCurve;
use crate::rearrange::{iterated_rearrangement, strictify, Permutation, Strictified};
use crate::report::InequalityReport;
use crate::step::power_integral;

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

fn decode(mut lin: usize, strides: &[usize]) -> Vec<usize> {
    strides
        .iter()
        .map(|&s| {
            let i = lin / s;
            lin %= s;
            i
        })
        .collect()
}

/// A union of grid cells, optionally plus a fraction of one more cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSet {
    shape: Vec<usize>,
    cell_sizes: Vec<f64>,
    /// Sorted, distinct linear indices.
    cells: Vec<usize>,
    fractional: Option<(usize, f64)>,
}

impl CellSet {
    pub fn new(shape: Vec<usize>, cell_sizes: Vec<f64>, mut cells: Vec<usize>, fractional: Option<(usize, f64)>) -> Result<Self> {
        if shape.len() != cell_sizes.len() || shape.is_empty() {
            return Err(Error::Validation("shape and cell sizes must have the same nonzero length".into()));
        }
        let total: usize = shape.iter().product();
        cells.sort_unstable();
        if cells.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation("duplicate cell in set".into()));
        }
        if cells.last().is_some_and(|&c| c >= total) {
            return Err(Error::Validation("cell index outside the grid".into()));
        }
        if let Some((c, w)) = fractional {
            if !(w > 0.0 && w < 1.0) || c >= total || cells.binary_search(&c).is_ok() {
                return Err(Error::Validation(
                    "fractional cell must be a grid cell outside the set with weight in (0,1)".into(),
                ));
            }
        }
        Ok(Self {
            shape,
            cell_sizes,
            cells,
            fractional,
        })
    }

    pub fn empty_like(f: &GridFunction) -> Self {
        Self {
            shape: f.shape().to_vec(),
            cell_sizes: f.cell_sizes().to_vec(),
            cells: Vec::new(),
            fractional: None,
        }
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }
    pub fn fractional(&self) -> Option<(usize, f64)> {
        self.fractional
    }
    pub fn count(&self) -> usize {
        self.cells.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty() && self.fractional.is_none()
    }
    pub fn cell_volume(&self) -> f64 {
        self.cell_sizes.iter().product()
    }
    pub fn measure(&self) -> f64 {
        self.cell_volume() * (self.cells.len() as f64 + self.fractional.map_or(0.0, |f| f.1))
    }
    pub fn contains(&self, cell: usize) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }
    pub fn is_subset_of(&self, other: &CellSet) -> bool {
        self.cells.iter().all(|&c| other.contains(c))
    }

    /// Multi-indices of the whole cells, one per line, for audit dumps.
    pub fn index_list(&self) -> String {
        let st = strides_of(&self.shape);
        let mut s = String::new();
        for &c in &self.cells {
            let idx: Vec<String> = decode(c, &st).iter().map(usize::to_string).collect();
            s.push_str(&idx.join(","));
            s.push('\n');
        }
        s
    }

    fn require_whole(&self) -> Result<()> {
        if self.fractional.is_some() {
            return Err(Error::Precondition("set has a fractional cell".into()));
        }
        Ok(())
    }
}

/// Superlevel set `E_t`: the first `t/v` cells of the strict order.
pub fn superlevel_filling(s: &Strictified, t: f64) -> Result<CellSet> {
    let f = s.original();
    let k = f.lattice().cells(t)?;
    if k > s.order().len() {
        return param(format!(
            "t = {t} exceeds the support measure {}",
            f.support_measure()
        ));
    }
    CellSet::new(f.shape().to_vec(), f.cell_sizes().to_vec(), s.order()[..k].to_vec(), None)
}

/// Section measures of a set along one axis, keyed by column.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProfile {
    axis: usize,
    /// Column (multi-index with `axis` removed) to section measure.
    sections: BTreeMap<Vec<usize>, f64>,
    /// Measure of one column's footprint in the projection.
    column_measure: f64,
}

impl ProjectionProfile {
    pub fn axis(&self) -> usize {
        self.axis
    }
    pub fn sections(&self) -> &BTreeMap<Vec<usize>, f64> {
        &self.sections
    }
    /// Number of nonempty columns.
    pub fn columns(&self) -> usize {
        self.sections.len()
    }
    pub fn projection_measure(&self) -> f64 {
        self.column_measure * self.sections.len() as f64
    }
    /// `Σ` section measure × column measure = `|E|`.
    pub fn total_measure(&self) -> f64 {
        self.column_measure * self.sections.values().sum::<f64>()
    }
}

fn column_key(idx: &[usize], axis: usize) -> Vec<usize> {
    idx.iter()
        .enumerate()
        .filter(|&(k, _)| k != axis)
        .map(|(_, &i)| i)
        .collect()
}

/// A fractional boundary cell adds its fraction to its column's section and
/// counts as a whole column in the projection.
pub fn projection_profile(e: &CellSet, axis: usize) -> Result<ProjectionProfile> {
    if axis >= e.dims() {
        return param(format!("axis {} out of range", axis + 1));
    }
    let st = strides_of(&e.shape);
    let c = e.cell_sizes[axis];
    let mut sections: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for &cell in &e.cells {
        *sections.entry(column_key(&decode(cell, &st), axis)).or_default() += c;
    }
    if let Some((cell, w)) = e.fractional {
        *sections.entry(column_key(&decode(cell, &st), axis)).or_default() += w * c;
    }
    let column_measure = e.cell_volume() / c;
    Ok(ProjectionProfile {
        axis,
        sections,
        column_measure,
    })
}

/// Number of nonempty columns along `axis`.
fn column_count(cells: &[usize], strides: &[usize], axis: usize) -> usize {
    let mut keys: Vec<usize> = cells
        .iter()
        .map(|&c| {
            // linear index with the axis coordinate zeroed identifies the column
            let coord = match axis {
                0 => c / strides[0],
                _ => (c / strides[axis]) % (strides[axis - 1] / strides[axis]),
            };
            c - coord * strides[axis]
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

/// `(mes E)^{n-1} ≤ Π_k mes Π_k(E)`, checked on cell counts in exact
/// integer arithmetic (both sides in units of `v^{n-1}`).
pub fn loomis_whitney_check(e: &CellSet, function_id: &str) -> Result<InequalityReport> {
    e.require_whole()?;
    let n = e.dims();
    let st = strides_of(&e.shape);
    let count = e.count() as u128;
    let proj: Vec<u128> = (0..n).map(|k| column_count(&e.cells, &st, k) as u128).collect();
    let params = serde_json::json!({ "n": n, "cells": e.count(), "projections": proj.iter().map(|&x| x as u64).collect::<Vec<_>>() });
    if count == 0 {
        return Ok(InequalityReport::degenerate("loomis-whitney", function_id, params, 1.0));
    }
    let (holds, lhs, rhs) = lw_counts(count, &proj);
    Ok(InequalityReport::decided("loomis-whitney", function_id, params, lhs, rhs, holds))
}

/// Integer comparison `N^{n-1} ≤ Π P_k`, saturating on overflow.
fn lw_counts(count: u128, proj: &[u128]) -> (bool, f64, f64) {
    let n = proj.len();
    let lhs = (0..n - 1).try_fold(1u128, |acc, _| acc.checked_mul(count));
    let rhs = proj.iter().try_fold(1u128, |acc, &p| acc.checked_mul(p));
    let holds = match (lhs, rhs) {
        (Some(l), Some(r)) => l <= r,
        _ => {
            // compare in log space only when the integers overflow
            ((n - 1) as f64) * (count as f64).ln() <= proj.iter().map(|&p| (p as f64).ln()).sum::<f64>()
        }
    };
    let lhs_f = (count as f64).powi(n as i32 - 1);
    let rhs_f = proj.iter().map(|&p| p as f64).product();
    (holds, lhs_f, rhs_f)
}

/// One greedy step: whole columns of `cells` along `axis`, largest section
/// first (ties by column index), until at least `need` cells are taken.
/// Returns the selected cells (sorted) and the number of columns used.
fn greedy_columns(cells: &[usize], strides: &[usize], axis: usize, need: usize) -> (Vec<usize>, usize) {
    let mut cols: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &c in cells {
        cols.entry(column_key(&decode(c, strides), axis)).or_default().push(c);
    }
    let mut cols: Vec<(Vec<usize>, Vec<usize>)> = cols.into_iter().collect();
    // stable sort keeps the lexicographic key order among equal sections
    cols.sort_by_key(|c| std::cmp::Reverse(c.1.len()));
    let mut out = Vec::new();
    let mut used = 0;
    for (_, members) in cols {
        if out.len() >= need {
            break;
        }
        out.extend(members);
        used += 1;
    }
    out.sort_unstable();
    (out, used)
}

/// Nested sets `E = E_0 ⊃ E_1 ⊃ … ⊃ E_n`: `E_j` is the fewest whole columns
/// of `E_{j-1}` along axis `j` holding at least `2^{-j}|E|`.
///
/// Taking the largest sections first makes the projection of `E_j` minimal
/// among all subsets of `E_{j-1}` with at least that many cells.
pub fn minimal_projection_chain(e: &CellSet) -> Result<Vec<CellSet>> {
    e.require_whole()?;
    if e.is_empty() {
        return Ok(Vec::new());
    }
    let n = e.dims();
    let st = strides_of(&e.shape);
    let n0 = e.count();
    let mut chain = vec![e.clone()];
    for j in 1..=n {
        let need = n0.div_ceil(1usize << j);
        let (cells, _) = greedy_columns(chain[j - 1].cells(), &st, j - 1, need);
        chain.push(CellSet {
            shape: e.shape.clone(),
            cell_sizes: e.cell_sizes.clone(),
            cells,
            fractional: None,
        });
    }
    Ok(chain)
}

/// Which lattice measures the gauge is built at.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeGrid {
    /// Every even cell count up to the support.
    AllEven,
    /// Explicit measures, each a multiple of two cell volumes.
    Measures(Vec<f64>),
}

/// Gauge data at one lattice measure `t = k v`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePoint {
    pub cells: usize,
    pub t: f64,
    /// `μ_j(t) = 2^{(n²-1)/n} mes Π_j(G_{t,j})`.
    pub mu: Vec<f64>,
    /// `u_j(t) = t / μ_j(t)`.
    pub u: Vec<f64>,
    /// `|G_{t,j}|` in cells for `j = 0..=n`.
    pub chain_cells: Vec<usize>,
    /// Columns of `Π_j(G_{t,j})` for `j = 1..=n`.
    pub projections: Vec<usize>,
    /// `k^{n-1} ≤ 2^{n²-1} Π_j P_j`, i.e. `Π u_j(t) ≤ t`, decided on integers.
    pub product_bound_holds: bool,
    /// Loomis–Whitney held for every set of the chain.
    pub loomis_whitney_holds: bool,
    /// `2^{-j-1} t ≤ |G_{t,j}| < 2^{-j-1} t + largest section`, for every `j`.
    pub band_holds: bool,
}

impl GaugePoint {
    pub fn u_product(&self) -> f64 {
        self.u.iter().product()
    }
}

/// The functions `u_j` on the measure lattice for `strictify(R_σ f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropicGauge {
    sigma: Permutation,
    cell_volume: f64,
    points: Vec<GaugePoint>,
    /// The grid asked for measures beyond the support (or the support has a
    /// single cell); those points were skipped.
    degenerate: bool,
}

impl AnisotropicGauge {
    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }
    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }
    pub fn points(&self) -> &[GaugePoint] {
        &self.points
    }
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
    pub fn dims(&self) -> usize {
        self.sigma.len()
    }

    /// Indices of the points in `Ω_j(h) = {t : u_j(t) ≥ h}`.
    pub fn omega_members(&self, j: usize, h: f64) -> Vec<usize> {
        (0..self.points.len()).filter(|&m| self.points[m].u[j] >= h).collect()
    }

    /// Rows `(t, j, mu_j, u_j, achieved_G_measure_j, projection_measure_j)`
    /// with `j` 1-based.
    pub fn write_csv<W: Write>(&self, cell_sizes: &[f64], w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "j", "mu_j", "u_j", "achieved_G_measure_j", "projection_measure_j"])?;
        for pt in &self.points {
            for j in 0..pt.mu.len() {
                let col = self.cell_volume / cell_sizes[j];
                out.write_record([
                    format!("{:e}", pt.t),
                    (j + 1).to_string(),
                    format!("{:e}", pt.mu[j]),
                    format!("{:e}", pt.u[j]),
                    format!("{:e}", pt.chain_cells[j + 1] as f64 * self.cell_volume),
                    format!("{:e}", pt.projections[j] as f64 * col),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Builds the gauge of `f` for the order `σ`: `E_t` from the strict order of
/// `R_σ f`, `G_t = E_t \ E_{t/2}`, the projection chain of `G_t`, and
/// `μ_j`, `u_j` from its projections.
pub fn build_gauge(f: &GridFunction, sigma: &Permutation, grid: &GaugeGrid) -> Result<AnisotropicGauge> {
    if sigma.len() != f.dims() {
        return param("permutation length must match the dimension");
    }
    let s = strictify(&iterated_rearrangement(f, sigma)?)?;
    let g = s.original();
    let n = g.dims();
    let v = g.cell_volume();
    let support = s.order().len();
    let lattice = g.lattice();
    let mut degenerate = false;
    let ks: Vec<usize> = match grid {
        GaugeGrid::AllEven => (1..=support / 2).map(|h| 2 * h).collect(),
        GaugeGrid::Measures(ts) => {
            let mut ks = Vec::with_capacity(ts.len());
            for &t in ts {
                let k = lattice.aligned_cells(t, 2)?;
                if k == 0 {
                    return param("gauge measures must be positive");
                }
                if k > support {
                    degenerate = true;
                } else {
                    ks.push(k);
                }
            }
            ks
        }
    };
    if support < 2 {
        degenerate = true;
    }
    let st = strides_of(g.shape());
    let scale = 2f64.powf((n * n - 1) as f64 / n as f64);
    let points = ks
        .par_iter()
        .map(|&k| {
            let mut g_t: Vec<usize> = s.order()[k / 2..k].to_vec();
            g_t.sort_unstable();
            let mut chain_cells = vec![g_t.len()];
            let mut projections = Vec::with_capacity(n);
            let mut lw = lw_on(&g_t, &st);
            let mut band = true;
            let mut current = g_t;
            for j in 1..=n {
                // target 2^{-j-1} t = 2^{-j} |G_t| cells
                let need = k.div_ceil(1usize << (j + 1));
                let max_section = max_section(&current, &st, j - 1);
                let (next, _) = greedy_columns(&current, &st, j - 1, need);
                let got = next.len();
                band &= got * (1 << (j + 1)) >= k && (got - need.min(got)) < max_section.max(1);
                lw &= lw_on(&next, &st);
                projections.push(column_count(&next, &st, j - 1));
                chain_cells.push(got);
                current = next;
            }
            let mu: Vec<f64> = (0..n)
                .map(|j| scale * projections[j] as f64 * v / g.cell_sizes()[j])
                .collect();
            let t = lattice.measure(k);
            let u = mu.iter().map(|m| t / m).collect();
            // k^{n-1} ≤ 2^{n²-1} Π P_j
            let lhs = (0..n - 1).try_fold(1u128, |a, _| a.checked_mul(k as u128));
            let rhs = projections
                .iter()
                .try_fold(1u128 << (n * n - 1), |a, &p| a.checked_mul(p as u128));
            let product_bound_holds = match (lhs, rhs) {
                (Some(l), Some(r)) => l <= r,
                _ => false,
            };
            GaugePoint {
                cells: k,
                t,
                mu,
                u,
                chain_cells,
                projections,
                product_bound_holds,
                loomis_whitney_holds: lw,
                band_holds: band,
            }
        })
        .collect();
    Ok(AnisotropicGauge {
        sigma: sigma.clone(),
        cell_volume: v,
        points,
        degenerate,
    })
}

fn lw_on(cells: &[usize], st: &[usize]) -> bool {
    if cells.is_empty() {
        return true;
    }
    let proj: Vec<u128> = (0..st.len()).map(|k| column_count(cells, st, k) as u128).collect();
    lw_counts(cells.len() as u128, &proj).0
}

fn max_section(cells: &[usize], st: &[usize], axis: usize) -> usize {
    let mut cols: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for &c in cells {
        *cols.entry(column_key(&decode(c, st), axis)).or_default() += 1;
    }
    cols.values().copied().max().unwrap_or(0)
}

fn require_orthant(phi: &GridFunction) -> Result<()> {
    if phi.origin().iter().any(|&o| o != 0.0) {
        return Err(Error::Precondition("operator T acts on functions given on the positive orthant (origin 0)".into()));
    }
    Ok(())
}

/// `|[x/2, x] ∩ [l, h]|`.
fn overlap(x: f64, l: f64, h: f64) -> f64 {
    (x.min(h) - (0.5 * x).max(l)).max(0.0)
}

/// `Tφ(x) = |Q(x)|^{-1} ∫_{Q(x)} φ` with `Q(x) = Π_k [x_k/2, x_k]`.
pub fn box_average(phi: &GridFunction, x: &[f64]) -> Result<f64> {
    require_orthant(phi)?;
    if x.len() != phi.dims() {
        return param("point dimension does not match the grid");
    }
    if x.iter().any(|&xi| !(xi > 0.0 && xi.is_finite())) {
        return param("operator T needs strictly positive coordinates");
    }
    let n = phi.dims();
    // per-axis normalised overlap weights over the cells that meet [x/2, x]
    let weights: Vec<(usize, Vec<f64>)> = (0..n)
        .map(|k| {
            let c = phi.cell_sizes()[k];
            let len = phi.shape()[k];
            let lo = ((0.5 * x[k] / c).floor() as usize).min(len);
            let hi = ((x[k] / c).ceil() as usize).min(len);
            let w = (lo..hi)
                .map(|i| overlap(x[k], i as f64 * c, (i + 1) as f64 * c) / (0.5 * x[k]))
                .collect();
            (lo, w)
        })
        .collect();
    if weights.iter().any(|(_, w)| w.is_empty()) {
        return Ok(0.0);
    }
    let mut idx: Vec<usize> = vec![0; n];
    let mut total = 0.0;
    'outer: loop {
        let mut w = 1.0;
        let mut cell = Vec::with_capacity(n);
        for k in 0..n {
            w *= weights[k].1[idx[k]];
            cell.push(weights[k].0 + idx[k]);
        }
        if w > 0.0 {
            total += w * phi.get(&cell);
        }
        for k in (0..n).rev() {
            idx[k] += 1;
            if idx[k] < weights[k].1.len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(total)
}

/// `Tφ` evaluated at every cell's upper corner, on the same grid.
pub fn box_average_field(phi: &GridFunction) -> Result<GridFunction> {
    require_orthant(phi)?;
    let vals = (0..phi.len())
        .into_par_iter()
        .map(|lin| {
            let x: Vec<f64> = phi
                .multi_index(lin)
                .iter()
                .zip(phi.cell_sizes())
                .map(|(&i, &c)| (i + 1) as f64 * c)
                .collect();
            box_average(phi, &x)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(phi.with_values(vals))
}

/// Worst `φ(x) / Tφ(x)` over cell upper corners and cell centres; at most 1
/// for `φ` nonincreasing in every variable.
pub fn monotone_domination_ratio(phi: &GridFunction) -> Result<f64> {
    require_orthant(phi)?;
    let worst = (0..phi.len())
        .into_par_iter()
        .map(|lin| -> Result<f64> {
            let idx = phi.multi_index(lin);
            let v = phi.values()[lin];
            if v == 0.0 {
                return Ok(0.0);
            }
            let mut w: f64 = 0.0;
            for shift in [1.0, 0.5] {
                let x: Vec<f64> = idx
                    .iter()
                    .zip(phi.cell_sizes())
                    .map(|(&i, &c)| (i as f64 + shift) * c)
                    .collect();
                let t = box_average(phi, &x)?;
                w = w.max(if t == 0.0 { f64::INFINITY } else { v / t });
            }
            Ok(w)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// Linear pieces `(lo, hi, α, β)` of `x ↦ |[x/2, x] ∩ [l, h]| = α + βx`.
fn overlap_pieces(l: f64, h: f64) -> Vec<(f64, f64, f64, f64)> {
    let mut br = vec![l, h, 2.0 * l, 2.0 * h];
    br.sort_by(f64::total_cmp);
    br.dedup();
    let mut out = Vec::new();
    for w in br.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        if overlap(mid, l, h) <= 0.0 {
            continue;
        }
        // min(x, h) and max(x/2, l) are each affine on the piece
        let (a1, b1) = if mid < h { (0.0, 1.0) } else { (h, 0.0) };
        let (a2, b2) = if mid / 2.0 > l { (0.0, 0.5) } else { (l, 0.0) };
        out.push((a, b, a1 - a2, b1 - b2));
    }
    out
}

/// `∫ Σ_m coef[m] x^{m + e - 1} dx` over `[lo, hi]`, skipping zero terms.
fn poly_power_integral(coef: &[f64], e: f64, lo: f64, hi: f64) -> f64 {
    coef.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(m, &c)| c * power_integral(m as f64 + e, lo, hi))
        .sum()
}

/// Both sides of `∫ (Tφ)^r π^a ≤ 2^{max(1,a) n} ∫ φ^r π^a` over ℝ₊ⁿ, in
/// closed form (the averaged function is a sum of products of per-axis
/// piecewise-linear overlaps). Supports `r ∈ {1, 2}`.
pub fn operator_bound_sides(phi: &GridFunction, r: u32, a: f64) -> Result<(f64, f64)> {
    require_orthant(phi)?;
    if !(r == 1 || r == 2) {
        return param(format!("closed-form operator bound supports r ∈ {{1, 2}}, got {r}"));
    }
    if !(a > -1.0) {
        return param(format!("weight exponent must exceed -1 for local integrability, got {a}"));
    }
    let n = phi.dims();
    let axes: Vec<Vec<Vec<(f64, f64, f64, f64)>>> = (0..n)
        .map(|k| {
            let c = phi.cell_sizes()[k];
            (0..phi.shape()[k])
                .map(|i| overlap_pieces(i as f64 * c, (i + 1) as f64 * c))
                .collect()
        })
        .collect();
    let rhs: f64 = phi
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(lin, &v)| {
            let idx = phi.multi_index(lin);
            let w: f64 = (0..n)
                .map(|k| {
                    let c = phi.cell_sizes()[k];
                    power_integral(a + 1.0, idx[k] as f64 * c, (idx[k] + 1) as f64 * c)
                })
                .product();
            v.powi(r as i32) * w
        })
        .sum();
    let support: Vec<(Vec<usize>, f64)> = phi
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(lin, &v)| (phi.multi_index(lin), v))
        .collect();
    let lhs = if r == 1 {
        // 2^n Σ_c φ_c Π_k ∫ ov_k(x) x^{a-1} dx
        let single: Vec<Vec<f64>> = axes
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .map(|pieces| pieces.iter().map(|&(lo, hi, al, be)| poly_power_integral(&[al, be], a, lo, hi)).sum())
                    .collect()
            })
            .collect();
        2f64.powi(n as i32)
            * support
                .iter()
                .map(|(idx, v)| v * (0..n).map(|k| single[k][idx[k]]).product::<f64>())
                .sum::<f64>()
    } else {
        // 4^n Σ_{c,c'} φ_c φ_c' Π_k ∫ ov ov' x^{a-2} dx
        let pair = |k: usize, i: usize, j: usize| -> f64 {
            let mut s = 0.0;
            for &(lo1, hi1, a1, b1) in &axes[k][i] {
                for &(lo2, hi2, a2, b2) in &axes[k][j] {
                    let (lo, hi) = (lo1.max(lo2), hi1.min(hi2));
                    if hi > lo {
                        s += poly_power_integral(&[a1 * a2, a1 * b2 + b1 * a2, b1 * b2], a - 1.0, lo, hi);
                    }
                }
            }
            s
        };
        let tables: Vec<Vec<Vec<f64>>> = (0..n)
            .map(|k| {
                let len = phi.shape()[k];
                (0..len).map(|i| (0..len).map(|j| pair(k, i, j)).collect()).collect()
            })
            .collect();
        let parts: Vec<f64> = support
            .par_iter()
            .map(|(ia, va)| {
                support
                    .iter()
                    .map(|(ib, vb)| va * vb * (0..n).map(|k| tables[k][ia[k]][ib[k]]).product::<f64>())
                    .sum()
            })
            .collect();
        4f64.powi(n as i32) * parts.iter().sum::<f64>()
    };
    Ok((lhs, rhs))
}

/// Both sides of
/// `(∫_{ℝ₊^{n-1}} ∫_h^∞ u^{-p} [f(u, t̂) - f(μu, t̂)]^p du dt̂)^{1/p} ≤ 4μ ω_k(f;h)_p / h`
/// for `f` nonincreasing in every variable on ℝ₊ⁿ.
pub fn axis_decrement_sides(f: &GridFunction, axis: usize, h: f64, mu: f64, p: f64) -> Result<(f64, f64)> {
    if !f.is_mdec() {
        return Err(Error::Precondition("axis decrement bound needs a function nonincreasing in every variable on ℝ₊ⁿ".into()));
    }
    if axis >= f.dims() {
        return param("axis out of range");
    }
    if !(mu > 1.0 && h > 0.0 && p >= 1.0) {
        return param(format!("need μ > 1, h > 0, p ≥ 1 (got μ={mu}, h={h}, p={p})"));
    }
    let c = f.cell_sizes()[axis];
    let len = f.shape()[axis];
    let mut br: Vec<f64> = (0..=len)
        .flat_map(|i| [i as f64 * c, i as f64 * c / mu])
        .filter(|&b| b > h)
        .collect();
    br.push(h);
    br.sort_by(f64::total_cmp);
    br.dedup();
    let col = f.cell_volume() / c;
    let at = |sec: &[f64], u: f64| -> f64 {
        let i = (u / c).floor() as usize;
        sec.get(i).copied().unwrap_or(0.0)
    };
    let mut total = 0.0;
    for start in f.section_starts(axis) {
        let sec = f.section(axis, start);
        for w in br.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let d = at(&sec, mid) - at(&sec, mu * mid);
            if d > 0.0 {
                total += col * d.powf(p) * power_integral(1.0 - p, w[0], w[1]);
            }
        }
    }
    let omega = ModulusCurve::new(f, axis, p)?.omega(h);
    Ok((total.powf(1.0 / p), 4.0 * mu * omega / h))
}
