//! Lorentz, mixed Lorentz, Besov, Lipschitz and Gagliardo functionals, and
//! the anisotropic exponent algebra.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::grid::GridFunction;
use crate::moduli::{ModulusCurve, ScaleIntegral, ScaleSup};
use crate::rearrange::{iterated_rearrangement, Permutation};
use crate::step::StepFunction;

fn check_exponents(p: f64, r: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return param(format!("Lorentz exponent p must be in (0, ∞), got {p}"));
    }
    if !(r > 0.0) {
        return param(format!("secondary index r must be in (0, ∞], got {r}"));
    }
    Ok(())
}

/// `‖f‖_{p,r} = (∫_0^∞ (t^{1/p} f*(t))^r dt/t)^{1/r}` for a rearrangement
/// given as a step function; `r = ∞` gives `sup_t t^{1/p} f*(t)`.
pub fn lorentz_norm(sf: &StepFunction, p: f64, r: f64) -> Result<f64> {
    check_exponents(p, r)?;
    if r.is_infinite() {
        return Ok(sf.weighted_sup(1.0 / p).0);
    }
    let e = r / p;
    let s: f64 = sf
        .pieces()
        .map(|(a, b, v)| v.powf(r) * (b.powf(e) - a.powf(e)) / e)
        .sum();
    Ok(s.powf(1.0 / r))
}

/// `‖g‖_{p,r;σ} = (∫_{ℝ₊ⁿ} [π(t)^{1/p} g(t)]^r dt/π(t))^{1/r}` with
/// `π(t) = Π t_k`, for `g` already of the form `R_σ f`.
///
/// The weight factorises, so each cell contributes
/// `g^r Π_k (b_k^{r/p} - a_k^{r/p}) / (r/p)`.
pub fn mixed_lorentz_norm(g: &GridFunction, p: f64, r: f64) -> Result<f64> {
    check_exponents(p, r)?;
    if !g.is_mdec() {
        return Err(Error::Precondition(
            "mixed Lorentz norm needs a function nonincreasing in each variable on the positive orthant".into(),
        ));
    }
    let n = g.dims();
    let c = g.cell_sizes();
    let shape = g.shape();
    if r.is_infinite() {
        let mut best: f64 = 0.0;
        for (lin, &v) in g.values().iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let idx = g.multi_index(lin);
            let w: f64 = (0..n).map(|k| ((idx[k] + 1) as f64 * c[k]).powf(1.0 / p)).product();
            best = best.max(v * w);
        }
        return Ok(best);
    }
    let e = r / p;
    // per-axis 1-D factors, one per index
    let factors: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            (0..shape[k])
                .map(|i| {
                    let (a, b) = (i as f64 * c[k], (i + 1) as f64 * c[k]);
                    (b.powf(e) - a.powf(e)) / e
                })
                .collect()
        })
        .collect();
    let s: f64 = g
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(lin, &v)| {
            let idx = g.multi_index(lin);
            v.powf(r) * (0..n).map(|k| factors[k][idx[k]]).product::<f64>()
        })
        .sum();
    Ok(s.powf(1.0 / r))
}

/// Mixed Lorentz norm of `R_σ f`.
pub fn rearranged_mixed_lorentz_norm(f: &GridFunction, sigma: &Permutation, p: f64, r: f64) -> Result<f64> {
    mixed_lorentz_norm(&iterated_rearrangement(f, sigma)?, p, r)
}

fn check_alpha(alpha: f64, allow_one: bool) -> Result<()> {
    let ok = alpha > 0.0 && (alpha < 1.0 || (allow_one && alpha == 1.0));
    if !ok {
        let range = if allow_one { "(0,1]" } else { "(0,1)" };
        return param(format!("smoothness α must lie in {range}, got {alpha}"));
    }
    Ok(())
}

/// `‖f‖_{b^α_{p,θ;k}} = (∫_0^∞ (t^{-α} ω_k(f;t)_p)^θ dt/t)^{1/θ}`.
///
/// The constant tail beyond the saturation scale is integrated in closed
/// form; the scales below one cell are included when `α < 1/p` and skipped
/// otherwise. The window actually used is returned with the value.
pub fn besov_seminorm(f: &GridFunction, axis: usize, alpha: f64, theta: f64, p: f64) -> Result<ScaleIntegral> {
    check_alpha(alpha, false)?;
    if !(theta >= 1.0) {
        return param(format!("θ must be ≥ 1, got {theta}"));
    }
    Ok(ModulusCurve::new(f, axis, p)?.besov_integral(alpha, theta))
}

/// `‖f‖_{λ^α_{p;k}} = sup_{δ>0} ω_k(f;δ)_p / δ^α`, with the scale where the
/// sup is attained.
pub fn lipschitz_seminorm(f: &GridFunction, axis: usize, alpha: f64, p: f64) -> Result<ScaleSup> {
    check_alpha(alpha, true)?;
    Ok(ModulusCurve::new(f, axis, p)?.weighted_sup(alpha))
}

/// Largest grid accepted by [`gagliardo_seminorm`].
pub const GAGLIARDO_MAX_CELLS: usize = 10_000;

/// `∫∫ |f(x) - f(y)|^p / |x - y|^{n+αp} dx dy` (the p-th power of the
/// Gagliardo seminorm).
///
/// In one dimension every cell pair and the interaction with the exterior
/// are integrated exactly. In higher dimensions cell pairs use the midpoint
/// rule, neighbours within two cells are refined into subcells, and the
/// exterior beyond a two-cell zero padding is approximated by a spherical
/// shell. A piecewise-constant function with a jump is not in the space when
/// `αp ≥ 1`, and the result is then `∞`.
pub fn gagliardo_seminorm(f: &GridFunction, alpha: f64, p: f64) -> Result<f64> {
    check_alpha(alpha, false)?;
    if !(p >= 1.0 && p.is_finite()) {
        return param(format!("p must satisfy 1 ≤ p < ∞, got {p}"));
    }
    if f.len() > GAGLIARDO_MAX_CELLS {
        return Err(Error::Resource(format!(
            "Gagliardo double sum limited to {GAGLIARDO_MAX_CELLS} cells, grid has {}",
            f.len()
        )));
    }
    if f.support_cells() == 0 {
        return Ok(0.0);
    }
    let s = alpha * p;
    if s >= 1.0 {
        return Ok(f64::INFINITY);
    }
    if f.dims() == 1 {
        Ok(gagliardo_1d(f, s, p))
    } else {
        Ok(gagliardo_nd(f, s, p))
    }
}

fn gagliardo_1d(f: &GridFunction, s: f64, p: f64) -> f64 {
    // K'' = -u^{-1-s}
    let k = |u: f64| u.powf(1.0 - s) / (s * (1.0 - s));
    let c = f.cell_sizes()[0];
    let g = f.values();
    let len = g.len();
    let mut total = 0.0;
    for i in 0..len {
        let (a1, b1) = (i as f64 * c, (i + 1) as f64 * c);
        for (j, &gj) in g.iter().enumerate().skip(i + 1) {
            let d = (g[i] - gj).abs();
            if d == 0.0 {
                continue;
            }
            let (a2, b2) = (j as f64 * c, (j + 1) as f64 * c);
            let pair = k(b2 - b1) - k(b2 - a1) - k(a2 - b1) + k(a2 - a1);
            total += 2.0 * d.powf(p) * pair;
        }
        if g[i] > 0.0 {
            let right = len as f64 * c;
            let ext = (k(b1) - k(a1)) + (k(right - a1) - k(right - b1));
            total += 2.0 * g[i].powf(p) * ext;
        }
    }
    total
}

fn gamma_half_integer(n: usize) -> f64 {
    // Γ(n/2)
    if n.is_multiple_of(2) {
        (1..n / 2).map(|k| k as f64).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < n as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

fn gagliardo_nd(f: &GridFunction, s: f64, p: f64) -> f64 {
    const PAD: usize = 2;
    let n = f.dims();
    let c = f.cell_sizes().to_vec();
    let shape: Vec<usize> = f.shape().iter().map(|&l| l + 2 * PAD).collect();
    let count: usize = shape.iter().product();
    let mut strides = vec![1usize; n];
    for k in (0..n - 1).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    let decode = |mut lin: usize| -> Vec<isize> {
        let mut idx = vec![0isize; n];
        for k in 0..n {
            idx[k] = (lin / strides[k]) as isize;
            lin %= strides[k];
        }
        idx
    };
    let padded: Vec<f64> = (0..count)
        .map(|lin| {
            let idx = decode(lin);
            if idx.iter().zip(f.shape()).all(|(&i, &l)| i >= PAD as isize && i < (l + PAD) as isize) {
                let orig: Vec<usize> = idx.iter().map(|&i| i as usize - PAD).collect();
                f.get(&orig)
            } else {
                0.0
            }
        })
        .collect();
    let vol: f64 = c.iter().product();
    let expo = n as f64 + s;
    let refine: usize = if n <= 2 { 4 } else { 2 };
    let sub_offsets: Vec<Vec<f64>> = {
        let m = refine.pow(n as u32);
        (0..m)
            .map(|mut q| {
                let mut off = vec![0.0; n];
                for k in (0..n).rev() {
                    off[k] = ((q % refine) as f64 + 0.5) / refine as f64;
                    q /= refine;
                }
                off
            })
            .collect()
    };
    let sub_vol = vol / sub_offsets.len() as f64;
    let near_key = |d: &[isize]| -> usize { d.iter().rev().fold(0usize, |acc, &x| acc * 5 + (x + 2) as usize) };
    // weights for offsets in [-2, 2]^n, refined into subcells
    let near: Vec<f64> = (0..5usize.pow(n as u32))
        .map(|mut key| {
            let d: Vec<f64> = (0..n)
                .map(|_| {
                    let x = (key % 5) as f64 - 2.0;
                    key /= 5;
                    x
                })
                .collect();
            if d.iter().all(|&x| x == 0.0) {
                return 0.0;
            }
            let mut w = 0.0;
            for a in &sub_offsets {
                for b in &sub_offsets {
                    let r2: f64 = (0..n).map(|k| ((d[k] + b[k] - a[k]) * c[k]).powi(2)).sum();
                    w += sub_vol * sub_vol * r2.powf(-expo / 2.0);
                }
            }
            w
        })
        .collect();
    let coords: Vec<Vec<isize>> = (0..count).map(decode).collect();
    let inner_flag: Vec<bool> = coords
        .iter()
        .map(|idx| idx.iter().zip(f.shape()).all(|(&i, &l)| i >= PAD as isize && i < (l + PAD) as isize))
        .collect();
    // inner cells only contribute; padding-to-padding pairs vanish
    let inner: Vec<usize> = (0..count).filter(|&lin| inner_flag[lin]).collect();
    let sphere = 2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half_integer(n);
    let hi_box: Vec<f64> = (0..n).map(|k| shape[k] as f64 * c[k]).collect();
    let parts: Vec<f64> = inner
        .par_iter()
        .map(|&i| {
            let xi = &coords[i];
            let gi = padded[i];
            let mut d = vec![0isize; n];
            let mut acc = 0.0;
            for (j, &gj) in padded.iter().enumerate() {
                let diff = (gi - gj).abs();
                if j == i || diff == 0.0 {
                    continue;
                }
                // pairs with both cells inner are visited in both orders;
                // inner-padding pairs once, so they carry the factor 2
                let mult = if inner_flag[j] { 1.0 } else { 2.0 };
                for k in 0..n {
                    d[k] = coords[j][k] - xi[k];
                }
                let w = if d.iter().all(|x| x.abs() <= 2) {
                    near[near_key(&d)]
                } else {
                    let r2: f64 = (0..n).map(|k| (d[k] as f64 * c[k]).powi(2)).sum();
                    vol * vol * r2.powf(-expo / 2.0)
                };
                acc += mult * diff.powf(p) * w;
            }
            if gi > 0.0 {
                let rad = (0..n)
                    .map(|k| {
                        let centre = (xi[k] as f64 + 0.5) * c[k];
                        centre.min(hi_box[k] - centre)
                    })
                    .fold(f64::INFINITY, f64::min);
                acc += 2.0 * gi.powf(p) * vol * sphere * rad.powf(-s) / s;
            }
            acc
        })
        .collect();
    parts.iter().sum()
}

/// Exponents of the anisotropic Besov embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct BesovParams {
    pub p: f64,
    pub beta_j: Vec<f64>,
    pub theta_j: Vec<f64>,
    /// `n (Σ 1/β_j)^{-1}`.
    pub beta: f64,
    /// `(n/β)(Σ 1/(β_j θ_j))^{-1}` with `1/∞ = 0`.
    pub theta: f64,
    /// `np / (n - βp)`, infinite when inadmissible.
    pub q: f64,
    /// `1 ≤ p < n/β`.
    pub admissible: bool,
    /// Some `θ_j < p`, outside the proven range.
    pub open_case: bool,
}

impl BesovParams {
    pub fn dims(&self) -> usize {
        self.beta_j.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "beta_j": self.beta_j,
            "theta_j": self.theta_j.iter().map(|t| json_real(*t)).collect::<Vec<_>>(),
            "beta": self.beta,
            "theta": json_real(self.theta),
            "q": json_real(self.q),
        })
    }
}

/// Finite reals as numbers, infinities as the string `"inf"`.
pub(crate) fn json_real(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!("inf")
    }
}

pub fn derive_params(p: f64, beta_j: &[f64], theta_j: &[f64]) -> Result<BesovParams> {
    let n = beta_j.len();
    if n == 0 || theta_j.len() != n {
        return param("need one β_j and one θ_j per axis");
    }
    if !(p >= 1.0 && p.is_finite()) {
        return param(format!("p must satisfy 1 ≤ p < ∞, got {p}"));
    }
    if let Some(b) = beta_j.iter().find(|b| !(**b > 0.0 && **b < 1.0)) {
        return param(format!("β_j must lie in (0,1), got {b}"));
    }
    if let Some(t) = theta_j.iter().find(|t| !(**t >= 1.0)) {
        return param(format!("θ_j must lie in [1,∞], got {t}"));
    }
    let nf = n as f64;
    let beta = nf / beta_j.iter().map(|b| 1.0 / b).sum::<f64>();
    let inv_sum: f64 = beta_j.iter().zip(theta_j).map(|(b, t)| 1.0 / (b * t)).sum();
    let theta = if inv_sum == 0.0 { f64::INFINITY } else { (nf / beta) / inv_sum };
    let admissible = p < nf / beta;
    let q = if admissible { nf * p / (nf - beta * p) } else { f64::INFINITY };
    Ok(BesovParams {
        p,
        beta_j: beta_j.to_vec(),
        theta_j: theta_j.to_vec(),
        beta,
        theta,
        q,
        admissible,
        open_case: theta_j.iter().any(|&t| t < p),
    })
}

/// Exponents of the anisotropic Lipschitz embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzParams {
    pub p: f64,
    pub alpha_k: Vec<f64>,
    /// `n (Σ 1/α_k)^{-1}`.
    pub alpha: f64,
    /// Number of `α_k` equal to 1.
    pub nu: usize,
    /// `np / (n - αp)`.
    pub q_star: f64,
    /// `np / (να)`, infinite when `ν = 0`.
    pub s: f64,
    /// `αp < n`.
    pub admissible: bool,
}

pub fn derive_lipschitz_params(p: f64, alpha_k: &[f64]) -> Result<LipschitzParams> {
    let n = alpha_k.len();
    if n == 0 {
        return param("need one α_k per axis");
    }
    if !(p >= 1.0 && p.is_finite()) {
        return param(format!("p must satisfy 1 ≤ p < ∞, got {p}"));
    }
    for &a in alpha_k {
        check_alpha(a, true)?;
    }
    let nf = n as f64;
    let alpha = nf / alpha_k.iter().map(|a| 1.0 / a).sum::<f64>();
    let nu = alpha_k.iter().filter(|&&a| a == 1.0).count();
    let admissible = alpha * p < nf;
    Ok(LipschitzParams {
        p,
        alpha_k: alpha_k.to_vec(),
        alpha,
        nu,
        q_star: if admissible { nf * p / (nf - alpha * p) } else { f64::INFINITY },
        s: if nu == 0 { f64::INFINITY } else { nf * p / (nu as f64 * alpha) },
        admissible,
    })
}

/// One row of a norm table.
#[derive(Debug, Clone, PartialEq)]
pub struct NormRow {
    pub function_id: String,
    pub norm_name: String,
    pub params: serde_json::Value,
    pub value: f64,
    /// `lo..hi` scale window for Besov-type rows, empty otherwise.
    pub truncation_window: String,
}

pub fn write_norm_table<W: Write>(rows: &[NormRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["function_id", "norm_name", "params_json", "value", "truncation_window"])?;
    for r in rows {
        out.write_record([
            r.function_id.as_str(),
            r.norm_name.as_str(),
            &r.params.to_string(),
            &format!("{:e}", r.value),
            r.truncation_window.as_str(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Formats a scale window as `lo..hi`.
pub fn format_window(window: (f64, f64)) -> String {
    format!("{:e}..{}", window.0, if window.1.is_infinite() { "inf".into() } else { format!("{:e}", window.1) })
}
