//! Shift-difference norms and partial moduli of continuity.
//!
//! For a piecewise-constant function, `h ↦ I_k(f;h)_p^p` is linear between
//! consecutive multiples of the cell size `c_k`:
//!
//! ```text
//! I^p(m c + s) = (1 - s/c) I^p(m c) + (s/c) I^p((m+1) c),   0 ≤ s < c
//! ```
//!
//! so a [`ModulusCurve`] only stores the values at lattice shifts and every
//! sup or integral over `h` reduces to closed forms on linear pieces.

use crate::error::{param, Error, Result};
use crate::grid::{AxisDomain, GridFunction};
use crate::quad;

#[inline]
fn pow_abs(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x.abs()
    } else if p == 2.0 {
        x * x
    } else {
        x.abs().powf(p)
    }
}

fn check_axis(f: &GridFunction, axis: usize) -> Result<()> {
    if axis >= f.dims() {
        return param(format!("axis {} out of range for a {}-dimensional grid", axis + 1, f.dims()));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return param(format!("exponent p must satisfy 1 ≤ p < ∞, got {p}"));
    }
    Ok(())
}

/// How the shifted difference is integrated along the shift axis.
#[derive(Debug, Clone, Copy, PartialEq)]
enum ShiftRegion {
    /// All of ℝ, function zero outside the grid.
    Line,
    /// `x ≥ 0` only (function given on ℝ₊).
    HalfLine,
    /// `0 ≤ x ≤ L c - h` (function on a bounded interval).
    Interval,
}

/// `Σ_x |f(x + m c e_k) - f(x)|^p · v` over the chosen region.
fn lattice_shift_pow(f: &GridFunction, axis: usize, m: usize, p: f64, region: ShiftRegion) -> f64 {
    let len = f.shape()[axis];
    let stride = f.strides()[axis];
    let vals = f.values();
    let mut total = 0.0;
    for s in f.section_starts(axis) {
        let g = |i: isize| -> f64 {
            if i < 0 || i as usize >= len {
                0.0
            } else {
                vals[s + i as usize * stride]
            }
        };
        let mi = m as isize;
        let (lo, hi) = match region {
            ShiftRegion::Line => (-mi, len as isize - 1),
            ShiftRegion::HalfLine => (0, len as isize - 1),
            ShiftRegion::Interval => (0, len as isize - 1 - mi),
        };
        let mut acc = 0.0;
        for i in lo..=hi {
            acc += pow_abs(g(i + mi) - g(i), p);
        }
        total += acc;
    }
    total * f.cell_volume()
}

fn region_for(f: &GridFunction, axis: usize) -> ShiftRegion {
    match f.domains()[axis] {
        AxisDomain::Line => ShiftRegion::Line,
        AxisDomain::HalfLine => ShiftRegion::HalfLine,
    }
}

/// `I_k(f;h)_p = (∫ |f(x + h e_k) - f(x)|^p dx)^{1/p}`, exact for the
/// piecewise-constant representative. Negative `h` gives the same value.
pub fn shift_difference_norm(f: &GridFunction, axis: usize, h: f64, p: f64) -> Result<f64> {
    check_axis(f, axis)?;
    check_p(p)?;
    if !h.is_finite() {
        return param("shift must be finite");
    }
    let c = f.cell_sizes()[axis];
    let h = h.abs();
    let len = f.shape()[axis];
    let m = (h / c).floor();
    let theta = h / c - m;
    let m = (m as usize).min(len);
    let region = region_for(f, axis);
    let a = lattice_shift_pow(f, axis, m, p, region);
    let val = if theta == 0.0 || m == len {
        a
    } else {
        (1.0 - theta) * a + theta * lattice_shift_pow(f, axis, m + 1, p, region)
    };
    Ok(val.max(0.0).powf(1.0 / p))
}

/// `ω_k(f;δ)_p = sup_{|h| ≤ δ} I_k(f;h)_p`.
pub fn partial_modulus(f: &GridFunction, axis: usize, delta: f64, p: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return param(format!("δ must be ≥ 0, got {delta}"));
    }
    Ok(ModulusCurve::new(f, axis, p)?.omega(delta))
}

/// Result of a supremum over scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSup {
    pub value: f64,
    /// Scale at which the supremum is attained (or approached).
    pub attained_at: f64,
    /// The representative's sub-cell behaviour `δ^{1/p - α}` blows up at 0;
    /// `value` is then the supremum over `δ ≥ c`.
    pub unbounded_below_cell: bool,
}

/// Result of a Besov-type integral over scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleIntegral {
    pub value: f64,
    /// Integration window actually used; the upper end is always ∞ (the
    /// constant tail beyond saturation is integrated in closed form).
    pub window: (f64, f64),
}

/// Exact partial modulus of continuity of one function along one axis.
#[derive(Debug, Clone)]
pub struct ModulusCurve {
    axis: usize,
    p: f64,
    step: f64,
    /// `I^p(m c)` for `m = 0..=M`; constant beyond `M c`.
    shift_pow: Vec<f64>,
    /// `max_{l ≤ m} shift_pow[l]`.
    running: Vec<f64>,
}

impl ModulusCurve {
    /// Curve of `f` along `axis` in `L^p`, respecting the axis domain.
    pub fn new(f: &GridFunction, axis: usize, p: f64) -> Result<Self> {
        check_axis(f, axis)?;
        check_p(p)?;
        Ok(Self::build(f, axis, p, region_for(f, axis)))
    }

    /// Curve for a 1-D function living on the bounded interval covered by the
    /// grid, i.e. `I(h)^p = ∫_0^{L c - h} |f(x+h) - f(x)|^p dx`.
    pub fn on_interval(f: &GridFunction, p: f64) -> Result<Self> {
        if f.dims() != 1 {
            return param("interval moduli are one-dimensional");
        }
        check_p(p)?;
        Ok(Self::build(f, 0, p, ShiftRegion::Interval))
    }

    fn build(f: &GridFunction, axis: usize, p: f64, region: ShiftRegion) -> Self {
        let len = f.shape()[axis];
        let shift_pow: Vec<f64> = (0..=len)
            .map(|m| lattice_shift_pow(f, axis, m, p, region))
            .collect();
        let running = shift_pow
            .iter()
            .scan(0.0f64, |acc, &x| {
                *acc = acc.max(x);
                Some(*acc)
            })
            .collect();
        Self {
            axis,
            p,
            step: f.cell_sizes()[axis],
            shift_pow,
            running,
        }
    }

    pub fn axis(&self) -> usize {
        self.axis
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    /// Cell size along the axis; the curve has breakpoints at its multiples.
    pub fn step(&self) -> f64 {
        self.step
    }
    /// Scale beyond which the curve is constant.
    pub fn saturation(&self) -> f64 {
        (self.shift_pow.len() - 1) as f64 * self.step
    }

    fn last(&self) -> usize {
        self.shift_pow.len() - 1
    }

    fn shift_pow_at(&self, h: f64) -> f64 {
        let h = h.abs();
        let m = (h / self.step).floor();
        let theta = h / self.step - m;
        let m = m as usize;
        if m >= self.last() {
            return self.shift_pow[self.last()];
        }
        (1.0 - theta) * self.shift_pow[m] + theta * self.shift_pow[m + 1]
    }

    /// `I(h)`.
    pub fn shift_norm(&self, h: f64) -> f64 {
        self.shift_pow_at(h).max(0.0).powf(1.0 / self.p)
    }

    /// `ω(δ)`; the sup over `|h| ≤ δ` is attained at a lattice shift or at δ.
    pub fn omega(&self, delta: f64) -> f64 {
        let delta = delta.max(0.0);
        let m = ((delta / self.step).floor() as usize).min(self.last());
        self.running[m]
            .max(self.shift_pow_at(delta))
            .max(0.0)
            .powf(1.0 / self.p)
    }

    /// `(δ, ω(δ))` at every lattice scale up to saturation.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        (0..=self.last())
            .map(|m| (m as f64 * self.step, self.running[m].powf(1.0 / self.p)))
            .collect()
    }

    /// `∫_0^δ I(h) dh`, exact (each piece is `∫ (a + b s)^{1/p} ds`).
    pub fn shift_norm_integral(&self, delta: f64) -> f64 {
        let q = 1.0 / self.p;
        let mut total = 0.0;
        let mut m = 0usize;
        loop {
            let lo = m as f64 * self.step;
            if lo >= delta {
                break;
            }
            if m >= self.last() {
                total += self.shift_pow[self.last()].powf(q) * (delta - lo);
                break;
            }
            let hi = ((m + 1) as f64 * self.step).min(delta);
            let a = self.shift_pow[m];
            let b = (self.shift_pow[m + 1] - a) / self.step;
            total += linear_power_integral(a, b, hi - lo, q);
            m += 1;
        }
        total
    }

    /// `sup_{δ>0} ω(δ) / δ^α`.
    pub fn weighted_sup(&self, alpha: f64) -> ScaleSup {
        let p = self.p;
        let c = self.step;
        let ratio = |t: f64, w_pow: f64| w_pow.max(0.0).powf(1.0 / p) / t.powf(alpha);
        let mut best = ScaleSup {
            value: 0.0,
            attained_at: c,
            unbounded_below_cell: false,
        };
        let mut consider = |t: f64, v: f64| {
            if v > best.value {
                best.value = v;
                best.attained_at = t;
            }
        };
        // sub-cell: ω(t) = (A₁ t / c)^{1/p}, so ω/t^α ∝ t^{1/p - α}
        let a1 = self.shift_pow.get(1).copied().unwrap_or(0.0);
        let unbounded = a1 > 0.0 && 1.0 / p < alpha;
        consider(c, ratio(c, self.running[1.min(self.last())]));
        for m in 1..self.last() {
            let lo = m as f64 * c;
            let hi = lo + c;
            let w = self.running[m];
            consider(lo, ratio(lo, w));
            let (am, an) = (self.shift_pow[m], self.shift_pow[m + 1]);
            if an > w {
                let slope = (an - am) / c;
                let start = lo + (w - am).max(0.0) / slope;
                let intercept = am - slope * lo;
                let mut cands = vec![start, hi];
                if (p * alpha - 1.0).abs() > 1e-15 {
                    let ts = p * alpha * intercept / (slope * (1.0 - p * alpha));
                    if ts > start && ts < hi {
                        cands.push(ts);
                    }
                }
                for t in cands {
                    consider(t, ratio(t, intercept + slope * t));
                }
            }
        }
        let sat = self.saturation().max(c);
        consider(sat, ratio(sat, self.running[self.last()]));
        best.unbounded_below_cell = unbounded;
        best
    }

    /// `∫_0^∞ (t^{-α} ω(t))^θ dt/t` raised to `1/θ`; `θ = ∞` gives the
    /// weighted sup. The sub-cell piece is included when integrable
    /// (`α < 1/p`), otherwise the window starts at the cell size.
    pub fn besov_integral(&self, alpha: f64, theta: f64) -> ScaleIntegral {
        let c = self.step;
        let p = self.p;
        let sup = self.weighted_sup(alpha);
        let include_subcell = alpha < 1.0 / p;
        let lower = if include_subcell { 0.0 } else { c };
        if theta.is_infinite() {
            return ScaleIntegral {
                value: sup.value,
                window: (lower, f64::INFINITY),
            };
        }
        let s = sup.value;
        if s == 0.0 {
            return ScaleIntegral {
                value: 0.0,
                window: (lower, f64::INFINITY),
            };
        }
        // everything normalised by the sup so the θ-th powers stay ≤ 1 (up to
        // the sub-cell piece when the sup was restricted to δ ≥ c)
        let log_s = s.ln();
        let at = alpha * theta;
        let mut total = 0.0;
        let a1 = self.shift_pow.get(1).copied().unwrap_or(0.0);
        if include_subcell && a1 > 0.0 {
            let e = theta * (1.0 / p - alpha);
            // (A₁/c)^{θ/p} c^e / e, divided by s^θ
            total += ((theta / p) * (a1 / c).ln() + e * c.ln() - theta * log_s).exp() / e;
        }
        // ∫ W^{θ/p} t^{-αθ-1} dt on [l, h], normalised
        let const_piece = |w_pow: f64, l: f64, h: f64| -> f64 {
            if w_pow <= 0.0 {
                return 0.0;
            }
            let lw = (theta / p) * w_pow.ln() - theta * log_s;
            let hp = if h.is_infinite() { 0.0 } else { (lw - at * h.ln()).exp() };
            ((lw - at * l.ln()).exp() - hp) / at
        };
        let panels = 2 + (theta / 4.0).ceil() as usize;
        for m in 1..self.last() {
            let lo = m as f64 * c;
            let hi = lo + c;
            let w = self.running[m];
            let (am, an) = (self.shift_pow[m], self.shift_pow[m + 1]);
            if an <= w {
                total += const_piece(w, lo, hi);
                continue;
            }
            let slope = (an - am) / c;
            let start = (lo + (w - am).max(0.0) / slope).min(hi);
            total += const_piece(w, lo, start);
            let intercept = am - slope * lo;
            // log substitution t = e^u: integrand (t^{-α} ω(t) / s)^θ du
            total += quad::integrate(
                |u| {
                    let t = u.exp();
                    let w = (intercept + slope * t).max(0.0);
                    if w == 0.0 {
                        0.0
                    } else {
                        ((theta / p) * w.ln() - at * u - theta * log_s).exp()
                    }
                },
                start.ln(),
                hi.ln(),
                panels,
            );
        }
        let sat = self.saturation().max(c);
        total += const_piece(self.running[self.last()], sat, f64::INFINITY);
        ScaleIntegral {
            value: s * total.powf(1.0 / theta),
            window: (lower, f64::INFINITY),
        }
    }
}

/// `∫_0^S (a + b s)^q ds` for `a, a + bS ≥ 0`.
fn linear_power_integral(a: f64, b: f64, len: f64, q: f64) -> f64 {
    let end = (a + b * len).max(0.0);
    let a = a.max(0.0);
    if (end - a).abs() <= 1e-12 * end.max(a) {
        return len * (0.5 * (a + end)).powf(q);
    }
    len * (end.powf(q + 1.0) - a.powf(q + 1.0)) / ((q + 1.0) * (end - a))
}

/// `∫_0^w |a + (b - a) s / w|^p ds`.
fn linear_abs_power_integral(a: f64, b: f64, w: f64, p: f64) -> f64 {
    if a * b >= 0.0 {
        let (x, y) = (a.abs(), b.abs());
        if (x - y).abs() <= 1e-12 * x.max(y) {
            return w * (0.5 * (x + y)).powf(p);
        }
        w * (y.powf(p + 1.0) - x.powf(p + 1.0)) / ((p + 1.0) * (y - x))
    } else {
        let (x, y) = (a.abs(), b.abs());
        w * (x.powf(p + 1.0) + y.powf(p + 1.0)) / ((p + 1.0) * (x + y))
    }
}

fn lattice_window(f: &GridFunction, h: f64, axis: usize) -> Result<usize> {
    check_axis(f, axis)?;
    if !(h > 0.0 && h.is_finite()) {
        return param(format!("Steklov window must be positive, got {h}"));
    }
    let c = f.cell_sizes()[axis];
    let m = (h / c).round();
    if m < 1.0 || (m * c - h).abs() > 1e-9 * h {
        return param(format!("Steklov window {h} is not a positive multiple of the cell size {c}"));
    }
    Ok(m as usize)
}

/// Steklov mean `f_{h,j}(x) = (1/h) ∫_0^h f(x + u e_j) du` of a
/// piecewise-constant function for a window that is a multiple of the cell
/// size. The mean is continuous and linear inside each cell along `j`; it is
/// stored by its values at the lower and upper cell faces.
#[derive(Debug, Clone)]
pub struct SteklovMean {
    axis: usize,
    /// Cells added in front of the original grid along `axis`.
    pad: usize,
    /// Geometry of the (possibly extended) grid; values are cell averages.
    grid: GridFunction,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SteklovMean {
    pub fn axis(&self) -> usize {
        self.axis
    }

    /// Cell averages of the mean on its extended grid.
    pub fn cell_averages(&self) -> &GridFunction {
        &self.grid
    }

    /// Exact `‖f_{h,j}‖_p`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        let wv = self.grid.cell_volume();
        let s: f64 = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&a, &b)| linear_abs_power_integral(a, b, 1.0, p))
            .sum();
        Ok((s * wv).powf(1.0 / p))
    }

    /// Exact `‖f - f_{h,j}‖_p` for the function the mean was built from.
    pub fn lp_distance(&self, f: &GridFunction, p: f64) -> Result<f64> {
        check_p(p)?;
        let ext = self.extend(f);
        let s: f64 = ext
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&g, (&a, &b))| linear_abs_power_integral(g - a, g - b, 1.0, p))
            .sum();
        Ok((s * self.grid.cell_volume()).powf(1.0 / p))
    }

    /// Values of `f` on the extended grid.
    fn extend(&self, f: &GridFunction) -> Vec<f64> {
        let g = &self.grid;
        let mut out = vec![0.0; g.len()];
        for (lin, slot) in out.iter_mut().enumerate() {
            let mut idx = g.multi_index(lin);
            if idx[self.axis] < self.pad {
                continue;
            }
            idx[self.axis] -= self.pad;
            *slot = f.get(&idx);
        }
        out
    }
}

/// Geometry for a Steklov construction: the grid extended by `pad` cells in
/// front along `axis` (only on a line axis).
fn padded_geometry(f: &GridFunction, axis: usize, m: usize) -> (usize, GridFunction) {
    let pad = if f.domains()[axis] == AxisDomain::Line { m } else { 0 };
    let mut shape = f.shape().to_vec();
    shape[axis] += pad;
    let mut origin = f.origin().to_vec();
    origin[axis] -= pad as f64 * f.cell_sizes()[axis];
    let count = shape.iter().product();
    let g = GridFunction::new(shape, f.cell_sizes().to_vec(), origin, vec![0.0; count])
        .expect("padding a valid grid stays valid")
        .with_domains(f.domains().to_vec());
    (pad, g)
}

pub fn steklov_mean(f: &GridFunction, h: f64, axis: usize) -> Result<SteklovMean> {
    let m = lattice_window(f, h, axis)?;
    let (pad, geom) = padded_geometry(f, axis, m);
    let len = f.shape()[axis] as isize;
    let mut lower = vec![0.0; geom.len()];
    let mut upper = vec![0.0; geom.len()];
    let mut avg = vec![0.0; geom.len()];
    for lin in 0..geom.len() {
        let mut idx = geom.multi_index(lin);
        let i = idx[axis] as isize - pad as isize;
        let mut g = |j: isize| -> f64 {
            if j < 0 || j >= len {
                0.0
            } else {
                idx[axis] = j as usize;
                f.get(&idx)
            }
        };
        let mut win: f64 = (0..m as isize).map(|l| g(i + l)).sum();
        let lo = win / m as f64;
        win += g(i + m as isize) - g(i);
        let hi = win / m as f64;
        lower[lin] = lo;
        upper[lin] = hi;
        avg[lin] = 0.5 * (lo + hi);
    }
    Ok(SteklovMean {
        axis,
        pad,
        grid: geom.with_values(avg),
        lower,
        upper,
    })
}

/// `|∂ f_{h,j} / ∂x_j| = |f(x + h e_j) - f(x)| / h`, piecewise constant on
/// the extended grid.
pub fn steklov_axis_derivative(f: &GridFunction, h: f64, axis: usize) -> Result<GridFunction> {
    let m = lattice_window(f, h, axis)?;
    let (pad, geom) = padded_geometry(f, axis, m);
    let len = f.shape()[axis] as isize;
    let vals = (0..geom.len())
        .map(|lin| {
            let mut idx = geom.multi_index(lin);
            let i = idx[axis] as isize - pad as isize;
            let mut g = |j: isize| -> f64 {
                if j < 0 || j >= len {
                    0.0
                } else {
                    idx[axis] = j as usize;
                    f.get(&idx)
                }
            };
            (g(i + m as isize) - g(i)).abs() / h
        })
        .collect();
    Ok(geom.with_values(vals))
}

/// One line of a modulus-axiom report.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomLine {
    pub name: &'static str,
    /// Worst observed `lhs / rhs` (pass when ≤ 1 + tolerance).
    pub worst_ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomsReport {
    pub lines: Vec<AxiomLine>,
}

impl AxiomsReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn line(&self, name: &str) -> Option<&AxiomLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn to_text(&self) -> String {
        self.lines
            .iter()
            .map(|l| format!("{} {:.6e} {}\n", l.name, l.worst_ratio, if l.pass { "pass" } else { "fail" }))
            .collect()
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs <= 0.0 {
        0.0
    } else if rhs <= 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

/// Checks monotonicity, `ω(0) = 0`, subadditivity, doubling, the factor-2
/// quasi-monotonicity of `ω(δ)/δ`, and agreement of the finest-scale slope
/// with the supremum of `ω(δ)/δ`, on a dyadic grid `δ_0 2^i`, `i < count`.
pub fn modulus_axioms_check<F: Fn(f64) -> f64>(omega: F, delta0: f64, count: usize, tol: f64) -> AxiomsReport {
    let deltas: Vec<f64> = (0..count).map(|i| delta0 * 2f64.powi(i as i32)).collect();
    let w: Vec<f64> = deltas.iter().map(|&d| omega(d)).collect();
    let mut lines = Vec::new();
    let mono = w.windows(2).map(|p| ratio(p[0], p[1])).fold(0.0, f64::max);
    lines.push(AxiomLine {
        name: "monotone",
        worst_ratio: mono,
        pass: mono <= 1.0 + tol,
    });
    let w0 = omega(0.0);
    lines.push(AxiomLine {
        name: "zero_at_origin",
        worst_ratio: w0,
        pass: w0.abs() <= tol,
    });
    let mut sub: f64 = 0.0;
    for (i, &a) in deltas.iter().enumerate() {
        for (j, &b) in deltas.iter().enumerate().skip(i) {
            sub = sub.max(ratio(omega(a + b), w[i] + w[j]));
        }
    }
    lines.push(AxiomLine {
        name: "subadditive",
        worst_ratio: sub,
        pass: sub <= 1.0 + tol,
    });
    let mut dbl: f64 = 0.0;
    for (i, &d) in deltas.iter().enumerate() {
        for k in 1..=(count - i) as i32 {
            let f = 2f64.powi(k);
            dbl = dbl.max(ratio(omega(f * d), f * w[i]));
        }
    }
    lines.push(AxiomLine {
        name: "doubling",
        worst_ratio: dbl,
        pass: dbl <= 1.0 + tol,
    });
    let mut qm: f64 = 0.0;
    for i in 0..count {
        for j in i + 1..count {
            qm = qm.max(ratio(w[j] / deltas[j], 2.0 * w[i] / deltas[i]));
        }
    }
    lines.push(AxiomLine {
        name: "quasi_monotone_slope",
        worst_ratio: qm,
        pass: qm <= 1.0 + tol,
    });
    let sup_slope = w
        .iter()
        .zip(&deltas)
        .map(|(w, d)| w / d)
        .fold(0.0, f64::max);
    let finest = if count > 0 { w[0] / deltas[0] } else { 0.0 };
    let slope = ratio(sup_slope, finest);
    lines.push(AxiomLine {
        name: "finest_slope_is_sup",
        worst_ratio: slope,
        pass: slope <= 1.0 + tol || sup_slope == 0.0,
    });
    AxiomsReport { lines }
}

/// Both sides of `ω(δ) ≤ (3/δ) ∫_0^δ I(h) dh`.
pub fn averaged_modulus_bound(curve: &ModulusCurve, delta: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("δ must be positive, got {delta}")));
    }
    Ok((curve.omega(delta), 3.0 / delta * curve.shift_norm_integral(delta)))
}
