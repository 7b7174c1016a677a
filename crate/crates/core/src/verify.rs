//! Inequality verifiers.
//!
//! Each verifier computes both sides of one inequality and wraps them in an
//! [`InequalityReport`]. Inequalities whose constant is explicit carry that
//! constant as the budget (see [`hard_budget`]); the others take a budget from
//! the calibration file.

use rayon::prelude::*;
use serde_json::json;

use crate::error::{param, Error, Result};
use crate::geometry::{axis_decrement_sides, monotone_domination_ratio, operator_bound_sides, AnisotropicGauge};
use crate::grid::{AxisDomain, GridFunction};
use crate::moduli::{steklov_axis_derivative, steklov_mean, ModulusCurve};
use crate::norms::{
    besov_seminorm, derive_lipschitz_params, format_window, gagliardo_seminorm, json_real, lipschitz_seminorm,
    lorentz_norm, mixed_lorentz_norm, BesovParams,
};
use crate::rearrange::{decreasing_rearrangement, dyadic_decrement, iterated_rearrangement, Permutation};
use crate::report::{InequalityReport, LimitTrace, TracePoint, Verdict};
use crate::step::power_integral;

/// Identifiers of every inequality the verifiers emit.
pub mod ids {
    pub const ISOTROPIC: &str = "isotropic-estimate";
    pub const ANISO_INTEGRAL: &str = "aniso-integral";
    pub const ANISO_SUP: &str = "aniso-sup";
    pub const GAUGE_PRODUCT: &str = "gauge-product";
    pub const GAUGE_BAND: &str = "gauge-band";
    pub const LOOMIS_WHITNEY: &str = "loomis-whitney";
    pub const EMBEDDING_LORENTZ: &str = "embedding-lorentz";
    pub const EMBEDDING_MIXED: &str = "embedding-mixed";
    pub const MINKOWSKI: &str = "minkowski-step";
    pub const SWEEP: &str = "limit-sweep";
    pub const LIPSCHITZ_COROLLARY: &str = "lipschitz-corollary";
    pub const BOURGAIN: &str = "bourgain";
    pub const BOURGAIN_LORENTZ: &str = "bourgain-lorentz";
    pub const REARRANGED_MODULUS_1D: &str = "rearranged-modulus-1d";
    pub const ITERATED_MODULUS: &str = "iterated-modulus";
    pub const AVERAGED_MODULUS: &str = "averaged-modulus";
    pub const STEKLOV_DISTANCE: &str = "steklov-distance";
    pub const STEKLOV_DERIVATIVE: &str = "steklov-derivative";
    pub const OPERATOR_T: &str = "operator-t";
    pub const MONOTONE_T: &str = "monotone-t";
    pub const AXIS_DECREMENT: &str = "axis-decrement";
    pub const LORENTZ_MIXED_LOWER: &str = "mixed-lorentz-lower";
    pub const LORENTZ_MIXED_UPPER: &str = "mixed-lorentz-upper";
}

/// Explicit constants; `None` for inequalities stated with an unspecified
/// constant. `n` is the dimension, `a` the weight exponent of the operator
/// bound and `mu` the dilation of the axis-decrement bound.
pub fn hard_budget(id: &str, n: usize, a: f64, mu: f64) -> Option<f64> {
    Some(match id {
        ids::REARRANGED_MODULUS_1D => 2.0,
        ids::ITERATED_MODULUS => 3f64.powi(n as i32),
        ids::AVERAGED_MODULUS => 3.0,
        ids::STEKLOV_DISTANCE | ids::STEKLOV_DERIVATIVE | ids::MONOTONE_T | ids::MINKOWSKI => 1.0,
        ids::OPERATOR_T => 2f64.powf(a.max(1.0) * n as f64),
        ids::AXIS_DECREMENT => 4.0 * mu,
        ids::LOOMIS_WHITNEY | ids::GAUGE_PRODUCT | ids::GAUGE_BAND => 1.0,
        _ => return None,
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return param(format!("p must satisfy 1 ≤ p < ∞, got {p}"));
    }
    Ok(())
}

/// `ω(f;δ)_p = max_k ω_k(f;δ)_p`.
fn isotropic_modulus(f: &GridFunction, delta: f64, p: f64) -> Result<f64> {
    (0..f.dims()).try_fold(0.0f64, |acc, k| Ok(acc.max(ModulusCurve::new(f, k, p)?.omega(delta))))
}

/// `∫_{δⁿ}^∞ t^{-p/n} ∫_0^t (f*(u) - f*(t))^p du dt/t ≤ c (ω(f;δ)_p / δ)^p`
/// with `ω = max_k ω_k`.
pub fn verify_isotropic_estimate(f: &GridFunction, function_id: &str, p: f64, delta: f64, budget: f64) -> Result<InequalityReport> {
    check_p(p)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return param(format!("δ must be positive, got {delta}"));
    }
    let n = f.dims() as f64;
    let sf = decreasing_rearrangement(f);
    let pieces: Vec<(f64, f64, f64)> = sf.pieces().collect();
    let lo = delta.powf(n);
    // inner integral is constant on each piece of f*
    let parts: Vec<f64> = pieces
        .par_iter()
        .enumerate()
        .map(|(i, &(a, b, v))| {
            let (a, b) = (a.max(lo), b);
            if b <= a {
                return 0.0;
            }
            let inner: f64 = pieces[..i].iter().map(|&(l, h, w)| (w - v).powf(p) * (h - l)).sum();
            inner * power_integral(-p / n, a, b)
        })
        .collect();
    let mut lhs: f64 = parts.iter().sum();
    let tail_start = sf.support_end().max(lo);
    let full: f64 = pieces.iter().map(|&(l, h, w)| w.powf(p) * (h - l)).sum();
    if full > 0.0 {
        lhs += full * power_integral(-p / n, tail_start, f64::INFINITY);
    }
    let omega = isotropic_modulus(f, delta, p)?;
    let rhs = (omega / delta).powf(p);
    Ok(InequalityReport::evaluate(
        ids::ISOTROPIC,
        function_id,
        json!({ "p": p, "delta": delta, "n": f.dims(), "modulus": "max-axis" }),
        lhs,
        rhs,
        budget,
    ))
}

fn mark_degenerate(mut r: InequalityReport) -> InequalityReport {
    r.verdict = Verdict::Degenerate;
    r
}

/// Integral and supremum forms of the anisotropic rearrangement estimate for
/// every axis `j` and every `h`:
///
/// ```text
/// ∫_{Ω_j(h)} φ(t)^p / u_j(t)^p dt ≤ c (ω_j(f;h)_p / h)^p
/// sup_{t ∈ Ω_j(h)} t^{1/p} φ(t) / u_j(t) ≤ c ω_j(f;h)_p / h
/// ```
///
/// with `φ(t) = f*(t) - f*(2t)`. The gauge value at a lattice point `t_m`
/// stands for the interval `(t_{m-1}, t_m]`; measures beyond the last
/// lattice point are outside the gauge and reported as truncation.
pub fn verify_anisotropic_estimate(
    f: &GridFunction,
    function_id: &str,
    p: f64,
    gauge: &AnisotropicGauge,
    h_grid: &[f64],
    budgets: (f64, f64),
) -> Result<Vec<InequalityReport>> {
    check_p(p)?;
    let n = f.dims();
    if gauge.dims() != n || (gauge.cell_volume() - f.cell_volume()).abs() > 1e-12 * f.cell_volume() {
        return Err(Error::Precondition("gauge was built for a different grid".into()));
    }
    let phi = dyadic_decrement(&decreasing_rearrangement(f))?;
    let pts = gauge.points();
    let t_max = pts.last().map_or(0.0, |q| q.t);
    let truncation = if phi.support_end() > t_max {
        format!("t in (0, {t_max:e}]; phi support ends at {:e}", phi.support_end())
    } else {
        String::new()
    };
    // per lattice interval: ∫ φ^p and sup t^{1/p} φ
    let intervals: Vec<(f64, f64)> = pts
        .iter()
        .enumerate()
        .map(|(m, q)| {
            let lo = if m == 0 { 0.0 } else { pts[m - 1].t };
            let hi = q.t;
            let mut integral = 0.0;
            let mut sup: f64 = 0.0;
            for (l, h, v) in phi.pieces() {
                let (a, b) = (l.max(lo), h.min(hi));
                if b > a && v > 0.0 {
                    integral += v.powf(p) * (b - a);
                    sup = sup.max(b.powf(1.0 / p) * v);
                }
            }
            (integral, sup)
        })
        .collect();
    let mut out = Vec::new();
    for j in 0..n {
        let curve = ModulusCurve::new(f, j, p)?;
        for &h in h_grid {
            if !(h > 0.0) {
                return param(format!("h must be positive, got {h}"));
            }
            let members = gauge.omega_members(j, h);
            let mut l11 = 0.0;
            let mut l111: f64 = 0.0;
            for &m in &members {
                let u = pts[m].u[j];
                l11 += intervals[m].0 / u.powf(p);
                l111 = l111.max(intervals[m].1 / u);
            }
            let w = curve.omega(h) / h;
            let params = json!({ "p": p, "axis": j + 1, "h": h, "sigma": gauge.sigma().to_string(), "omega_size": members.len() });
            let r11 = InequalityReport::evaluate(ids::ANISO_INTEGRAL, function_id, params.clone(), l11, w.powf(p), budgets.0)
                .with_truncation(truncation.clone());
            let r111 = InequalityReport::evaluate(ids::ANISO_SUP, function_id, params, l111, w, budgets.1)
                .with_truncation(truncation.clone());
            if members.is_empty() {
                out.push(mark_degenerate(r11));
                out.push(mark_degenerate(r111));
            } else {
                out.push(r11);
                out.push(r111);
            }
        }
    }
    Ok(out)
}

/// Exact gauge invariants aggregated over all lattice points.
pub fn gauge_reports(gauge: &AnisotropicGauge, function_id: &str) -> Vec<InequalityReport> {
    let pts = gauge.points();
    let sigma = gauge.sigma().to_string();
    if pts.is_empty() {
        let params = json!({ "sigma": sigma, "points": 0 });
        return [ids::GAUGE_PRODUCT, ids::GAUGE_BAND, ids::LOOMIS_WHITNEY]
            .iter()
            .map(|id| InequalityReport::degenerate(*id, function_id, params.clone(), 1.0))
            .collect();
    }
    let worst = pts.iter().map(|q| q.u_product() / q.t).fold(0.0, f64::max);
    let params = json!({ "sigma": sigma, "points": pts.len(), "scope": "max over lattice t" });
    vec![
        InequalityReport::decided(ids::GAUGE_PRODUCT, function_id, params.clone(), worst, 1.0, pts.iter().all(|q| q.product_bound_holds)),
        InequalityReport::decided(ids::GAUGE_BAND, function_id, params.clone(), 1.0, 1.0, pts.iter().all(|q| q.band_holds)),
        InequalityReport::decided(ids::LOOMIS_WHITNEY, function_id, params, 1.0, 1.0, pts.iter().all(|q| q.loomis_whitney_holds)),
    ]
}

/// Which Lorentz-type norm sits on the left of the embedding.
#[derive(Debug, Clone, PartialEq)]
pub enum NormFlavor {
    Lorentz,
    Mixed(Permutation),
}

/// Both sides of the Besov-to-Lorentz embedding and the pieces they are
/// built from.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSides {
    pub lhs: f64,
    /// `Π_j [(1-β_j)^{1/θ_j} ‖f‖_{b_j}]^{β/(nβ_j)}`.
    pub rhs: f64,
    /// Same product without the `(1-β_j)^{1/θ_j}` factors.
    pub rhs_without_factors: f64,
    pub besov: Vec<f64>,
    pub truncation: String,
}

pub fn embedding_sides(f: &GridFunction, params: &BesovParams, flavor: &NormFlavor) -> Result<EmbeddingSides> {
    let n = f.dims();
    if params.dims() != n {
        return param("parameter dimension does not match the function");
    }
    let mut besov = Vec::with_capacity(n);
    let mut windows = Vec::with_capacity(n);
    for j in 0..n {
        let b = besov_seminorm(f, j, params.beta_j[j], params.theta_j[j], params.p)?;
        besov.push(b.value);
        windows.push(format!("axis{}:{}", j + 1, format_window(b.window)));
    }
    let mut rhs = 1.0;
    let mut rhs_without = 1.0;
    for j in 0..n {
        let e = params.beta / (n as f64 * params.beta_j[j]);
        let factor = (1.0 - params.beta_j[j]).powf(1.0 / params.theta_j[j]);
        rhs *= (factor * besov[j]).powf(e);
        rhs_without *= besov[j].powf(e);
    }
    let lhs = match flavor {
        NormFlavor::Lorentz => lorentz_norm(&decreasing_rearrangement(f), params.q, params.theta)?,
        NormFlavor::Mixed(sigma) => mixed_lorentz_norm(&iterated_rearrangement(f, sigma)?, params.q, params.theta)?,
    };
    Ok(EmbeddingSides {
        lhs,
        rhs,
        rhs_without_factors: rhs_without,
        besov,
        truncation: windows.join(";"),
    })
}

fn embedding_params_json(params: &BesovParams, flavor: &NormFlavor) -> serde_json::Value {
    let mut v = params.to_json();
    v["flavor"] = match flavor {
        NormFlavor::Lorentz => json!("lorentz"),
        NormFlavor::Mixed(s) => json!(format!("mixed{s}")),
    };
    v
}

/// `‖f‖_{q,θ} ≤ c Π_j [(1-β_j)^{1/θ_j} ‖f‖_{b^{β_j}_{p,θ_j;j}}]^{β/(nβ_j)}`
/// (or its mixed-norm form), plus for the plain flavor the exact step
/// `‖f‖_{q,θ} ≤ (1 - 2^{-1/q})^{-1} J`,
/// `J = (∫ t^{θ/q-1} [f*(t) - f*(2t)]^θ dt)^{1/θ}`.
///
/// Refuses inadmissible parameters; `θ_j < p` is refused unless `explore`,
/// in which case the report carries no verdict.
pub fn verify_embedding(
    f: &GridFunction,
    function_id: &str,
    params: &BesovParams,
    flavor: &NormFlavor,
    budget: f64,
    explore: bool,
) -> Result<Vec<InequalityReport>> {
    if !params.admissible {
        return param(format!("inadmissible exponents: need p < n/β (p = {}, β = {})", params.p, params.beta));
    }
    if params.open_case && !explore {
        return param("some θ_j < p, outside the proven range; pass the explore flag to log it");
    }
    let sides = embedding_sides(f, params, flavor)?;
    let id = match flavor {
        NormFlavor::Lorentz => ids::EMBEDDING_LORENTZ,
        NormFlavor::Mixed(_) => ids::EMBEDDING_MIXED,
    };
    let pj = embedding_params_json(params, flavor);
    let mut r = InequalityReport::evaluate(id, function_id, pj.clone(), sides.lhs, sides.rhs, budget).with_truncation(sides.truncation);
    if params.open_case {
        r = r.unchecked();
    }
    let mut out = vec![r];
    if *flavor == NormFlavor::Lorentz {
        let phi = dyadic_decrement(&decreasing_rearrangement(f))?;
        let j = lorentz_norm(&phi, params.q, params.theta)?;
        let c = 1.0 / (1.0 - 2f64.powf(-1.0 / params.q));
        out.push(InequalityReport::evaluate(ids::MINKOWSKI, function_id, pj, sides.lhs, c * j, 1.0));
    }
    Ok(out)
}

/// Result of a limiting sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// `lhs / rhs` with the `(1-β_j)^{1/θ_j}` factors.
    pub with_factors: LimitTrace,
    /// `rhs_without_factors / lhs`: how far the bound without factors
    /// overshoots.
    pub control: LimitTrace,
    pub reports: Vec<InequalityReport>,
    /// The sweep stopped early because the exponents became inadmissible.
    pub truncated: bool,
}

/// Sweeps `β_j = 1 - 2^{-m}` (m = 1..=m_max) on `axes`, other exponents fixed.
#[allow(clippy::too_many_arguments)]
pub fn limiting_sweep(
    f: &GridFunction,
    function_id: &str,
    p: f64,
    base_beta: &[f64],
    theta: &[f64],
    axes: &[usize],
    m_max: u32,
    flavor: &NormFlavor,
    budget: f64,
) -> Result<SweepResult> {
    if axes.iter().any(|&k| k >= base_beta.len()) {
        return param("sweep axis out of range");
    }
    let base = json!({ "p": p, "axes": axes.iter().map(|k| k + 1).collect::<Vec<_>>(), "theta_j": theta.iter().map(|t| json_real(*t)).collect::<Vec<_>>() });
    let mut with_factors = LimitTrace {
        trace_id: "sweep-with-factors".into(),
        function_id: function_id.into(),
        params: base.clone(),
        points: Vec::new(),
    };
    let mut control = LimitTrace {
        trace_id: "sweep-control".into(),
        function_id: function_id.into(),
        params: base,
        points: Vec::new(),
    };
    let mut reports = Vec::new();
    let mut truncated = false;
    for m in 1..=m_max {
        let b = 1.0 - 2f64.powi(-(m as i32));
        let mut beta = base_beta.to_vec();
        for &k in axes {
            beta[k] = b;
        }
        let params = crate::norms::derive_params(p, &beta, theta)?;
        if !params.admissible {
            truncated = true;
            break;
        }
        let sides = embedding_sides(f, &params, flavor)?;
        let ratio = crate::report::ratio_of(sides.lhs, sides.rhs);
        with_factors.points.push(TracePoint { parameter: b, value: ratio, target: with_factors.points.first().map_or(ratio, |q| q.value) });
        let over = crate::report::ratio_of(sides.rhs_without_factors, sides.lhs);
        control.points.push(TracePoint { parameter: b, value: over, target: control.points.first().map_or(over, |q| q.value) });
        let mut pj = embedding_params_json(&params, flavor);
        pj["m"] = json!(m);
        reports.push(InequalityReport::evaluate(ids::SWEEP, function_id, pj, sides.lhs, sides.rhs, budget).with_truncation(sides.truncation));
    }
    Ok(SweepResult {
        with_factors,
        control,
        reports,
        truncated,
    })
}

/// `‖f‖_{q*,s} ≤ c Π_k ‖f‖_{λ^{α_k}_{p;k}}^{α/(nα_k)}`.
pub fn verify_lipschitz_corollary(f: &GridFunction, function_id: &str, p: f64, alpha_k: &[f64], budget: f64) -> Result<InequalityReport> {
    let lp = derive_lipschitz_params(p, alpha_k)?;
    if lp.alpha_k.len() != f.dims() {
        return param("one α_k per axis");
    }
    if !lp.admissible {
        return param("need α p < n");
    }
    let n = f.dims() as f64;
    let mut rhs = 1.0;
    let mut note = Vec::new();
    for (k, &a) in alpha_k.iter().enumerate() {
        let s = lipschitz_seminorm(f, k, a, p)?;
        if s.unbounded_below_cell {
            note.push(format!("axis{}: sup over delta >= cell", k + 1));
        }
        rhs *= s.value.powf(lp.alpha / (n * a));
    }
    let lhs = lorentz_norm(&decreasing_rearrangement(f), lp.q_star, lp.s)?;
    Ok(InequalityReport::evaluate(
        ids::LIPSCHITZ_COROLLARY,
        function_id,
        json!({ "p": p, "alpha_k": alpha_k, "alpha": lp.alpha, "nu": lp.nu, "q_star": lp.q_star, "s": json_real(lp.s) }),
        lhs,
        rhs,
        budget,
    )
    .with_truncation(note.join(";")))
}

/// `(1-α)^{1/θ} ‖f‖_{b^α_{p,θ;k}}` along `α = 1 - 2^{-m}` against its limit
/// `(1/θ)^{1/θ} sup_δ ω_k(f;δ)_p / δ`.
pub fn verify_limit_relations(f: &GridFunction, function_id: &str, axis: usize, p: f64, theta: f64, m_max: u32) -> Result<LimitTrace> {
    let curve = ModulusCurve::new(f, axis, p)?;
    let slope = curve.weighted_sup(1.0);
    if slope.unbounded_below_cell {
        return Err(Error::Precondition("sup ω(δ)/δ is infinite for this representative".into()));
    }
    let target = (1.0 / theta).powf(1.0 / theta) * slope.value;
    let points = (1..=m_max)
        .map(|m| {
            let a = 1.0 - 2f64.powi(-(m as i32));
            let b = curve.besov_integral(a, theta).value;
            TracePoint {
                parameter: a,
                value: (1.0 - a).powf(1.0 / theta) * b,
                target,
            }
        })
        .collect();
    Ok(LimitTrace {
        trace_id: "besov-limit".into(),
        function_id: function_id.into(),
        params: json!({ "axis": axis + 1, "p": p, "theta": theta }),
        points,
    })
}

/// `(1-α) ∫∫ |f(x)-f(y)|^p |x-y|^{-1-αp}` along `α = 1 - 2^{-m}` against
/// `(2/p) (sup_δ ω(f;δ)_p / δ)^p`, one-dimensional only.
pub fn verify_bbm(f: &GridFunction, function_id: &str, p: f64, m_max: u32) -> Result<LimitTrace> {
    if f.dims() != 1 {
        return param("the Gagliardo limit check is one-dimensional");
    }
    check_p(p)?;
    let slope = ModulusCurve::new(f, 0, p)?.weighted_sup(1.0);
    let target = 2.0 / p * slope.value.powf(p);
    let points = (1..=m_max)
        .map(|m| {
            let a = 1.0 - 2f64.powi(-(m as i32));
            Ok(TracePoint {
                parameter: a,
                value: (1.0 - a) * gagliardo_seminorm(f, a, p)?,
                target,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitTrace {
        trace_id: "gagliardo-limit".into(),
        function_id: function_id.into(),
        params: json!({ "p": p, "constant": 2.0 / p }),
        points,
    })
}

/// `‖f‖_{p*}^p ≤ c (1-α)/(n-αp)^{p-1} ∫∫ |f(x)-f(y)|^p / |x-y|^{n+αp}` and
/// the same with `‖f‖_{p*,p}^p` on the left.
pub fn verify_bourgain(f: &GridFunction, function_id: &str, p: f64, alpha: f64, budgets: (f64, f64)) -> Result<Vec<InequalityReport>> {
    check_p(p)?;
    if !(0.5..1.0).contains(&alpha) {
        return param(format!("α must lie in [1/2, 1), got {alpha}"));
    }
    let n = f.dims() as f64;
    if alpha * p >= n {
        return param("need p < n/α");
    }
    let ps = n * p / (n - alpha * p);
    let g = gagliardo_seminorm(f, alpha, p)?;
    let rhs = (1.0 - alpha) / (n - alpha * p).powf(p - 1.0) * g;
    let sf = decreasing_rearrangement(f);
    let l1 = lorentz_norm(&sf, ps, ps)?.powf(p);
    let l2 = lorentz_norm(&sf, ps, p)?.powf(p);
    let params = json!({ "p": p, "alpha": alpha, "p_star": ps, "n": f.dims() });
    let note = if f.dims() > 1 { "gagliardo: midpoint rule, spherical exterior" } else { "" };
    Ok(vec![
        InequalityReport::evaluate(ids::BOURGAIN, function_id, params.clone(), l1, rhs, budgets.0).with_truncation(note),
        InequalityReport::evaluate(ids::BOURGAIN_LORENTZ, function_id, params, l2, rhs, budgets.1).with_truncation(note),
    ])
}

/// The one-dimensional bound `ω(f*;δ)_p ≤ 2 ω(f;δ)_p` on `[0,1]` (δ ≤ 1/2)
/// and, for every `σ` and axis, `ω_k(R_σ f;δ)_p ≤ 3ⁿ ω_k(f;δ)_p`.
pub fn verify_rearrangement_modulus(
    f: &GridFunction,
    function_id: &str,
    p: f64,
    deltas: &[f64],
    sigmas: &[Permutation],
) -> Result<Vec<InequalityReport>> {
    check_p(p)?;
    let n = f.dims();
    let mut out = Vec::new();
    if n == 1 && f.origin()[0] == 0.0 && (f.shape()[0] as f64 * f.cell_sizes()[0] - 1.0).abs() < 1e-12 {
        let star = crate::rearrange::axis_rearrangement(f, 0)?;
        let a = ModulusCurve::on_interval(&star, p)?;
        let b = ModulusCurve::on_interval(f, p)?;
        for &d in deltas.iter().filter(|&&d| d <= 0.5) {
            out.push(InequalityReport::evaluate(
                ids::REARRANGED_MODULUS_1D,
                function_id,
                json!({ "p": p, "delta": d, "domain": "[0,1]" }),
                a.omega(d),
                b.omega(d),
                2.0,
            ));
        }
    }
    let budget = 3f64.powi(n as i32);
    for sigma in sigmas {
        let g = iterated_rearrangement(f, sigma)?;
        for k in 0..n {
            let a = ModulusCurve::new(&g, k, p)?;
            let b = ModulusCurve::new(f, k, p)?;
            for &d in deltas {
                out.push(InequalityReport::evaluate(
                    ids::ITERATED_MODULUS,
                    function_id,
                    json!({ "p": p, "delta": d, "axis": k + 1, "sigma": sigma.to_string() }),
                    a.omega(d),
                    b.omega(d),
                    budget,
                ));
            }
        }
    }
    Ok(out)
}

/// `ω_k(δ) ≤ (3/δ) ∫_0^δ I_k`, `‖f - f_{h,j}‖_p ≤ ω_j(f;h)_p` and
/// `‖∂_j f_{h,j}‖_p ≤ ω_j(f;h)_p / h`. The Steklov checks run for the `δ`
/// that are multiples of the cell size along the axis.
pub fn verify_modulus_lemmas(f: &GridFunction, function_id: &str, p: f64, deltas: &[f64]) -> Result<Vec<InequalityReport>> {
    check_p(p)?;
    let mut out = Vec::new();
    for k in 0..f.dims() {
        let curve = ModulusCurve::new(f, k, p)?;
        let c = f.cell_sizes()[k];
        for &d in deltas {
            let params = json!({ "p": p, "axis": k + 1, "delta": d });
            let (w, avg) = crate::moduli::averaged_modulus_bound(&curve, d)?;
            out.push(InequalityReport::evaluate(ids::AVERAGED_MODULUS, function_id, params.clone(), w, avg / 3.0, 3.0));
            let m = (d / c).round();
            if m >= 1.0 && (m * c - d).abs() <= 1e-9 * d {
                let s = steklov_mean(f, d, k)?;
                out.push(InequalityReport::evaluate(ids::STEKLOV_DISTANCE, function_id, params.clone(), s.lp_distance(f, p)?, w, 1.0));
                let der = steklov_axis_derivative(f, d, k)?.lp_norm(p)?;
                out.push(InequalityReport::evaluate(ids::STEKLOV_DERIVATIVE, function_id, params, der, w / d, 1.0));
            }
        }
    }
    Ok(out)
}

/// Operator-T bound for every `(r, a)`; pointwise domination and the
/// axis-decrement bound when `φ` is nonincreasing in every variable.
pub fn verify_appendix_ops(
    phi: &GridFunction,
    function_id: &str,
    rs: &[u32],
    weights: &[f64],
    mus: &[f64],
    hs: &[f64],
    p: f64,
) -> Result<Vec<InequalityReport>> {
    let n = phi.dims();
    let mut out = Vec::new();
    for &r in rs {
        for &a in weights {
            let (l, rh) = operator_bound_sides(phi, r, a)?;
            out.push(InequalityReport::evaluate(
                ids::OPERATOR_T,
                function_id,
                json!({ "r": r, "a": a, "n": n }),
                l,
                rh,
                hard_budget(ids::OPERATOR_T, n, a, 0.0).unwrap(),
            ));
        }
    }
    if phi.is_mdec() {
        let w = monotone_domination_ratio(phi)?;
        let lhs = if phi.support_cells() == 0 { 0.0 } else { w };
        let rhs = if phi.support_cells() == 0 { 0.0 } else { 1.0 };
        out.push(InequalityReport::evaluate(ids::MONOTONE_T, function_id, json!({ "points": "cell corners and centres" }), lhs, rhs, 1.0));
        for k in 0..n {
            for &mu in mus {
                for &h in hs {
                    let (l, rh) = axis_decrement_sides(phi, k, h, mu, p)?;
                    // report the modulus quotient; the 4μ constant is the budget
                    out.push(InequalityReport::evaluate(
                        ids::AXIS_DECREMENT,
                        function_id,
                        json!({ "p": p, "axis": k + 1, "mu": mu, "h": h }),
                        l,
                        rh / (4.0 * mu),
                        4.0 * mu,
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Direction checks between plain and mixed Lorentz norms:
/// `‖f‖_{p,r} ≤ c ‖f‖_{p,r;σ}` for `r ≤ p` and the reverse for `p < r`.
pub fn verify_lorentz_comparison(
    f: &GridFunction,
    function_id: &str,
    p: f64,
    r: f64,
    sigma: &Permutation,
    budget: f64,
) -> Result<InequalityReport> {
    let plain = lorentz_norm(&decreasing_rearrangement(f), p, r)?;
    let mixed = mixed_lorentz_norm(&iterated_rearrangement(f, sigma)?, p, r)?;
    let params = json!({ "p": p, "r": json_real(r), "sigma": sigma.to_string() });
    Ok(if r <= p {
        InequalityReport::evaluate(ids::LORENTZ_MIXED_LOWER, function_id, params, plain, mixed, budget)
    } else {
        InequalityReport::evaluate(ids::LORENTZ_MIXED_UPPER, function_id, params, mixed, plain, budget)
    })
}

/// Whether `f` lives on `[0,1]` as the interval bound expects.
pub fn is_unit_interval(f: &GridFunction) -> bool {
    f.dims() == 1
        && f.origin()[0] == 0.0
        && f.domains()[0] == AxisDomain::Line
        && (f.shape()[0] as f64 * f.cell_sizes()[0] - 1.0).abs() < 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_gauge, GaugeGrid};
    use crate::norms::derive_params;

    fn unit_indicator(cells: usize) -> GridFunction {
        GridFunction::new(vec![cells], vec![1.0 / cells as f64], vec![0.0], vec![1.0; cells]).unwrap()
    }

    fn bump2d() -> GridFunction {
        let l = 16;
        let c = 1.0 / l as f64;
        let vals = (0..l * l)
            .map(|i| {
                let (a, b) = ((i / l) as f64 * c + c / 2.0, (i % l) as f64 * c + c / 2.0);
                let hat = |x: f64| (1.0 - (2.0 * x - 1.0).abs()).max(0.0);
                hat(a) * hat(b)
            })
            .collect();
        GridFunction::new(vec![l, l], vec![c, c], vec![0.0, 0.0], vals).unwrap()
    }

    #[test]
    fn zero_function_is_degenerate() {
        let z = GridFunction::new(vec![4], vec![0.25], vec![0.0], vec![0.0; 4]).unwrap();
        let r = verify_isotropic_estimate(&z, "zero", 1.0, 0.25, 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
    }

    #[test]
    fn isotropic_indicator_closed_form() {
        // f = χ_[0,1], p = 1, n = 1, δ = 1/4: inner integral is 0 on (0,1] and
        // 1 beyond, so LHS = ∫_1^∞ t^{-2} dt = 1; ω(1/4) = 1/2, RHS = 2
        let r = verify_isotropic_estimate(&unit_indicator(4), "ind", 1.0, 0.25, 10.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert!((r.rhs - 2.0).abs() < 1e-14);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn rearranged_modulus_constants_hold() {
        let f = GridFunction::new(vec![8], vec![0.125], vec![0.0], vec![0.0, 3.0, 1.0, 0.0, 2.0, 5.0, 0.0, 1.0]).unwrap();
        let reps = verify_rearrangement_modulus(&f, "f", 1.0, &[0.125, 0.25, 0.5], &[Permutation::identity(1)]).unwrap();
        assert!(reps.iter().any(|r| r.inequality_id == ids::REARRANGED_MODULUS_1D));
        assert!(reps.iter().all(|r| r.verdict != Verdict::Fail), "{reps:?}");
    }

    #[test]
    fn modulus_lemmas_on_indicator() {
        let reps = verify_modulus_lemmas(&unit_indicator(8), "ind", 1.0, &[0.125, 0.25, 0.3]).unwrap();
        assert_eq!(reps.iter().filter(|r| r.inequality_id == ids::STEKLOV_DISTANCE).count(), 2);
        assert!(reps.iter().all(|r| r.verdict == Verdict::Pass), "{reps:?}");
    }

    #[test]
    fn embedding_and_minkowski() {
        let f = bump2d();
        let bp = derive_params(1.0, &[0.5, 0.5], &[1.0, 1.0]).unwrap();
        let reps = verify_embedding(&f, "bump", &bp, &NormFlavor::Lorentz, f64::INFINITY, false).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[1].verdict, Verdict::Pass);
        assert!(reps[0].ratio.is_finite() && reps[0].ratio > 0.0);
        let open = derive_params(2.0, &[0.5, 0.5], &[1.0, 1.0]).unwrap();
        assert!(verify_embedding(&f, "bump", &open, &NormFlavor::Lorentz, 1.0, false).is_err());
        let r = verify_embedding(&f, "bump", &open, &NormFlavor::Lorentz, 1.0, true).unwrap();
        assert_eq!(r[0].verdict, Verdict::Unchecked);
    }

    #[test]
    fn anisotropic_estimate_runs() {
        let f = bump2d();
        let g = build_gauge(&f, &Permutation::identity(2), &GaugeGrid::AllEven).unwrap();
        let reps = verify_anisotropic_estimate(&f, "bump", 1.0, &g, &[1e6, 0.125], (f64::INFINITY, f64::INFINITY)).unwrap();
        assert_eq!(reps.len(), 8);
        assert_eq!(reps[0].verdict, Verdict::Degenerate);
        assert!(reps.iter().all(|r| r.verdict != Verdict::Fail));
        assert!(gauge_reports(&g, "bump").iter().all(|r| r.verdict == Verdict::Pass));
    }

    #[test]
    fn appendix_indicator() {
        let phi = GridFunction::on_positive_orthant(vec![4], vec![0.25], vec![1.0; 4]).unwrap();
        let reps = verify_appendix_ops(&phi, "ind", &[1, 2], &[-0.5, 1.0, 2.0], &[2.0], &[0.25], 1.0).unwrap();
        assert!(reps.iter().all(|r| r.verdict == Verdict::Pass), "{reps:?}");
    }

    #[test]
    fn hard_budgets() {
        assert_eq!(hard_budget(ids::ITERATED_MODULUS, 2, 0.0, 0.0), Some(9.0));
        assert_eq!(hard_budget(ids::OPERATOR_T, 2, 2.0, 0.0), Some(16.0));
        assert_eq!(hard_budget(ids::OPERATOR_T, 2, -0.5, 0.0), Some(4.0));
        assert_eq!(hard_budget(ids::AXIS_DECREMENT, 2, 0.0, 2.0), Some(8.0));
        assert_eq!(hard_budget(ids::EMBEDDING_LORENTZ, 2, 0.0, 0.0), None);
    }
}
