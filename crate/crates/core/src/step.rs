//! Left-continuous step functions on ℝ₊.

use std::io::{BufRead, Write};

use crate::error::{param, Error, Result};

/// Nonnegative left-continuous step function on `(0, ∞)`.
///
/// Takes the value `values[i]` on `(breakpoints[i-1], breakpoints[i]]`
/// (with `breakpoints[-1] = 0`) and `0` beyond the last breakpoint.
/// Rearrangements are nonincreasing; differences such as `g(t) - g(2t)` are
/// not, so monotonicity is a checked property rather than an invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::Validation("breakpoints and values differ in length".into()));
        }
        let mut prev = 0.0;
        for &t in &breakpoints {
            if !(t.is_finite() && t > prev) {
                return Err(Error::Validation(format!(
                    "breakpoints must be finite and strictly increasing from 0 (got {t} after {prev})"
                )));
            }
            prev = t;
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Validation("step values must be finite and ≥ 0".into()));
        }
        Ok(Self { breakpoints, values }.canonical())
    }

    /// Same as [`Self::new`] but also requires nonincreasing values.
    pub fn nonincreasing(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Validation("values must be nonincreasing".into()));
        }
        Self::new(breakpoints, values)
    }

    pub fn zero() -> Self {
        Self {
            breakpoints: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Merges equal neighbours and drops trailing zero pieces.
    fn canonical(self) -> Self {
        let mut b: Vec<f64> = Vec::with_capacity(self.breakpoints.len());
        let mut v: Vec<f64> = Vec::with_capacity(self.values.len());
        for (t, x) in self.breakpoints.into_iter().zip(self.values) {
            if v.last() == Some(&x) {
                *b.last_mut().unwrap() = t;
            } else {
                b.push(t);
                v.push(x);
            }
        }
        while v.last() == Some(&0.0) {
            v.pop();
            b.pop();
        }
        Self {
            breakpoints: b,
            values: v,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Right end of the support.
    pub fn support_end(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    /// Pieces `(left, right, value)`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .scan(0.0, |left, (&b, &v)| {
                let a = *left;
                *left = b;
                Some((a, b, v))
            })
    }

    /// Value at `t > 0`; `t ≤ 0` returns the right limit at 0.
    pub fn eval(&self, t: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        if t <= 0.0 {
            return self.values[0];
        }
        let i = self.breakpoints.partition_point(|&b| b < t);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// Exact `∫_lo^hi t^{a-1} g(t)^r dt` for `0 ≤ lo ≤ hi ≤ ∞`.
    ///
    /// Returns `∞` when the weight is not integrable at 0 on a piece where
    /// `g > 0`.
    pub fn power_weight_integral(&self, a: f64, r: f64, lo: f64, hi: f64) -> f64 {
        self.pieces()
            .map(|(l, h, v)| {
                let (l, h) = (l.max(lo), h.min(hi));
                if h <= l || v == 0.0 {
                    0.0
                } else {
                    v.powf(r) * power_integral(a, l, h)
                }
            })
            .sum()
    }

    /// `sup_{t>0} t^s g(t)` for `s > 0`; attained at a right breakpoint.
    /// Returns the value and the point where it is attained.
    pub fn weighted_sup(&self, s: f64) -> (f64, f64) {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| (t.powf(s) * v, t))
            .fold((0.0, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc })
    }

    /// `(∫ g^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0 && p.is_finite()) {
            return param(format!("L^p norm needs 1 ≤ p < ∞, got {p}"));
        }
        Ok(self
            .pieces()
            .map(|(l, h, v)| v.powf(p) * (h - l))
            .sum::<f64>()
            .powf(1.0 / p))
    }

    /// Writes `t_right,value` rows with a header comment stating the
    /// left-continuous convention.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# left-continuous step function: value v on (t_prev, t_right], t_prev = 0 for the first row, 0 beyond the last row")?;
        writeln!(w, "t_right,value")?;
        for (t, v) in self.breakpoints.iter().zip(&self.values) {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut b = Vec::new();
        let mut v = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("t_right") {
                continue;
            }
            let (t, x) = line
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("bad step row '{line}'")))?;
            b.push(parse_f64(t)?);
            v.push(parse_f64(x)?);
        }
        Self::new(b, v)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Format(format!("not a number: '{s}'")))
}

/// `∫_l^h t^{a-1} dt` for `0 ≤ l < h ≤ ∞`, in closed form.
pub(crate) fn power_integral(a: f64, l: f64, h: f64) -> f64 {
    if a == 0.0 {
        if l == 0.0 || h.is_infinite() {
            f64::INFINITY
        } else {
            (h / l).ln()
        }
    } else if a > 0.0 {
        if h.is_infinite() {
            f64::INFINITY
        } else {
            (h.powf(a) - l.powf(a)) / a
        }
    } else if l == 0.0 {
        f64::INFINITY
    } else {
        let hp = if h.is_infinite() { 0.0 } else { h.powf(a) };
        (l.powf(a) - hp) / (-a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_merges_and_trims() {
        let s = StepFunction::new(vec![1.0, 2.0, 3.0, 4.0], vec![2.0, 2.0, 1.0, 0.0]).unwrap();
        assert_eq!(s.breakpoints(), &[2.0, 3.0]);
        assert_eq!(s.values(), &[2.0, 1.0]);
    }

    #[test]
    fn left_continuous_eval() {
        let s = StepFunction::new(vec![0.5, 1.0], vec![3.0, 2.0]).unwrap();
        assert_eq!(s.eval(0.5), 3.0);
        assert_eq!(s.eval(0.500001), 2.0);
        assert_eq!(s.eval(1.0), 2.0);
        assert_eq!(s.eval(1.1), 0.0);
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(StepFunction::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(StepFunction::new(vec![0.0], vec![1.0]).is_err());
        assert!(StepFunction::nonincreasing(vec![1.0, 2.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn power_integrals() {
        // ∫_0^4 t^{-1/2} dt = 4
        let s = StepFunction::new(vec![4.0], vec![1.0]).unwrap();
        assert!((s.power_weight_integral(0.5, 1.0, 0.0, f64::INFINITY) - 4.0).abs() < 1e-14);
        assert!((power_integral(0.0, 1.0, std::f64::consts::E) - 1.0).abs() < 1e-15);
        assert!((power_integral(-1.0, 1.0, f64::INFINITY) - 1.0).abs() < 1e-15);
        assert!(power_integral(-1.0, 0.0, 1.0).is_infinite());
    }

    #[test]
    fn csv_round_trip() {
        let s = StepFunction::new(vec![0.5, 1.0, 1.5], vec![3.0, 2.0, 1.0]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("# left-continuous"));
        assert_eq!(StepFunction::read_csv(&buf[..]).unwrap(), s);
    }
}
