//! Inequality reports and limit traces.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Relative slack granted to comparisons of two exactly computed sides.
pub const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    /// Both sides vanish (zero function, empty domain).
    Degenerate,
    /// Logged without a verdict (outside the proven parameter range).
    Unchecked,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Degenerate => "degenerate",
            Verdict::Unchecked => "unchecked",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "degenerate" => Ok(Verdict::Degenerate),
            "unchecked" => Ok(Verdict::Unchecked),
            _ => Err(Error::Format(format!("unknown verdict '{s}'"))),
        }
    }
}

/// One checked instance of an inequality `lhs ≤ budget · rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub inequality_id: String,
    pub function_id: String,
    pub params: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; 0 when both vanish, ∞ when only `rhs` does.
    pub ratio: f64,
    pub budget: f64,
    pub verdict: Verdict,
    /// Free-form note on truncated integrals; empty when everything is exact.
    pub truncation: String,
}

impl InequalityReport {
    /// Builds a report and decides the verdict from the ratio.
    pub fn evaluate(
        inequality_id: impl Into<String>,
        function_id: impl Into<String>,
        params: serde_json::Value,
        lhs: f64,
        rhs: f64,
        budget: f64,
    ) -> Self {
        let ratio = ratio_of(lhs, rhs);
        let verdict = if lhs == 0.0 && rhs == 0.0 {
            Verdict::Degenerate
        } else if lhs.is_nan() || rhs.is_nan() {
            Verdict::Fail
        } else if ratio <= budget * (1.0 + ROUNDING_SLACK) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            inequality_id: inequality_id.into(),
            function_id: function_id.into(),
            params,
            lhs,
            rhs,
            ratio,
            budget,
            verdict,
            truncation: String::new(),
        }
    }

    /// Report whose verdict was decided elsewhere (integer arithmetic).
    pub fn decided(
        inequality_id: impl Into<String>,
        function_id: impl Into<String>,
        params: serde_json::Value,
        lhs: f64,
        rhs: f64,
        holds: bool,
    ) -> Self {
        let mut r = Self::evaluate(inequality_id, function_id, params, lhs, rhs, 1.0);
        if r.verdict != Verdict::Degenerate {
            r.verdict = if holds { Verdict::Pass } else { Verdict::Fail };
        }
        r
    }

    /// Both sides vanish or the domain is empty.
    pub fn degenerate(inequality_id: impl Into<String>, function_id: impl Into<String>, params: serde_json::Value, budget: f64) -> Self {
        Self::evaluate(inequality_id, function_id, params, 0.0, 0.0, budget)
    }

    pub fn with_truncation(mut self, note: impl Into<String>) -> Self {
        self.truncation = note.into();
        self
    }

    /// Drops the verdict while keeping the numbers.
    pub fn unchecked(mut self) -> Self {
        self.verdict = Verdict::Unchecked;
        self
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

pub(crate) fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

/// Shortest round-tripping text for a float.
pub(crate) fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn parse_real(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        _ => s.parse().map_err(|_| Error::Format(format!("not a number: '{s}'"))),
    }
}

pub const REPORT_HEADER: [&str; 9] = [
    "inequality_id",
    "function_id",
    "params_json",
    "lhs",
    "rhs",
    "ratio",
    "budget",
    "verdict",
    "truncation",
];

pub fn write_reports_csv<W: Write>(reports: &[InequalityReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(REPORT_HEADER)?;
    for r in reports {
        out.write_record([
            r.inequality_id.as_str(),
            r.function_id.as_str(),
            &r.params.to_string(),
            &fmt_real(r.lhs),
            &fmt_real(r.rhs),
            &fmt_real(r.ratio),
            &fmt_real(r.budget),
            &r.verdict.to_string(),
            r.truncation.as_str(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_reports_csv<R: Read>(r: R) -> Result<Vec<InequalityReport>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != REPORT_HEADER {
        return Err(Error::Format(format!("unexpected report header {header:?}")));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let params = serde_json::from_str(&rec[2]).map_err(|e| Error::Format(format!("params_json: {e}")))?;
        out.push(InequalityReport {
            inequality_id: rec[0].to_string(),
            function_id: rec[1].to_string(),
            params,
            lhs: parse_real(&rec[3])?,
            rhs: parse_real(&rec[4])?,
            ratio: parse_real(&rec[5])?,
            budget: parse_real(&rec[6])?,
            verdict: rec[7].parse()?,
            truncation: rec[8].to_string(),
        });
    }
    Ok(out)
}

/// Per-inequality aggregate used by the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub inequality_id: String,
    pub count: usize,
    pub pass: usize,
    pub fail: usize,
    pub degenerate: usize,
    pub unchecked: usize,
    /// Largest finite ratio among non-degenerate rows.
    pub worst_ratio: f64,
    pub budget: f64,
}

pub fn summarize(reports: &[InequalityReport]) -> Vec<SummaryRow> {
    let mut rows: std::collections::BTreeMap<&str, SummaryRow> = Default::default();
    for r in reports {
        let row = rows.entry(r.inequality_id.as_str()).or_insert_with(|| SummaryRow {
            inequality_id: r.inequality_id.clone(),
            count: 0,
            pass: 0,
            fail: 0,
            degenerate: 0,
            unchecked: 0,
            worst_ratio: 0.0,
            budget: r.budget,
        });
        row.count += 1;
        match r.verdict {
            Verdict::Pass => row.pass += 1,
            Verdict::Fail => row.fail += 1,
            Verdict::Degenerate => row.degenerate += 1,
            Verdict::Unchecked => row.unchecked += 1,
        }
        if r.verdict != Verdict::Degenerate && r.ratio > row.worst_ratio {
            row.worst_ratio = r.ratio;
        }
        row.budget = row.budget.max(r.budget);
    }
    rows.into_values().collect()
}

pub fn summary_text(reports: &[InequalityReport]) -> String {
    let mut s = format!(
        "{:<28} {:>6} {:>6} {:>6} {:>6} {:>6} {:>14} {:>14}\n",
        "inequality", "rows", "pass", "fail", "degen", "unchk", "worst_ratio", "budget"
    );
    for r in summarize(reports) {
        s.push_str(&format!(
            "{:<28} {:>6} {:>6} {:>6} {:>6} {:>6} {:>14} {:>14}\n",
            r.inequality_id,
            r.count,
            r.pass,
            r.fail,
            r.degenerate,
            r.unchecked,
            fmt_real(r.worst_ratio),
            fmt_real(r.budget)
        ));
    }
    s
}

/// One point of a limit trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Parameter approaching the limit, e.g. `1 - 2^{-m}`.
    pub parameter: f64,
    pub value: f64,
    pub target: f64,
}

impl TracePoint {
    /// `|value - target| / target` (absolute gap when the target is 0).
    pub fn relative_gap(&self) -> f64 {
        let d = (self.value - self.target).abs();
        if self.target == 0.0 {
            d
        } else {
            d / self.target.abs()
        }
    }
}

/// Values of a scaled quantity along a sequence approaching a limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitTrace {
    pub trace_id: String,
    pub function_id: String,
    pub params: serde_json::Value,
    pub points: Vec<TracePoint>,
}

impl LimitTrace {
    pub fn last_gap(&self) -> Option<f64> {
        self.points.last().map(TracePoint::relative_gap)
    }

    /// `max value / first value` over the trace.
    pub fn growth(&self) -> f64 {
        let first = self.points.first().map(|p| p.value).unwrap_or(0.0);
        let max = self.points.iter().map(|p| p.value).fold(0.0, f64::max);
        ratio_of(max, first)
    }

    /// `last value / first value`.
    pub fn end_to_start(&self) -> f64 {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => ratio_of(b.value, a.value),
            _ => 0.0,
        }
    }
}

pub const TRACE_HEADER: [&str; 7] = [
    "trace_id",
    "function_id",
    "params_json",
    "parameter",
    "value",
    "target",
    "relative_gap",
];

pub fn write_traces_csv<W: Write>(traces: &[LimitTrace], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRACE_HEADER)?;
    for t in traces {
        let params = t.params.to_string();
        for p in &t.points {
            out.write_record([
                t.trace_id.as_str(),
                t.function_id.as_str(),
                params.as_str(),
                &fmt_real(p.parameter),
                &fmt_real(p.value),
                &fmt_real(p.target),
                &fmt_real(p.relative_gap()),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn verdict_rules() {
        let r = InequalityReport::evaluate("x", "f", json!({}), 0.0, 0.0, 2.0);
        assert_eq!(r.verdict, Verdict::Degenerate);
        assert_eq!(r.ratio, 0.0);
        let r = InequalityReport::evaluate("x", "f", json!({}), 1.0, 0.0, 2.0);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = InequalityReport::evaluate("x", "f", json!({}), 2.0, 1.0, 2.0);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = InequalityReport::evaluate("x", "f", json!({}), 2.1, 1.0, 2.0);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = InequalityReport::decided("lw", "f", json!({}), 9.0, 4.0, false);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn csv_round_trip() {
        let reports = vec![
            InequalityReport::evaluate("a", "f0", json!({"p": 1.5, "axis": 1}), 0.1, 0.3, 3.0).with_truncation("[0.25, inf)"),
            InequalityReport::evaluate("b", "f1", json!({}), 1.0, 0.0, f64::INFINITY),
        ];
        let mut buf = Vec::new();
        write_reports_csv(&reports, &mut buf).unwrap();
        assert!(buf.starts_with(b"inequality_id,function_id,params_json,lhs,rhs,ratio,budget,verdict,truncation\n"));
        assert_eq!(read_reports_csv(&buf[..]).unwrap(), reports);
    }

    #[test]
    fn summary_counts() {
        let reports = vec![
            InequalityReport::evaluate("a", "f0", json!({}), 1.0, 1.0, 2.0),
            InequalityReport::evaluate("a", "f1", json!({}), 3.0, 1.0, 2.0),
            InequalityReport::evaluate("a", "f2", json!({}), 0.0, 0.0, 2.0),
        ];
        let s = summarize(&reports);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].pass, s[0].fail, s[0].degenerate), (1, 1, 1));
        assert_eq!(s[0].worst_ratio, 3.0);
        assert!(summary_text(&reports).contains("worst_ratio"));
    }

    #[test]
    fn trace_gaps() {
        let t = LimitTrace {
            trace_id: "t".into(),
            function_id: "f".into(),
            params: json!({}),
            points: vec![
                TracePoint { parameter: 0.5, value: 2.0, target: 1.0 },
                TracePoint { parameter: 0.75, value: 1.1, target: 1.0 },
            ],
        };
        assert!((t.last_gap().unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(t.growth(), 1.0);
        let mut buf = Vec::new();
        write_traces_csv(&[t], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }
}
