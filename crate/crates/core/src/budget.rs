//! Frozen empirical budgets for inequalities stated without a constant.
//!
//! A budget file is flat `key = value` text: `corpus_hash` names the corpus
//! the budgets were measured on, every other key is an inequality id mapped
//! to twice the worst ratio seen during calibration.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::config::parse_real;
use crate::error::{Error, Result};
use crate::report::{fmt_real, InequalityReport, Verdict};
use crate::verify::hard_budget;

/// Multiplier applied to the worst calibrated ratio.
pub const CALIBRATION_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetFile {
    pub corpus_hash: String,
    pub budgets: BTreeMap<String, f64>,
}

/// Whether an inequality takes its budget from calibration.
pub fn is_calibrated(id: &str) -> bool {
    hard_budget(id, 1, 0.0, 1.0).is_none()
}

impl BudgetFile {
    /// Worst ratio per calibrated inequality, times [`CALIBRATION_FACTOR`].
    /// Degenerate and unchecked reports are skipped; an infinite ratio makes
    /// the inequality uncalibratable.
    pub fn calibrate(reports: &[InequalityReport], corpus_hash: &str) -> Result<Self> {
        let mut worst: BTreeMap<String, f64> = BTreeMap::new();
        for r in reports {
            if !is_calibrated(&r.inequality_id) || matches!(r.verdict, Verdict::Degenerate | Verdict::Unchecked) {
                continue;
            }
            if !r.ratio.is_finite() {
                return Err(Error::Precondition(format!(
                    "cannot calibrate {}: infinite ratio for {} at {}",
                    r.inequality_id, r.function_id, r.params
                )));
            }
            let e = worst.entry(r.inequality_id.clone()).or_insert(0.0);
            *e = e.max(r.ratio);
        }
        let budgets = worst
            .into_iter()
            .map(|(k, v)| (k, (CALIBRATION_FACTOR * v).max(f64::MIN_POSITIVE)))
            .collect();
        Ok(BudgetFile {
            corpus_hash: corpus_hash.to_string(),
            budgets,
        })
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.budgets.get(id).copied()
    }

    pub fn check_hash(&self, actual: &str) -> Result<()> {
        if self.corpus_hash != actual {
            return Err(Error::HashMismatch {
                expected: self.corpus_hash.clone(),
                actual: actual.to_string(),
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# calibrated constant budgets\n");
        s.push_str(&format!("corpus_hash = {}\n", self.corpus_hash));
        for (k, v) in &self.budgets {
            s.push_str(&format!("{k} = {}\n", fmt_real(*v)));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut hash = None;
        let mut budgets = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("budget line {}: expected key = value", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "corpus_hash" {
                hash = Some(v.to_string());
            } else {
                let b = parse_real(v)?;
                if !(b > 0.0 && b.is_finite()) {
                    return Err(Error::Config(format!("budget for {k} must be positive and finite")));
                }
                budgets.insert(k.to_string(), b);
            }
        }
        Ok(BudgetFile {
            corpus_hash: hash.ok_or_else(|| Error::Config("budget file lacks corpus_hash".into()))?,
            budgets,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Refuses to replace an existing file unless `force`.
    pub fn write(&self, path: &Path, force: bool) -> Result<()> {
        if path.exists() && !force {
            return Err(Error::Config(format!("{} exists; pass --force to overwrite", path.display())));
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_text().as_bytes())?;
        Ok(())
    }
}
