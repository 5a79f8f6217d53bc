//! Machine-readable suite reports.  Serialization order is fixed (structs and
//! BTreeMaps), so re-running with the same config and seed reproduces the
//! JSON byte-for-byte apart from the runtime field.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteStatus {
    Pass,
    Fail,
    /// A measured constant moved by more than the stability factor 2 under
    /// refinement; never reported as a silent pass.
    Inconclusive,
    /// The window-support hypothesis of the boundedness theorem is not met;
    /// recorded, not a failure.
    HypothesisNotMet,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: SuiteStatus,
    pub pass: bool,
    /// Measured constants (max ratios, defects, fitted slopes, ...).
    pub constants: BTreeMap<String, f64>,
    /// Ratio by which the headline constant moved under one grid refinement;
    /// above 2 the suite is marked inconclusive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<f64>,
    pub samples: Vec<SampleRecord>,
    pub config: serde_json::Value,
    pub seed: u64,
    pub notes: Vec<String>,
    pub runtime_s: f64,
}

impl SuiteReport {
    pub fn new(suite: &str, config: serde_json::Value, seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            status: SuiteStatus::Pass,
            pass: true,
            constants: BTreeMap::new(),
            stability: None,
            samples: Vec::new(),
            config,
            seed,
            notes: Vec::new(),
            runtime_s: 0.0,
        }
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Record an assertion outcome; any failure flips the suite to Fail.
    pub fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.pass = false;
            self.status = SuiteStatus::Fail;
            self.notes.push(format!("FAILED: {name}"));
        }
    }

    /// Record a refinement-stability factor; a factor above 2 marks the suite
    /// inconclusive (never a silent pass), and all constants must be finite.
    pub fn apply_stability(&mut self, factor: f64) {
        self.stability = Some(factor);
        if !factor.is_finite() || factor > 2.0 {
            if self.status == SuiteStatus::Pass {
                self.status = SuiteStatus::Inconclusive;
            }
            self.pass = false;
            self.notes
                .push(format!("stability factor {factor:.3} exceeds 2"));
        }
    }

    pub fn finalize(&mut self, started: std::time::Instant) {
        self.runtime_s = started.elapsed().as_secs_f64();
        if self.constants.values().any(|v| !v.is_finite()) {
            self.pass = false;
            self.status = SuiteStatus::Fail;
            self.notes.push("non-finite constant".into());
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &std::path::Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Per-sample ratios as CSV with the fixed column set.
    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut out = std::fs::File::create(path)?;
        writeln!(out, "suite,sample_id,s,p,p1,p2,lhs,rhs,ratio")?;
        for rec in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.suite,
                rec.id,
                rec.s.map(|v| v.to_string()).unwrap_or_default(),
                rec.p.clone().unwrap_or_default(),
                rec.p1.clone().unwrap_or_default(),
                rec.p2.clone().unwrap_or_default(),
                rec.lhs.map(|v| v.to_string()).unwrap_or_default(),
                rec.rhs.map(|v| v.to_string()).unwrap_or_default(),
                rec.ratio.map(|v| v.to_string()).unwrap_or_default(),
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_and_stability_flow() {
        let mut r = SuiteReport::new("demo", serde_json::json!({}), 1);
        r.check("fine", true);
        assert!(r.pass);
        r.apply_stability(1.3);
        assert!(r.pass);
        r.apply_stability(2.5);
        assert!(!r.pass);
        assert_eq!(r.status, SuiteStatus::Inconclusive);

        let mut r = SuiteReport::new("demo", serde_json::json!({}), 1);
        r.check("broken", false);
        assert_eq!(r.status, SuiteStatus::Fail);
    }

    #[test]
    fn nonfinite_constants_fail() {
        let mut r = SuiteReport::new("demo", serde_json::json!({}), 1);
        r.constant("c", f64::INFINITY);
        r.finalize(std::time::Instant::now());
        assert!(!r.pass);
    }

    #[test]
    fn csv_columns() {
        let mut r = SuiteReport::new("demo", serde_json::json!({}), 1);
        r.samples.push(SampleRecord {
            id: "a".into(),
            s: Some(0.5),
            p: Some("2".into()),
            p1: Some("4".into()),
            p2: Some("4".into()),
            lhs: Some(1.0),
            rhs: Some(2.0),
            ratio: Some(0.5),
        });
        let dir = std::env::temp_dir().join("dunkl-report-test.csv");
        r.write_csv(&dir).unwrap();
        let text = std::fs::read_to_string(&dir).unwrap();
        assert!(text.starts_with("suite,sample_id,s,p,p1,p2,lhs,rhs,ratio"));
        assert!(text.contains("demo,a,0.5,2,4,4,1,2,0.5"));
    }
}
