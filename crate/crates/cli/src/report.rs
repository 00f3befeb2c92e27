//! The machine-readable run report.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::{Analysis, GridConfig, SurfaceConfig, ToleranceSet};

pub const SCHEMA: &str = "lightlike-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

/// One residual against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Check {
        Check { name: name.into(), value, tolerance, comparison: Comparison::AtMost, passed: value <= tolerance }
    }

    pub fn at_least(name: &str, value: f64, tolerance: f64) -> Check {
        Check { name: name.into(), value, tolerance, comparison: Comparison::AtLeast, passed: value >= tolerance }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (verdict, op) = match (self.passed, self.comparison) {
            (true, Comparison::AtMost) => ("PASS", "<="),
            (true, Comparison::AtLeast) => ("PASS", ">="),
            (false, Comparison::AtMost) => ("FAIL", ">"),
            (false, Comparison::AtLeast) => ("FAIL", "<"),
        };
        write!(f, "{verdict} {} = {:e} {op} {:e}", self.name, self.value, self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub analysis: Analysis,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default)]
    pub counts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl AnalysisReport {
    pub fn new(analysis: Analysis) -> Self {
        AnalysisReport {
            analysis,
            checks: Vec::new(),
            metrics: BTreeMap::new(),
            counts: BTreeMap::new(),
            verdict: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.into(), v);
    }

    pub fn count(&mut self, name: &str, v: usize) {
        self.counts.insert(name.into(), v as u64);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub surface: SurfaceConfig,
    pub grid: GridConfig,
    pub tolerances: ToleranceSet,
    pub analyses: Vec<AnalysisReport>,
    pub passed: bool,
}

impl Report {
    pub fn new(
        surface: SurfaceConfig,
        grid: GridConfig,
        tolerances: ToleranceSet,
        analyses: Vec<AnalysisReport>,
    ) -> Self {
        let passed = analyses.iter().all(AnalysisReport::passed);
        Report { schema: SCHEMA.into(), surface, grid, tolerances, analyses, passed }
    }

    /// Name of the first non-finite number, if any. JSON has no encoding
    /// for them.
    pub fn first_non_finite(&self) -> Option<String> {
        for a in &self.analyses {
            for c in &a.checks {
                if !c.value.is_finite() || !c.tolerance.is_finite() {
                    return Some(format!("{}/{}", a.analysis.name(), c.name));
                }
            }
            if let Some((k, _)) = a.metrics.iter().find(|(_, v)| !v.is_finite()) {
                return Some(format!("{}/{k}", a.analysis.name()));
            }
        }
        None
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> serde_json::Result<Report> {
        serde_json::from_str(src)
    }
}
