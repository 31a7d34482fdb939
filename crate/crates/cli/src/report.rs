//! The `amen-report/1` document and its tabular rendering.

use std::collections::{BTreeMap, BTreeSet};

use amen_core::foelner::DeficitReport;
use amen_core::rational::format_rational;
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "amen-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub artifact: String,
    pub version: String,
    /// `exact`, or `exact+float` when a float-valued suite ran.
    pub arithmetic: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub stage: String,
    pub point: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRow {
    pub stage: String,
    pub values: BTreeMap<String, String>,
    pub epsilon: String,
    pub below_epsilon: bool,
}

/// A family of inequalities evaluated at every window point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub evaluated: usize,
    pub violations: usize,
    /// The first violation, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.into(), evaluated: 0, violations: 0, witness: None }
    }

    pub fn record(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.evaluated += 1;
        if !holds {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub window: usize,
    pub rows: Vec<Row>,
    pub stages: Vec<StageRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<String>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Sample tuples `(x, t)` used for kernel Gram matrices.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sample: Vec<(String, String)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.verdict == "epsilon-certified" || self.verdict == "pass"
    }

    /// Converts a core deficit report; `inv_key` names the invariance column.
    pub fn from_deficits(suite: &str, window: usize, report: &DeficitReport, inv_key: &str) -> Self {
        let rows = report
            .rows
            .iter()
            .map(|r| {
                let mut values = BTreeMap::new();
                if let Some(n) = &r.norm {
                    values.insert("norm".to_string(), format_rational(n));
                }
                values.insert(inv_key.to_string(), format_rational(&r.inv));
                Row {
                    stage: r.stage.to_string(),
                    point: r.point.to_string(),
                    element: r.element.as_ref().map(|e| e.to_string()),
                    values,
                }
            })
            .collect();
        let stages = report
            .stages
            .iter()
            .map(|s| {
                let mut values = BTreeMap::new();
                if let Some(n) = &s.norm {
                    values.insert("norm".to_string(), format_rational(n));
                }
                values.insert(inv_key.to_string(), format_rational(&s.inv));
                StageRow {
                    stage: s.stage.to_string(),
                    values,
                    epsilon: format_rational(&s.epsilon),
                    below_epsilon: s.below_epsilon,
                }
            })
            .collect();
        SuiteReport {
            suite: suite.into(),
            window,
            rows,
            stages,
            trend: Some(report.trend.name().into()),
            verdict: report.verdict.name().into(),
            checks: Vec::new(),
            notes: report.notes.clone(),
            sample: Vec::new(),
        }
    }

    /// Fails the suite when any check has a violation.
    pub fn apply_checks(&mut self) {
        if self.passed() && !self.checks.iter().all(Check::passed) {
            self.verdict = "checks-failed".into();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub provenance: Provenance,
    pub scenario: serde_json::Value,
    pub suites: Vec<SuiteReport>,
    pub verdict: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Tab-separated values: a header, then one line per (stage, window element)
    /// evaluation carrying its stage's ε and the suite verdict.
    pub fn to_tsv(&self) -> String {
        let keys: BTreeSet<&str> =
            self.suites.iter().flat_map(|s| s.rows.iter().flat_map(|r| r.values.keys())).map(String::as_str).collect();
        let mut header = vec!["suite", "window", "stage", "point", "element"];
        header.extend(keys.iter().copied());
        header.extend(["epsilon", "below_epsilon", "verdict"]);
        let mut out = header.join("\t") + "\n";
        for s in &self.suites {
            let window = s.window.to_string();
            let stages: BTreeMap<&str, &StageRow> = s.stages.iter().map(|st| (st.stage.as_str(), st)).collect();
            for r in &s.rows {
                let stage = stages.get(r.stage.as_str());
                let below = stage.map_or("", |st| if st.below_epsilon { "true" } else { "false" });
                let mut line = vec![s.suite.as_str(), &window, &r.stage, &r.point, r.element.as_deref().unwrap_or("")];
                line.extend(keys.iter().map(|k| r.values.get(*k).map_or("", String::as_str)));
                line.extend([stage.map_or("", |st| st.epsilon.as_str()), below, s.verdict.as_str()]);
                out.push_str(&line.join("\t"));
                out.push('\n');
            }
        }
        out
    }
}
