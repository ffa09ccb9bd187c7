//! Check records: one text line each, plus a JSON summary.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    pub detail: String,
    /// Measured quantities, keyed by name. Non-finite values serialize as null.
    pub values: BTreeMap<String, f64>,
}

impl CheckRecord {
    pub fn new(id: &str, passed: bool, detail: impl Into<String>) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        CheckRecord { id: id.to_string(), status, detail: detail.into(), values: BTreeMap::new() }
    }

    pub fn skipped(id: &str) -> Self {
        CheckRecord { id: id.to_string(), status: Status::Skipped, detail: "skipped by config".into(), values: BTreeMap::new() }
    }

    pub fn failed(id: &str, why: impl fmt::Display) -> Self {
        Self::new(id, false, format!("error: {why}"))
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.status.label(), self.id, self.detail)?;
        for (k, v) in &self.values {
            write!(f, " {k}={v:e}")?;
        }
        Ok(())
    }
}

/// A derived cochain or element printed alongside the checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Derived {
    pub label: String,
    pub terms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub command: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// True iff every check that ran passed.
    pub ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub derived: Vec<Derived>,
    pub checks: Vec<CheckRecord>,
}

impl Summary {
    pub fn new(command: &str, checks: Vec<CheckRecord>, derived: Vec<Derived>) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skipped));
        Summary { command: command.to_string(), passed, failed, skipped, ok: failed == 0, derived, checks }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for d in &self.derived {
            s.push_str(&format!("{}:\n", d.label));
            if d.terms.is_empty() {
                s.push_str("  0\n");
            }
            for t in &d.terms {
                s.push_str(&format!("  {t}\n"));
            }
        }
        for c in &self.checks {
            s.push_str(&format!("{c}\n"));
        }
        s.push_str(&format!(
            "{}: {} passed, {} failed, {} skipped\n",
            self.command, self.passed, self.failed, self.skipped
        ));
        s
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}
