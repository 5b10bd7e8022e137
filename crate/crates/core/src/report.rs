//! Pass/fail records shared by every checker and by the CLI.

use serde::Serialize;
use std::fmt;

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    /// Human-readable name of the statement being verified.
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
    /// Location of the first violation, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(anchor: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { anchor: anchor.into(), passed: true, detail: detail.into(), witness: None }
    }

    pub fn fail(anchor: impl Into<String>, detail: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { anchor: anchor.into(), passed: false, detail: detail.into(), witness: Some(witness.into()) }
    }

    pub fn from_bool(anchor: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        if ok {
            Check::pass(anchor, detail)
        } else {
            let w = detail.clone();
            Check::fail(anchor, detail, w)
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "pass" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.anchor, self.detail)?;
        if let Some(w) = &self.witness {
            if !self.passed {
                write!(f, " (witness: {w})")?;
            }
        }
        Ok(())
    }
}

/// A named group of checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let n = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{}: {ok}/{n} passed", self.suite)
    }
}
