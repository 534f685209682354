//! Check results shared by every verification routine and by the CLI.

use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named verification outcome, optionally with a witness for failures
/// and a rendered value (e.g. a central charge).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<serde_json::Value>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Pass, witness: None, value: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Fail, witness: Some(witness.into()), value: None }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Check {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, witness())
        }
    }

    pub fn with_value(mut self, value: serde_json::Value) -> Check {
        self.value = Some(value);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A list of checks; passes iff every entry passes.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Folds all checks whose name starts with `prefix` into one entry,
    /// keeping the first failure as witness.
    pub fn summarize(&self, prefix: &str, name: &str) -> Check {
        let mut count = 0;
        for c in self.checks.iter().filter(|c| c.name.starts_with(prefix)) {
            count += 1;
            if !c.passed() {
                return Check::fail(name, format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()));
            }
        }
        Check::pass(name).with_value(serde_json::json!({ "cases": count }))
    }
}
