//! Structured verification results.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, details: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            details,
        }
    }

    pub fn pass(name: impl Into<String>, details: Value) -> Self {
        Self::new(name, true, details)
    }

    pub fn fail(name: impl Into<String>, details: Value) -> Self {
        Self::new(name, false, details)
    }

    /// A failed check carrying an error message.
    pub fn error(name: impl Into<String>, err: &crate::Error) -> Self {
        Self::new(name, false, serde_json::json!({ "error": err.to_string() }))
    }
}

/// Checks for one group, in execution order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub group: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(group: impl Into<String>) -> Self {
        Report {
            group: group.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
