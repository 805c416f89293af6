//! Versioned machine-readable output of every command.

use dualgraph::{Check, MoveLog};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "dualgraph-certificate/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    /// Arguments after the program name, as given.
    pub command: Vec<String>,
    pub input: Value,
    pub checks: Vec<Check>,
    pub moves: MoveLog,
    pub result: Value,
    /// Set when the command stopped on a domain error.
    pub error: Option<String>,
    /// Exit status of the command.
    pub status: i32,
}

impl Certificate {
    pub fn new(command: Vec<String>, input: Value) -> Self {
        Certificate {
            schema: SCHEMA.to_string(),
            command,
            input,
            checks: Vec::new(),
            moves: MoveLog::new(),
            result: Value::Null,
            error: None,
            status: 0,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.pass)
    }

    /// Sets `status` from the checks and the error.
    pub fn seal(mut self) -> Self {
        self.status = if self.all_pass() { 0 } else { 1 };
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }
}

/// One line per check, `[pass]` or `[FAIL]` first.
pub fn check_lines(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let tag = if c.pass { "[pass]" } else { "[FAIL]" };
        out.push_str(&format!(
            "{tag} {}: expected {}, computed {}\n",
            c.name, c.expected, c.computed
        ));
    }
    out
}
