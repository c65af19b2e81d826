//! Check reports, printed for people or as JSON.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded but not part of the verdict.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Report { command: command.into(), seed, checks: Vec::new(), pass: true }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, witness: Option<String>) {
        self.pass &= ok;
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(Check { name: name.into(), status, witness });
    }

    pub fn info(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status: Status::Info, witness: Some(value.into()) });
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(out, "  [{tag}] {}: {w}", c.name);
                }
                None => {
                    let _ = writeln!(out, "  [{tag}] {}", c.name);
                }
            }
        }
        let passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(
            out,
            "{}: {passed} passed, {failed} failed",
            if self.pass { "PASS" } else { "FAIL" }
        );
        if let Some(c) = self.first_failure() {
            let _ = writeln!(out, "first failure: {} ({})", c.name, c.witness.as_deref().unwrap_or("no witness"));
        }
        out
    }
}
