// SPDX-License-Identifier: Apache-2.0

//! Check outcomes with witnesses, printable as a table or as JSON.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// First nonzero defect for a failure, pretty-printed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Extra lines shown under the check (values, component lists).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(default)]
    pub elapsed_ms: u64,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            details: Vec::new(),
            elapsed_ms: 0,
        }
    }

    /// A failure always carries a witness.
    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            status: Status::Fail,
            witness: Some(witness.into()),
            ..Check::pass(name)
        }
    }

    pub fn skip(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            status: Status::Skip,
            details: vec![reason.into()],
            ..Check::pass(name)
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    pub fn with_details(mut self, details: Vec<String>) -> Self {
        self.details.extend(details);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs `f` and records its wall time on the returned check.
pub fn timed(f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut c = f();
    c.elapsed_ms = start.elapsed().as_millis() as u64;
    c
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            input: input.into(),
            options: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Statuses only, for comparing reruns.
    pub fn statuses(&self) -> Vec<(String, Status)> {
        self.checks.iter().map(|c| (c.name.clone(), c.status)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Report> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.command, self.input)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(f, "  {:<width$}  {}  {:>6} ms", c.name, c.status, c.elapsed_ms)?;
            if let Some(w) = &c.witness {
                writeln!(f, "      witness: {}", w)?;
            }
            for d in &c.details {
                writeln!(f, "      {}", d)?;
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}
