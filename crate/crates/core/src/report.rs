//! Structured outcome of a verification suite.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::scalar::Scalar;
use crate::weyl::WeylOp;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportContext {
    pub n: usize,
    pub k_mode: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub desc: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub ms: f64,
}

impl Check {
    /// Compares two operators; a space mismatch counts as a failed check.
    pub fn compare<S: Scalar>(
        id: impl Into<String>,
        desc: impl Into<String>,
        lhs: &WeylOp<S>,
        rhs: &WeylOp<S>,
        started: Instant,
    ) -> Check {
        let equal = lhs.equals(rhs).unwrap_or(false);
        Check {
            id: id.into(),
            desc: desc.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equal,
            ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    /// A check whose operands could not be built.
    pub fn failed(id: impl Into<String>, desc: impl Into<String>, err: &AlgebraError) -> Check {
        Check {
            id: id.into(),
            desc: desc.into(),
            lhs: format!("error: {err}"),
            rhs: String::new(),
            equal: false,
            ms: 0.0,
        }
    }

    pub fn boolean(
        id: impl Into<String>,
        desc: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        equal: bool,
        started: Instant,
    ) -> Check {
        Check {
            id: id.into(),
            desc: desc.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            equal,
            ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub context: ReportContext,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>, n: usize, checks: Vec<Check>) -> Report {
        let passed = checks.iter().filter(|c| c.equal).count();
        Report {
            suite: suite.into(),
            context: ReportContext {
                n,
                k_mode: "symbolic".into(),
            },
            summary: Summary {
                passed,
                failed: checks.len() - passed,
            },
            checks,
        }
    }

    /// Concatenates reports, prefixing check ids with the source suite name.
    pub fn merge(suite: impl Into<String>, n: usize, parts: Vec<Report>) -> Report {
        let checks = parts
            .into_iter()
            .flat_map(|r| {
                let prefix = r.suite;
                r.checks.into_iter().map(move |mut c| {
                    c.id = format!("{prefix}/{}", c.id);
                    c
                })
            })
            .collect();
        Report::new(suite, n, checks)
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Copy with every timing field zeroed, for byte-stable comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.ms = 0.0;
        }
        r
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (n={}, k={})",
            self.suite, self.context.n, self.context.k_mode
        )?;
        for c in &self.checks {
            let verdict = if c.equal { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {} {} [{:.1} ms]", c.id, c.desc, c.ms)?;
            if !c.equal {
                writeln!(f, "    lhs: {}", c.lhs)?;
                writeln!(f, "    rhs: {}", c.rhs)?;
            }
        }
        write!(
            f,
            "summary: {} passed, {} failed",
            self.summary.passed, self.summary.failed
        )
    }
}
