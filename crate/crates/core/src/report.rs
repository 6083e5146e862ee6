//! Validation reports shared by every checker in the crate.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// How bad a finding is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    /// A law is definitely violated; the finding carries a witness.
    Violation,
    /// The bounded prover could not decide the law within its budget.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    /// Short rule identifier, e.g. `"associativity"` or `"elementary.2"`.
    pub rule: String,
    /// Human readable witness.
    pub detail: String,
}

/// A list of findings. Empty means every checked law holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn violation(&mut self, rule: impl Into<String>, detail: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Violation,
            rule: rule.into(),
            detail: detail.into(),
        });
    }

    pub fn undecided(&mut self, rule: impl Into<String>, detail: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Undecided,
            rule: rule.into(),
            detail: detail.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
    }

    /// Prefixes every rule name, used when nesting reports.
    pub fn scoped(mut self, scope: &str) -> Self {
        for f in &mut self.findings {
            f.rule = alloc::format!("{scope}.{}", f.rule);
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_violations(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Violation)
    }

    pub fn has_undecided(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Undecided)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Violation)
    }

    /// True if some finding's rule contains `needle`.
    pub fn mentions(&self, needle: &str) -> bool {
        self.findings.iter().any(|f| f.rule.contains(needle) || f.detail.contains(needle))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.findings.is_empty() {
            return write!(f, "ok");
        }
        for (i, finding) in self.findings.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let tag = match finding.severity {
                Severity::Violation => "violation",
                Severity::Undecided => "undecided",
            };
            write!(f, "{tag} [{}]: {}", finding.rule, finding.detail)?;
        }
        Ok(())
    }
}
