//! Validation reports: axiom checks never panic on bad data, they collect
//! violations with enough context to name a witness.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Stable machine-readable code, e.g. "assoc", "axiom-i".
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport { violations: Vec::new() }
    }

    pub fn push(&mut self, code: &'static str, message: impl Into<String>) {
        self.violations.push(Violation { code, message: message.into() });
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// First violation with the given code, if any.
    pub fn find(&self, code: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.code == code)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "violation {}: {}", v.code, v.message)?;
        }
        Ok(())
    }
}
