//! Pass/fail bookkeeping shared by the representation, operator and spectral checks.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Residual {
    /// Exact check; `true` means the residual was not identically zero.
    Exact(bool),
    /// Floating-point residual magnitude.
    Norm(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub indices: Vec<usize>,
    pub residual: Residual,
    /// Point at which a nonzero value was observed (exact rationals as "p/q").
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    /// Identity labels that were checked, in order.
    pub checked: Vec<String>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Default for CheckReport {
    fn default() -> Self {
        Self::new()
    }
}

impl CheckReport {
    pub fn new() -> Self {
        Self { passed: true, checked: Vec::new(), violations: Vec::new(), notes: Vec::new() }
    }

    pub fn checked(&mut self, label: impl Into<String>) {
        let label = label.into();
        if !self.checked.contains(&label) {
            self.checked.push(label);
        }
    }

    pub fn violate(&mut self, v: Violation) {
        self.checked(v.identity.clone());
        self.violations.push(v);
        self.passed = false;
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Merge another report; labels keep first-seen order.
    pub fn merge(&mut self, other: CheckReport) {
        for c in other.checked {
            self.checked(c);
        }
        if !other.violations.is_empty() {
            self.passed = false;
        }
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    pub fn violations_for(&self, identity: &str) -> impl Iterator<Item = &Violation> + '_ {
        let id = identity.to_string();
        self.violations.iter().filter(move |v| v.identity == id)
    }
}
