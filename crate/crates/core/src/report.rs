//! Machine-readable verdicts shared by all checkers.

use serde::Serialize;

/// One failing cell of a law, e.g. associativity at `(n, m, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub cell: Vec<usize>,
}

impl Violation {
    pub fn new(law: &str, cell: &[usize]) -> Self {
        Violation { law: law.to_string(), cell: cell.to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub cutoff: usize,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str, cutoff: usize) -> Self {
        Report { check: check.to_string(), passed: true, cutoff, violations: Vec::new(), notes: Vec::new() }
    }

    pub fn fail(&mut self, law: &str, cell: &[usize]) {
        self.passed = false;
        self.violations.push(Violation::new(law, cell));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Cells violating a given law.
    pub fn cells(&self, law: &str) -> Vec<Vec<usize>> {
        self.violations.iter().filter(|v| v.law == law).map(|v| v.cell.clone()).collect()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}
