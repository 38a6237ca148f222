//! Pass/fail records for invariant suites.

use alloc::string::String;
use alloc::vec::Vec;

/// One failed (or notable) check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub check: String,
    /// Location of the check: a complex point, a radius pair, a grid index.
    pub at: Vec<f64>,
    /// Signed slack; negative means the check failed.
    pub margin: f64,
}

/// Outcome of a suite of checks with worst-case margin.
///
/// Margins are normalized so that a check passes iff its margin is `≥ 0`;
/// `worst_margin` is the smallest margin seen (`+∞` for an empty suite).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerifyReport {
    pub suite: String,
    pub n_checks: usize,
    pub n_failures: usize,
    pub worst_margin: f64,
    pub witnesses: Vec<Witness>,
}

const MAX_WITNESSES: usize = 64;

impl VerifyReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerifyReport {
            suite: suite.into(),
            n_checks: 0,
            n_failures: 0,
            worst_margin: f64::INFINITY,
            witnesses: Vec::new(),
        }
    }

    /// Record a check.  A NaN margin counts as a failure.
    pub fn record(&mut self, check: &str, at: &[f64], margin: f64) {
        self.n_checks += 1;
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
        if margin < 0.0 {
            self.n_failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(Witness { check: check.into(), at: at.to_vec(), margin });
            }
        }
    }

    /// Record an outright failure, e.g. an evaluation error.
    pub fn fail(&mut self, check: &str, at: &[f64]) {
        self.record(check, at, f64::NEG_INFINITY);
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.n_checks += other.n_checks;
        self.n_failures += other.n_failures;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.n_failures == 0
    }
}
