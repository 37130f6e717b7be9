//! Named residual checks and their aggregation.

use serde::{Deserialize, Serialize};

/// One checked claim: `pass` holds iff `residual < tolerance` (NaN fails).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub immersion: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
    /// What the residual measures, in words.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub claim: String,
}

impl CheckRecord {
    pub fn new(
        check: impl Into<String>,
        immersion: impl Into<String>,
        residual: f64,
        tolerance: f64,
        samples: usize,
    ) -> Self {
        Self {
            check: check.into(),
            immersion: immersion.into(),
            residual,
            tolerance,
            pass: residual < tolerance,
            samples,
            claim: String::new(),
        }
    }

    /// A check that passes when `value > threshold`, stored as
    /// `residual = threshold / value` against tolerance 1.
    pub fn lower_bound(
        check: impl Into<String>,
        immersion: impl Into<String>,
        value: f64,
        threshold: f64,
        samples: usize,
    ) -> Self {
        let residual = if value > 0.0 {
            threshold / value
        } else {
            f64::INFINITY
        };
        Self::new(check, immersion, residual, 1.0, samples)
            .with_claim(format!("value {value:.6e} must exceed {threshold:e}"))
    }

    pub fn with_claim(mut self, claim: impl Into<String>) -> Self {
        self.claim = claim.into();
        self
    }

    /// A check whose evaluation itself failed.
    pub fn failed(
        check: impl Into<String>,
        immersion: impl Into<String>,
        tolerance: f64,
        reason: impl Into<String>,
    ) -> Self {
        Self::new(check, immersion, f64::NAN, tolerance, 0).with_claim(reason)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn summary(&self) -> Summary {
        let passed = self.records.iter().filter(|r| r.pass).count();
        Summary {
            passed,
            failed: self.records.len() - passed,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn get(&self, check: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == check)
    }
}
