//! Verification reports.
//!
//! Failures are collected with full witnesses rather than failing fast; the
//! report is the product. Collection is capped so a badly broken model does
//! not produce gigabytes of counterexamples.

use serde::Serialize;

use crate::element::Element;

/// Most failures kept per report.
pub const MAX_FAILURES: usize = 32;

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub inputs: Vec<Element>,
    pub lhs: Element,
    pub rhs: Element,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub samples: u64,
    pub failures: Vec<Failure>,
    /// Total failures observed, including ones dropped by the cap.
    #[serde(rename = "failure-count")]
    pub failure_count: u64,
}

impl IdentityReport {
    pub fn new(identity: impl Into<String>) -> IdentityReport {
        IdentityReport { identity: identity.into(), samples: 0, failures: Vec::new(), failure_count: 0 }
    }

    pub fn record_failure(&mut self, failure: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(failure);
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Largest residual among recorded failures; zero when the report passed.
    pub fn max_residual(&self) -> f64 {
        self.failures.iter().map(|f| f.residual).fold(0.0, f64::max)
    }
}

pub fn all_passed(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::passed)
}
