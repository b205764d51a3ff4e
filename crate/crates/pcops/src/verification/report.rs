//! Machine-readable check results.

use serde::{Deserialize, Serialize};

/// Result of one empirical claim check.
///
/// `passed` holds exactly when `worst_residual <= tolerance`; the
/// constructor maintains that invariant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub claim_id: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    /// Method description, parameters, and seed behind the check.
    pub context: String,
}

impl ClaimCheck {
    pub fn new(
        claim_id: impl Into<String>,
        worst_residual: f64,
        tolerance: f64,
        samples: usize,
        context: impl Into<String>,
    ) -> Self {
        ClaimCheck {
            claim_id: claim_id.into(),
            passed: worst_residual <= tolerance,
            worst_residual,
            samples,
            tolerance,
            context: context.into(),
        }
    }

    /// One-line human-readable summary.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: worst_residual={:e} tolerance={:e} samples={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.claim_id,
            self.worst_residual,
            self.tolerance,
            self.samples
        )
    }
}

/// Pass/fail tallies of a report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

/// Where a report came from: hash of the configuration, the seed, and the
/// build that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub build: String,
}

/// A batch of claim checks with tallies and provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<ClaimCheck>,
    pub summary: Summary,
    pub provenance: Provenance,
}

impl VerificationReport {
    pub fn new(checks: Vec<ClaimCheck>, provenance: Provenance) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        let failed = checks.len() - passed;
        VerificationReport {
            checks,
            summary: Summary { passed, failed },
            provenance,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_within_tolerance() {
        let ok = ClaimCheck::new("c", 1e-12, 1e-9, 10, "ctx");
        assert!(ok.passed);
        let bad = ClaimCheck::new("c", 2e-9, 1e-9, 10, "ctx");
        assert!(!bad.passed);
        let edge = ClaimCheck::new("c", 1e-9, 1e-9, 10, "ctx");
        assert!(edge.passed);
    }

    #[test]
    fn summary_matches_tallies() {
        let checks = vec![
            ClaimCheck::new("a", 0.0, 1e-9, 1, ""),
            ClaimCheck::new("b", 1.0, 1e-9, 1, ""),
            ClaimCheck::new("c", 0.0, 1e-9, 1, ""),
        ];
        let report = VerificationReport::new(
            checks,
            Provenance {
                config_hash: "x".into(),
                seed: 0,
                build: "test".into(),
            },
        );
        assert_eq!(report.summary, Summary { passed: 2, failed: 1 });
        assert!(!report.all_passed());
    }
}
