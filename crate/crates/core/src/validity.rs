//! Dimensionless regime checks (far-field ratios, brightness, bandwidth).

use crate::{Error, Result};
use serde::Serialize;

/// What to do when a check fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Severity {
    /// Record the failure and carry on.
    #[default]
    Warn,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

/// A check of the form `value <= threshold` (or `>=` when `at_least`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub at_least: bool,
    pub status: CheckStatus,
}

impl ValidityCheck {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        let ok = value <= threshold;
        Self::build(name, value, threshold, false, ok)
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        let ok = value >= threshold;
        Self::build(name, value, threshold, true, ok)
    }

    fn build(name: &str, value: f64, threshold: f64, at_least: bool, ok: bool) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold,
            at_least,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Warn },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// Turn a failed check into an error under [`Severity::Error`]; otherwise
    /// hand the check back for reporting.
    pub fn enforce(mut self, severity: Severity) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        match severity {
            Severity::Warn => Ok(self),
            Severity::Error => {
                self.status = CheckStatus::Fail;
                Err(Error::Validity { name: self.name, value: self.value, threshold: self.threshold })
            }
        }
    }
}
