//! Numerical tolerances shared by classification and simulation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("tolerance `{name}` must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("`{name}` must be at least {min}")]
    TooSmall { name: &'static str, min: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Accepted error of a rational approximation to a frequency ratio.
    pub ratio_eps: f64,
    /// Largest denominator tried when approximating a frequency ratio.
    pub max_denominator: u64,
    /// Relative singular-value threshold for numeric ranks.
    pub rank_tol: f64,
    /// Largest admissible closure residual at a claimed period.
    pub period_tol: f64,
    /// Smallest residual counted as evidence that a time is not a period.
    pub separation: f64,
    /// Largest admissible lcm of ratio denominators.
    pub max_lcm: u64,
    /// Time samples per residual sweep.
    pub samples: usize,
    /// Sweep horizon; defaults to four periods, or 50 without a period.
    pub horizon: Option<f64>,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            ratio_eps: 1e-9,
            max_denominator: 64,
            rank_tol: 1e-9,
            period_tol: 1e-8,
            separation: 1e-3,
            max_lcm: 1_000_000,
            samples: 64,
            horizon: None,
        }
    }
}

/// Horizon used for non-periodic evidence when none is configured.
pub const DEFAULT_EVIDENCE_HORIZON: f64 = 50.0;

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in [
            ("ratio_eps", self.ratio_eps),
            ("rank_tol", self.rank_tol),
            ("period_tol", self.period_tol),
            ("separation", self.separation),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::NonPositive { name, value });
            }
        }
        if let Some(h) = self.horizon {
            if !(h.is_finite() && h > 0.0) {
                return Err(ConfigError::NonPositive { name: "horizon", value: h });
            }
        }
        if self.max_denominator < 1 {
            return Err(ConfigError::TooSmall { name: "max_denominator", min: 1 });
        }
        if self.max_lcm < 1 {
            return Err(ConfigError::TooSmall { name: "max_lcm", min: 1 });
        }
        if self.samples < 2 {
            return Err(ConfigError::TooSmall { name: "samples", min: 2 });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(ToleranceConfig::default().validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let cfg = ToleranceConfig { rank_tol: 0.0, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(ConfigError::NonPositive { name: "rank_tol", .. })));
        let cfg = ToleranceConfig { max_denominator: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ToleranceConfig { samples: 1, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ToleranceConfig { horizon: Some(f64::NAN), ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
