use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Logarithm used inside the cosine argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Ten => x.log10(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Natural => "e",
            LogBase::Ten => "10",
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "ln" | "natural" => Ok(LogBase::Natural),
            "10" | "log10" => Ok(LogBase::Ten),
            other => Err(Error::Parse(format!("log base must be e or 10, got {other:?}"))),
        }
    }
}

/// Constants of the oscillatory overlay
/// `A cos(ω log n − φ) √(ln ln ln n)` and of the reference term
/// `A₀ cos(ω log n − φ₀)`. `ω` is close to the ordinate of the first
/// nontrivial zeta zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitCurveConfig {
    pub amplitude: f64,
    pub angular_frequency: f64,
    pub phase: f64,
    pub reference_amplitude: f64,
    pub reference_phase: f64,
    pub log_base: LogBase,
}

impl Default for FitCurveConfig {
    fn default() -> Self {
        Self {
            amplitude: 1.05,
            angular_frequency: 14.14,
            phase: 2.2,
            reference_amplitude: 0.36,
            reference_phase: 1.69,
            log_base: LogBase::Natural,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSample {
    pub n: f64,
    pub overlay: f64,
    pub reference: f64,
}

/// Smallest admissible `n`: `ln ln ln n` must be nonnegative past `e^e`.
const MIN_N: f64 = 16.0;

pub fn fit_overlay(config: &FitCurveConfig, n_grid: &[f64]) -> Result<Vec<FitSample>> {
    n_grid
        .iter()
        .map(|&n| {
            if !(n >= MIN_N) {
                return Err(Error::Domain(format!("overlay is defined for n >= 16, got {n}")));
            }
            let log_n = config.log_base.log(n);
            let growth = n.ln().ln().ln().sqrt();
            let overlay = config.amplitude * (config.angular_frequency * log_n - config.phase).cos() * growth;
            let reference =
                config.reference_amplitude * (config.angular_frequency * log_n - config.reference_phase).cos();
            Ok(FitSample { n, overlay, reference })
        })
        .collect()
}
