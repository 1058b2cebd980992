use serde::Serialize;

use crate::error::{Error, Result};

use super::spectra::SpectrumKind;
use super::sweep::SweepRecord;

/// Growth statistics of `‖K⁻¹‖₂` across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSummary {
    pub count: usize,
    /// Least-squares exponent `α` in `‖K⁻¹‖ ≈ C n^α`.
    pub alpha: f64,
    pub log_c: f64,
    pub max_norm_over_log_n: f64,
    /// Least-squares slope of `‖K⁻¹‖ / ln n` against `ln n`.
    pub norm_over_log_n_trend: f64,
}

/// `points` are `(n, norm)` pairs.
pub fn conjecture_probe(points: &[(f64, f64)]) -> Result<ProbeSummary> {
    if points.len() < 10 {
        return Err(Error::Domain(format!("probe needs at least 10 points, got {}", points.len())));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n.ln(), v.ln())).collect();
    let (alpha, log_c) = least_squares(&logs);
    let ratios: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n.ln(), v / n.ln())).collect();
    let (trend, _) = least_squares(&ratios);
    let max_ratio = ratios.iter().map(|&(_, r)| r).fold(f64::NEG_INFINITY, f64::max);
    Ok(ProbeSummary {
        count: points.len(),
        alpha,
        log_c,
        max_norm_over_log_n: max_ratio,
        norm_over_log_n_trend: trend,
    })
}

/// Probe over the successful `Kinv` rows of a sweep.
pub fn probe_records(records: &[SweepRecord]) -> Result<ProbeSummary> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.kind == SpectrumKind::Kinv && r.is_ok())
        .filter_map(|r| r.values.as_ref().map(|v| (r.n as f64, v.spectral_norm)))
        .collect();
    conjecture_probe(&points)
}

/// Slope and intercept of the least-squares line through `xy`.
fn least_squares(xy: &[(f64, f64)]) -> (f64, f64) {
    let len = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / len;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}
