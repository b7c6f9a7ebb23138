//! Inductive conformal prediction for regression.
//!
//! Nonconformity is the absolute residual `|y - ŷ|` on a calibration split.
//! The interval half-width is the k-th smallest calibration score with
//! `k = ⌈(n+1)(1-α)⌉`, which gives finite-sample marginal coverage of at
//! least `1-α` under exchangeability of calibration and test residuals.
//! Intervals are symmetric and of constant width: `[ŷ - ε, ŷ + ε]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Temporal data may violate exchangeability; every report carries this.
pub const EXCHANGEABILITY_NOTE: &str = "interval validity assumes exchangeability \
of calibration and forecast residuals; temporal data may violate this assumption";

#[derive(Debug, Error)]
pub enum ConformalError {
    #[error("calibration inputs are empty")]
    Empty,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error("too few calibration points: rank k = {k} exceeds n = {n}; need n >= k")]
    TooFewCalibrationPoints { k: usize, n: usize },
    #[error("nonconformity scores must be finite")]
    NonFiniteScore,
}

/// Calibrated interval half-width and the scores it came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConformalCalibration {
    /// Miscoverage level in (0, 1); 0.05 targets 95 % coverage.
    pub alpha: f64,
    /// Sorted nonconformity scores from the calibration split.
    pub scores: Vec<f64>,
    /// Interval half-width: the k-th smallest score, `k = ⌈(n+1)(1-α)⌉`.
    pub epsilon: f64,
    pub n_cal: usize,
}

/// Symmetric constant-width intervals around point forecasts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalForecast {
    pub point: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub alpha: f64,
}

/// Fraction of actuals inside their interval, plus the violating indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageReport {
    pub coverage: f64,
    pub out_of_bounds: Vec<usize>,
    pub n: usize,
}

/// Absolute residuals `|y_i - ŷ_i|`, sorted ascending.
pub fn nonconformity_scores(y: &[f64], y_hat: &[f64]) -> Result<Vec<f64>, ConformalError> {
    if y.len() != y_hat.len() {
        return Err(ConformalError::LengthMismatch {
            left: y.len(),
            right: y_hat.len(),
        });
    }
    if y.is_empty() {
        return Err(ConformalError::Empty);
    }
    let mut scores: Vec<f64> = y.iter().zip(y_hat).map(|(a, p)| (a - p).abs()).collect();
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(ConformalError::NonFiniteScore);
    }
    scores.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    Ok(scores)
}

/// The finite-sample rank `⌈(n+1)(1-α)⌉`.
fn conformal_rank(n: usize, alpha: f64) -> usize {
    (((n + 1) as f64) * (1.0 - alpha)).ceil() as usize
}

/// Calibrate the half-width from nonconformity scores.
///
/// Scores may arrive in any order; they are sorted here.
pub fn calibrate(scores: &[f64], alpha: f64) -> Result<ConformalCalibration, ConformalError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ConformalError::InvalidAlpha(alpha));
    }
    if scores.is_empty() {
        return Err(ConformalError::Empty);
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(ConformalError::NonFiniteScore);
    }
    let mut sorted = scores.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    let n = sorted.len();
    let k = conformal_rank(n, alpha);
    if k > n {
        return Err(ConformalError::TooFewCalibrationPoints { k, n });
    }
    let epsilon = sorted[k - 1];
    Ok(ConformalCalibration {
        alpha,
        scores: sorted,
        epsilon,
        n_cal: n,
    })
}

/// Symmetric intervals `[p - ε, p + ε]` around each point forecast.
///
/// No clamping is applied here; physical clamps (e.g. rates cannot go
/// negative) are a report-level option.
pub fn predict_interval(point: &[f64], cal: &ConformalCalibration) -> IntervalForecast {
    let lower = point.iter().map(|p| p - cal.epsilon).collect();
    let upper = point.iter().map(|p| p + cal.epsilon).collect();
    IntervalForecast {
        point: point.to_vec(),
        lower,
        upper,
        alpha: cal.alpha,
    }
}

/// Audit closed-interval coverage against actuals.
pub fn coverage_report(
    intervals: &IntervalForecast,
    actual: &[f64],
) -> Result<CoverageReport, ConformalError> {
    if intervals.point.len() != actual.len() {
        return Err(ConformalError::LengthMismatch {
            left: intervals.point.len(),
            right: actual.len(),
        });
    }
    if actual.is_empty() {
        return Err(ConformalError::Empty);
    }
    let mut out_of_bounds = Vec::new();
    for (i, &a) in actual.iter().enumerate() {
        if a < intervals.lower[i] || a > intervals.upper[i] {
            out_of_bounds.push(i);
        }
    }
    let n = actual.len();
    Ok(CoverageReport {
        coverage: (n - out_of_bounds.len()) as f64 / n as f64,
        out_of_bounds,
        n,
    })
}
