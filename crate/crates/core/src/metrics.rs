//! Forecast error and performance metrics.
//!
//! Three error metrics (MAE, RMSE, sMAPE) and two performance metrics
//! (forecast bias and prediction direction accuracy), bundled into a
//! [`MetricReport`] per evaluated dataset.
//!
//! Conventions:
//! - forecast bias is `mean(y - ŷ)`, so a positive value means actuals
//!   exceed forecasts, i.e. the model under-predicts (see [`BIAS_LEGEND`]);
//! - sMAPE uses the 0–200 % symmetric-denominator form with `0/0` terms
//!   contributing zero;
//! - PDA counts a flat step matched by a flat step as correct.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Printed alongside every report so the sign convention is unambiguous.
pub const BIAS_LEGEND: &str =
    "positive bias = actual exceeds forecast (under-prediction)";

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("metric inputs are empty")]
    Empty,
    #[error("metric length mismatch: actual has {actual}, predicted has {predicted}")]
    LengthMismatch { actual: usize, predicted: usize },
    #[error("direction accuracy needs at least 2 points, got {0}")]
    TooShort(usize),
}

fn check_pair(y: &[f64], y_hat: &[f64]) -> Result<(), MetricError> {
    if y.len() != y_hat.len() {
        return Err(MetricError::LengthMismatch {
            actual: y.len(),
            predicted: y_hat.len(),
        });
    }
    if y.is_empty() {
        return Err(MetricError::Empty);
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(y: &[f64], y_hat: &[f64]) -> Result<f64, MetricError> {
    check_pair(y, y_hat)?;
    let sum: f64 = y.iter().zip(y_hat).map(|(a, p)| (a - p).abs()).sum();
    Ok(sum / y.len() as f64)
}

/// Root mean squared error.
pub fn rmse(y: &[f64], y_hat: &[f64]) -> Result<f64, MetricError> {
    check_pair(y, y_hat)?;
    let sum: f64 = y.iter().zip(y_hat).map(|(a, p)| (a - p) * (a - p)).sum();
    Ok((sum / y.len() as f64).sqrt())
}

/// Symmetric mean absolute percentage error, in percent (0–200).
///
/// Terms where `|y| + |ŷ| = 0` contribute zero while still counting
/// towards `n`.
pub fn smape(y: &[f64], y_hat: &[f64]) -> Result<f64, MetricError> {
    check_pair(y, y_hat)?;
    let sum: f64 = y
        .iter()
        .zip(y_hat)
        .map(|(a, p)| {
            let denom = a.abs() + p.abs();
            if denom == 0.0 {
                0.0
            } else {
                2.0 * (p - a).abs() / denom
            }
        })
        .sum();
    Ok(100.0 * sum / y.len() as f64)
}

/// Mean signed error `mean(y - ŷ)`.
pub fn forecast_bias(y: &[f64], y_hat: &[f64]) -> Result<f64, MetricError> {
    check_pair(y, y_hat)?;
    let sum: f64 = y.iter().zip(y_hat).map(|(a, p)| a - p).sum();
    Ok(sum / y.len() as f64)
}

fn step_sign(next: f64, prev: f64) -> i8 {
    if next > prev {
        1
    } else if next < prev {
        -1
    } else {
        0
    }
}

/// Prediction direction accuracy, in percent.
///
/// Over consecutive steps, counts how often the predicted direction of
/// change (`-1`, `0`, `+1`) matches the actual one.
pub fn pda(y: &[f64], y_hat: &[f64]) -> Result<f64, MetricError> {
    check_pair(y, y_hat)?;
    if y.len() < 2 {
        return Err(MetricError::TooShort(y.len()));
    }
    let mut hits = 0usize;
    for t in 1..y.len() {
        if step_sign(y[t], y[t - 1]) == step_sign(y_hat[t], y_hat[t - 1]) {
            hits += 1;
        }
    }
    Ok(100.0 * hits as f64 / (y.len() - 1) as f64)
}

/// Which dataset a report was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetTag {
    /// Held-out chronological test split.
    Test,
    /// Out-of-sample forecast horizon.
    Forecast,
    /// Reservoir-simulator output compared against actual production.
    SimulatedVsActual,
}

impl DatasetTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            DatasetTag::Test => "test",
            DatasetTag::Forecast => "forecast",
            DatasetTag::SimulatedVsActual => "simulated-vs-actual",
        }
    }
}

/// All five metrics for one (model, dataset) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mae: f64,
    pub rmse: f64,
    pub smape: f64,
    pub forecast_bias: f64,
    pub pda: f64,
    pub n: usize,
    pub tag: DatasetTag,
}

impl MetricReport {
    /// Header of the comparison-table CSV rows produced by [`Self::csv_row`].
    pub fn csv_header() -> &'static str {
        "tag,n,mae,rmse,smape,forecast_bias,pda"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.tag.as_str(),
            self.n,
            self.mae,
            self.rmse,
            self.smape,
            self.forecast_bias,
            self.pda
        )
    }
}

/// Compute all five metrics at once.
pub fn metric_report(y: &[f64], y_hat: &[f64], tag: DatasetTag) -> Result<MetricReport, MetricError> {
    Ok(MetricReport {
        mae: mae(y, y_hat)?,
        rmse: rmse(y, y_hat)?,
        smape: smape(y, y_hat)?,
        forecast_bias: forecast_bias(y, y_hat)?,
        pda: pda(y, y_hat)?,
        n: y.len(),
        tag,
    })
}
