//! Production-rate forecasting for oil wells: data ingest and imputation,
//! reservoir-physics features, changepoint diagnostics, recurrent and
//! gradient-boosted point forecasters, and inductive conformal prediction
//! intervals with coverage auditing.
//!
//! The crate is organised around the stages of a forecasting run:
//!
//! - [`ingest`]: CSV parsing, daily resampling, k-nearest-neighbour
//!   imputation, chronological splits.
//! - [`features`]: productivity index, Wiggins three-phase IPR ratios,
//!   feature selection and z-score scaling.
//! - [`changepoint`]: PELT and binary segmentation over univariate series,
//!   with a brute-force oracle for small inputs.
//! - [`models`]: LSTM / BiLSTM / GRU trained by backpropagation through
//!   time, a squared-error gradient-boosted tree ensemble, windowing and
//!   hyperparameter search behind one [`models::Forecaster`] contract.
//! - [`conformal`]: residual nonconformity scores, finite-sample quantile
//!   calibration, symmetric intervals, coverage reports.
//! - [`metrics`]: MAE, RMSE, sMAPE, forecast bias, prediction direction
//!   accuracy.
//! - [`synth`]: physically-motivated synthetic well generator used as the
//!   reproducible test substrate.
//! - [`pipeline`]: the end-to-end run driven by a JSON config; the
//!   `wellcast` CLI is a thin wrapper over it.

pub mod changepoint;
pub mod conformal;
pub mod features;
pub mod ingest;
pub mod metrics;
pub mod models;
pub mod pipeline;
pub mod synth;
