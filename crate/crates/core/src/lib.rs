//! Airline fare decomposition: seat-map parsing, design assembly,
//! selection-based estimation, and synthetic benchmarking.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`cabin`] parses seat-map text into validated layouts, classifies every
//!    seat structurally (window, middle, aisle, exit row, last row, extra
//!    pitch), and computes the two cabin densification indices.
//! 2. [`design`] turns ticket-level observation records plus a specification
//!    from the cumulative ladder into a design matrix: log fare outcome,
//!    interest columns, and sparse indicator blocks of selection candidates.
//! 3. [`lasso`] and [`pds`] estimate the specification: a plugin-penalty
//!    coordinate-descent lasso selects controls from each block, and the
//!    post-double-selection refit reports cluster-robust standard errors for
//!    the interest terms.
//! 4. [`dgp`] generates synthetic ticket data with known truth and replays
//!    the full estimator over many replications to measure coverage and bias.
//!
//! [`market`] holds the round-half-up dispersion tabulations and
//! concentration measures used for data diagnostics, [`report`] renders
//! estimation results as text tables and machine-readable CSV, and the
//! numeric core ([`linalg`], [`stats`], [`scalar`]) is generic over the
//! floating-point scalar.
//!
//! Everything is deterministic: identical inputs, settings, and seeds
//! produce byte-identical outputs.

pub mod cabin;
pub mod design;
pub mod dgp;
pub mod error;
pub mod lasso;
pub mod linalg;
pub mod market;
pub mod pds;
pub mod report;
pub mod scalar;
pub mod stats;

/// The scalar type the command-line tools and default pipelines use.
pub type Scalar = f64;

pub use error::{Error, Result};
