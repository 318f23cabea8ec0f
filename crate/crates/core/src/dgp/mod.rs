//! Synthetic data generation and truth-recovery experiments.
//!
//! The generator ([`generate`]) draws ticket-level observations from a
//! configurable world model ([`DgpConfig`]) whose every distributional choice
//! is an explicit field: true coefficients, sparse control effects, market
//! shapes, and the fleet. Recovery experiments ([`recovery_experiment`])
//! replicate generation plus estimation and report coverage, bias, and sign
//! agreement against the configured truth.

pub mod config;
pub mod generate;
pub mod recovery;

pub use config::{
    BucketEffects, ControlEffects, DensityTruth, DgpConfig, FleetShape, MarketShape, MiddleTruth,
    TrueEffects, MAX_DATE_LEVELS,
};
pub use generate::{fleet_reference_entries, generate, GeneratedDataset, LN_INDEX_PRODUCT};
pub use recovery::{
    coverage_csv_string, recovery_experiment, render_coverage_text, write_coverage_csv,
    CoefficientRecovery, CoverageReport, Estimator, RecoverySettings,
};
