//! Replicated truth-recovery experiments.
//!
//! A recovery experiment generates many datasets from one configuration
//! (each replication reseeded deterministically from the base seed), estimates
//! the matching specification on each, and aggregates how well the interest
//! coefficients recover their configured truths: bias, empirical spread,
//! confidence-interval coverage, and sign agreement. Running the same
//! experiment with the interests-only estimator, which skips control
//! selection entirely, quantifies the bias the selection step removes.

use rayon::prelude::*;

use crate::design::{build_design, EstimationSpec, SpecId};
use crate::error::{Error, Result};
use crate::pds::{run_specification, PdsSettings};

use super::config::DgpConfig;
use super::generate::{generate, splitmix64};

/// Two-sided 95% normal critical value.
const Z_975: f64 = 1.959_963_984_540_054_2;

/// Which estimator a recovery experiment runs on each replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// Selection over the control blocks, then the refit with union controls.
    PostDoubleSelection,
    /// Intercept and interest terms only; no controls enter at all.
    InterestsOnly,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::PostDoubleSelection => "post-double-selection",
            Estimator::InterestsOnly => "interests-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoverySettings {
    pub estimator: Estimator,
    pub pds: PdsSettings,
}

impl Default for RecoverySettings {
    fn default() -> Self {
        RecoverySettings {
            estimator: Estimator::PostDoubleSelection,
            pds: PdsSettings::default(),
        }
    }
}

/// Recovery summary for one interest coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRecovery {
    pub name: String,
    pub truth: f64,
    pub mean_estimate: f64,
    /// `mean_estimate - truth`.
    pub bias: f64,
    /// Standard deviation of the estimates across replications.
    pub empirical_sd: f64,
    pub mean_std_error: f64,
    /// Share of replications with `|estimate - truth| <= 2 se`.
    pub coverage_2se: f64,
    /// Share of replications whose nominal 95% interval covers the truth.
    pub coverage_95: f64,
    /// Share of replications where the estimate has the truth's sign
    /// (counted as a match whenever the truth is zero).
    pub sign_match_rate: f64,
}

/// Aggregate of one recovery experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub spec: SpecId,
    pub estimator: Estimator,
    pub replications: usize,
    pub coefficients: Vec<CoefficientRecovery>,
    /// Mean refit RMSE over replications; absent when every replication fit
    /// perfectly.
    pub mean_rmse: Option<f64>,
}

struct Replication {
    /// `(estimate, cluster-robust standard error)` per interest term.
    estimates: Vec<(f64, f64)>,
    rmse: Option<f64>,
}

fn replication_seed(base: u64, replication: usize) -> u64 {
    splitmix64(base ^ (replication as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn run_replication(
    config: &DgpConfig,
    spec: &EstimationSpec,
    settings: &RecoverySettings,
    replication: usize,
) -> Result<Replication> {
    let rep_config = config.clone().with_seed(replication_seed(config.seed, replication));
    let dataset = generate(&rep_config)?;
    let matrix = build_design::<f64>(&dataset.records, spec)?;
    let result = run_specification(&matrix, &settings.pds)?;
    let estimates =
        result.interests.iter().map(|e| (e.coefficient, e.std_error)).collect();
    Ok(Replication { estimates, rmse: result.fit.map(|f| f.rmse) })
}

/// Generate and estimate `replications` datasets and summarize recovery of
/// the configured truth for `spec_id`. Deterministic in the configuration.
pub fn recovery_experiment(
    config: &DgpConfig,
    spec_id: SpecId,
    replications: usize,
    settings: &RecoverySettings,
) -> Result<CoverageReport> {
    if replications == 0 {
        return Err(Error::validation("need at least one replication".to_string()));
    }
    config.validate()?;
    let truth = config.truth_for(spec_id)?;
    let mut spec = EstimationSpec::for_id(spec_id);
    if settings.estimator == Estimator::InterestsOnly {
        spec.control_blocks.clear();
    }

    let outcomes: Vec<Result<Replication>> = (0..replications)
        .into_par_iter()
        .map(|r| run_replication(config, &spec, settings, r))
        .collect();

    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    if failed > 0 {
        let (first_rep, first_err) = outcomes
            .iter()
            .enumerate()
            .find_map(|(r, o)| o.as_ref().err().map(|e| (r, e.to_string())))
            .expect("at least one failure");
        return Err(Error::computation(format!(
            "{failed} of {replications} replications failed; first (replication \
             {first_rep}): {first_err}"
        )));
    }

    let terms = truth.len();
    let mut sum_est = vec![0.0f64; terms];
    let mut sum_sq_est = vec![0.0f64; terms];
    let mut sum_se = vec![0.0f64; terms];
    let mut hits_2se = vec![0usize; terms];
    let mut hits_95 = vec![0usize; terms];
    let mut hits_sign = vec![0usize; terms];
    let mut rmse_sum = 0.0f64;
    let mut rmse_count = 0usize;

    for outcome in &outcomes {
        let rep = outcome.as_ref().expect("failures handled above");
        if rep.estimates.len() != terms {
            return Err(Error::computation(
                "replication returned the wrong number of coefficients".to_string(),
            ));
        }
        for (idx, &(estimate, se)) in rep.estimates.iter().enumerate() {
            let (_, truth_value) = truth[idx];
            let tolerance = 1e-8 * truth_value.abs().max(1.0);
            let miss = (estimate - truth_value).abs();
            sum_est[idx] += estimate;
            sum_sq_est[idx] += estimate * estimate;
            sum_se[idx] += se;
            if miss <= 2.0 * se + tolerance {
                hits_2se[idx] += 1;
            }
            if miss <= Z_975 * se + tolerance {
                hits_95[idx] += 1;
            }
            if truth_value == 0.0 || estimate.signum() == truth_value.signum() {
                hits_sign[idx] += 1;
            }
        }
        if let Some(rmse) = rep.rmse {
            rmse_sum += rmse;
            rmse_count += 1;
        }
    }

    let r = replications as f64;
    let coefficients = truth
        .iter()
        .enumerate()
        .map(|(idx, &(var, truth_value))| {
            let mean = sum_est[idx] / r;
            let variance = if replications > 1 {
                ((sum_sq_est[idx] - r * mean * mean) / (r - 1.0)).max(0.0)
            } else {
                0.0
            };
            CoefficientRecovery {
                name: var.name(),
                truth: truth_value,
                mean_estimate: mean,
                bias: mean - truth_value,
                empirical_sd: variance.sqrt(),
                mean_std_error: sum_se[idx] / r,
                coverage_2se: hits_2se[idx] as f64 / r,
                coverage_95: hits_95[idx] as f64 / r,
                sign_match_rate: hits_sign[idx] as f64 / r,
            }
        })
        .collect();

    Ok(CoverageReport {
        spec: spec_id,
        estimator: settings.estimator,
        replications,
        coefficients,
        mean_rmse: (rmse_count > 0).then(|| rmse_sum / rmse_count as f64),
    })
}

/// Plain-text rendering of a coverage report.
pub fn render_coverage_text(report: &CoverageReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "truth recovery, specification ({}), {}, {} replications\n",
        report.spec.number(),
        report.estimator.name(),
        report.replications
    ));
    match report.mean_rmse {
        Some(rmse) => out.push_str(&format!("mean refit RMSE {rmse:.4}\n")),
        None => out.push_str("mean refit RMSE undefined (perfect fits)\n"),
    }
    let name_width = report
        .coefficients
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    out.push_str(&format!(
        "{:<name_width$}  {:>9}  {:>9}  {:>9}  {:>8}  {:>8}  {:>6}  {:>6}  {:>6}\n",
        "term", "truth", "mean est", "bias", "emp sd", "mean se", "2se", "95%", "sign"
    ));
    for c in &report.coefficients {
        out.push_str(&format!(
            "{:<name_width$}  {:>9.4}  {:>9.4}  {:>9.1e}  {:>8.4}  {:>8.4}  {:>5.1}%  {:>5.1}%  {:>5.1}%\n",
            c.name,
            c.truth,
            c.mean_estimate,
            c.bias,
            c.empirical_sd,
            c.mean_std_error,
            100.0 * c.coverage_2se,
            100.0 * c.coverage_95,
            100.0 * c.sign_match_rate,
        ));
    }
    out
}

/// Write a coverage report as CSV, one row per coefficient.
pub fn write_coverage_csv<W: std::io::Write>(writer: W, report: &CoverageReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "spec",
        "estimator",
        "replications",
        "name",
        "truth",
        "mean_estimate",
        "bias",
        "empirical_sd",
        "mean_std_error",
        "coverage_2se",
        "coverage_95",
        "sign_match_rate",
        "mean_rmse",
    ])?;
    let rmse = report.mean_rmse.map(|v| v.to_string()).unwrap_or_default();
    for c in &report.coefficients {
        w.write_record([
            report.spec.number().to_string(),
            report.estimator.name().to_string(),
            report.replications.to_string(),
            c.name.clone(),
            c.truth.to_string(),
            c.mean_estimate.to_string(),
            c.bias.to_string(),
            c.empirical_sd.to_string(),
            c.mean_std_error.to_string(),
            c.coverage_2se.to_string(),
            c.coverage_95.to_string(),
            c.sign_match_rate.to_string(),
            rmse.clone(),
        ])?;
    }
    w.flush().map_err(|e| Error::computation(e.to_string()))?;
    Ok(())
}

/// The CSV form as a string.
pub fn coverage_csv_string(report: &CoverageReport) -> Result<String> {
    let mut buffer = Vec::new();
    write_coverage_csv(&mut buffer, report)?;
    String::from_utf8(buffer).map_err(|e| Error::computation(e.to_string()))
}
