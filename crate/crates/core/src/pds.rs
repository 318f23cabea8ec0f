//! Post-double-selection estimation with cluster-robust inference.
//!
//! For each specification the estimator runs one selection pass of the
//! outcome on the candidate controls (interest terms ride along unpenalized)
//! and one selection pass of every interest term on the candidate controls
//! (intercept only unpenalized), takes the union of the selected controls,
//! refits by ordinary least squares on intercept, interest terms, and the
//! union, and reports sandwich standard errors clustered on the route.
//!
//! The double selection protects the interest coefficients from the
//! regularization bias a single outcome-side selection would leave behind:
//! a control that moves an interest term but only weakly moves the outcome
//! still enters the refit through the interest-side pass.

use std::collections::BTreeSet;

use crate::design::matrix::{DesignColumn, DesignMatrix};
use crate::design::spec::SpecId;
use crate::error::{Error, Result};
use crate::lasso::{plugin_lasso, LassoSettings, PluginFit};
use crate::linalg::{least_squares, ColMajor, LinalgError};
use crate::scalar::Real;
use crate::stats::student_t_quantile;

/// How significance stars map to t statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarRule {
    /// Fixed normal thresholds 2.576, 1.96, 1.645.
    Normal,
    /// Student t thresholds at the 99.5th, 97.5th, and 95th percentiles
    /// with (clusters - 1) degrees of freedom.
    StudentT,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdsSettings {
    pub lasso: LassoSettings,
    pub star_rule: StarRule,
    /// Collect per-pass selection diagnostics on the result.
    pub collect_diagnostics: bool,
}

impl Default for PdsSettings {
    fn default() -> Self {
        PdsSettings {
            lasso: LassoSettings::default(),
            star_rule: StarRule::Normal,
            collect_diagnostics: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterestEstimate<T> {
    pub name: String,
    pub coefficient: T,
    pub std_error: T,
    pub t_statistic: T,
    /// 0 to 3.
    pub stars: u8,
}

/// Selection outcome for one control block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSelection {
    pub name: String,
    pub selected: usize,
    /// Observed levels, base included.
    pub candidates: usize,
    pub selected_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitStats<T> {
    pub aic: T,
    pub bic: T,
    pub adj_r_squared: T,
    pub rmse: T,
    pub rss: T,
    pub tss: T,
    /// Fitted parameters: intercept, interest terms, selected controls.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoPassInfo<T> {
    /// `outcome`, or the interest term the pass explained.
    pub target: String,
    pub lambda: T,
    pub sigma_hat: T,
    pub refinements: usize,
    pub sweeps: usize,
    pub selected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult<T> {
    pub spec_id: SpecId,
    pub n: usize,
    pub cluster_count: usize,
    pub intercept: T,
    pub intercept_se: T,
    pub interests: Vec<InterestEstimate<T>>,
    pub blocks: Vec<BlockSelection>,
    /// Size of the union of selected controls.
    pub selected_total: usize,
    /// Absent when the refit left no residual variation.
    pub fit: Option<FitStats<T>>,
    pub notes: Vec<String>,
    pub diagnostics: Option<Vec<LassoPassInfo<T>>>,
}

pub fn stars_label(stars: u8) -> &'static str {
    match stars {
        0 => "",
        1 => "*",
        2 => "**",
        _ => "***",
    }
}

/// Stars for an absolute t statistic under the given rule.
pub fn star_count<T: Real>(t_abs: T, rule: StarRule, clusters: usize) -> Result<u8> {
    let thresholds: [T; 3] = match rule {
        StarRule::Normal => [T::of(2.576), T::of(1.96), T::of(1.645)],
        StarRule::StudentT => {
            if clusters < 2 {
                return Err(Error::domain(
                    "Student t stars need at least 2 clusters".to_string(),
                ));
            }
            let df = T::of_usize(clusters - 1);
            [
                student_t_quantile(T::of(0.995), df)?,
                student_t_quantile(T::of(0.975), df)?,
                student_t_quantile(T::of(0.95), df)?,
            ]
        }
    };
    Ok(if t_abs > thresholds[0] {
        3
    } else if t_abs > thresholds[1] {
        2
    } else if t_abs > thresholds[2] {
        1
    } else {
        0
    })
}

/// Gaussian-likelihood information criteria and fit summaries for a least
/// squares fit with `k` mean parameters (the variance adds one more).
pub fn fit_statistics<T: Real>(rss: T, tss: T, n: usize, k: usize) -> Result<FitStats<T>> {
    if n <= k + 1 {
        return Err(Error::domain(format!(
            "{n} observations cannot support {k} parameters"
        )));
    }
    if rss <= T::zero() {
        return Err(Error::computation(
            "perfect fit: residual sum of squares is zero".to_string(),
        ));
    }
    if tss <= T::zero() {
        return Err(Error::domain("outcome has no variation".to_string()));
    }
    let nf = T::of_usize(n);
    let kf = T::of_usize(k);
    let params = T::of_usize(k + 1);
    let ln_two_pi = T::of(std::f64::consts::TAU.ln());
    let core = nf * (ln_two_pi + T::one() + (rss / nf).ln());
    let aic = core + T::of(2.0) * params;
    let bic = core + nf.ln() * params;
    let adj_r_squared = T::one() - (rss / (nf - kf)) / (tss / (nf - T::one()));
    let rmse = (rss / (nf - kf)).sqrt();
    Ok(FitStats { aic, bic, adj_r_squared, rmse, rss, tss, k })
}

/// Cluster-robust sandwich standard errors for a least squares fit.
///
/// `x` is the fitted design, `xtx_inverse` its `(X'X)^-1` in row-major
/// order, `clusters` assigns each observation an id in `0..n_clusters` with
/// every id used. The variance is the CR1-corrected sandwich
/// `(X'X)^-1 (sum_g s_g s_g') (X'X)^-1 * G/(G-1) * (n-1)/(n-k)` with
/// `s_g` the within-cluster sum of `x_i u_i`. With each observation its own
/// cluster this reduces to the usual heteroskedasticity-robust estimator
/// with an `n/(n-k)` correction.
pub fn cluster_robust_se<T: Real>(
    x: &ColMajor<T>,
    residuals: &[T],
    clusters: &[u32],
    n_clusters: usize,
    xtx_inverse: &[T],
) -> Result<Vec<T>> {
    let (n, p) = (x.n, x.p);
    if residuals.len() != n || clusters.len() != n {
        return Err(Error::validation("residual or cluster length mismatch".to_string()));
    }
    if xtx_inverse.len() != p * p {
        return Err(Error::validation("inverse Gram has the wrong shape".to_string()));
    }
    if n_clusters < 2 {
        return Err(Error::domain("cluster-robust variance needs at least 2 clusters".to_string()));
    }
    if n <= p {
        return Err(Error::domain(format!("{n} observations cannot support {p} parameters")));
    }
    if clusters.iter().any(|&g| g as usize >= n_clusters) {
        return Err(Error::validation("cluster id out of range".to_string()));
    }

    // Score sums per cluster.
    let mut scores = vec![T::zero(); n_clusters * p];
    for j in 0..p {
        let column = x.column(j);
        for i in 0..n {
            scores[clusters[i] as usize * p + j] += column[i] * residuals[i];
        }
    }
    // Meat: sum of outer products of the cluster scores.
    let mut meat = vec![T::zero(); p * p];
    for g in 0..n_clusters {
        let s = &scores[g * p..(g + 1) * p];
        for a in 0..p {
            let sa = s[a];
            if sa == T::zero() {
                continue;
            }
            for b in 0..p {
                meat[a * p + b] += sa * s[b];
            }
        }
    }
    let bread_meat = multiply_square(xtx_inverse, &meat, p);
    let sandwich = multiply_square(&bread_meat, xtx_inverse, p);

    let g = T::of_usize(n_clusters);
    let nf = T::of_usize(n);
    let kf = T::of_usize(p);
    let factor = g / (g - T::one()) * (nf - T::one()) / (nf - kf);
    let mut out = Vec::with_capacity(p);
    for j in 0..p {
        let variance = sandwich[j * p + j] * factor;
        if variance < T::zero() {
            return Err(Error::computation(format!(
                "negative variance for column {j}"
            )));
        }
        out.push(variance.sqrt());
    }
    Ok(out)
}

fn multiply_square<T: Real>(a: &[T], b: &[T], p: usize) -> Vec<T> {
    let mut out = vec![T::zero(); p * p];
    for i in 0..p {
        for l in 0..p {
            let ail = a[i * p + l];
            if ail == T::zero() {
                continue;
            }
            for j in 0..p {
                out[i * p + j] += ail * b[l * p + j];
            }
        }
    }
    out
}

fn pass_info<T: Real>(target: &str, plugin: &PluginFit<T>) -> LassoPassInfo<T> {
    LassoPassInfo {
        target: target.to_string(),
        lambda: plugin.lambda,
        sigma_hat: plugin.sigma_hat,
        refinements: plugin.refinements,
        sweeps: plugin.fit.sweeps,
        selected: plugin.selected.len(),
    }
}

/// Run the full estimator on an assembled design.
pub fn run_specification<T: Real>(
    matrix: &DesignMatrix<T>,
    settings: &PdsSettings,
) -> Result<EstimationResult<T>> {
    let n = matrix.n;
    let intercept_col = DesignColumn::dense("intercept", vec![T::one(); n]);
    for col in &matrix.interest {
        if col.data.norm_sq() <= T::zero() {
            return Err(Error::validation(format!(
                "interest column {} is identically zero in this sample",
                col.name
            )));
        }
    }
    let penalized: Vec<&DesignColumn<T>> = matrix.controls.iter().collect();
    let mut diagnostics = settings.collect_diagnostics.then(Vec::new);
    let mut union: BTreeSet<usize> = BTreeSet::new();

    // Outcome pass: interest terms ride along unpenalized.
    let mut unpenalized: Vec<&DesignColumn<T>> = Vec::with_capacity(1 + matrix.interest.len());
    unpenalized.push(&intercept_col);
    unpenalized.extend(matrix.interest.iter());
    let outcome_problem = crate::lasso::LassoProblem {
        y: &matrix.outcome,
        unpenalized: &unpenalized,
        penalized: &penalized,
    };
    let outcome_fit = plugin_lasso(&outcome_problem, &settings.lasso)?;
    union.extend(outcome_fit.selected.iter().copied());
    if let Some(d) = diagnostics.as_mut() {
        d.push(pass_info("outcome", &outcome_fit));
    }

    // One pass per interest term, intercept only unpenalized.
    let intercept_only = [&intercept_col];
    for col in &matrix.interest {
        let target = col.data.to_dense(n);
        let problem = crate::lasso::LassoProblem {
            y: &target,
            unpenalized: &intercept_only,
            penalized: &penalized,
        };
        let fit = plugin_lasso(&problem, &settings.lasso)?;
        union.extend(fit.selected.iter().copied());
        if let Some(d) = diagnostics.as_mut() {
            d.push(pass_info(&col.name, &fit));
        }
    }

    // Refit on intercept, interest terms, and the union of selections.
    let union: Vec<usize> = union.into_iter().collect();
    let mut columns: Vec<Vec<T>> = Vec::with_capacity(1 + matrix.interest.len() + union.len());
    let mut names: Vec<String> = Vec::with_capacity(columns.capacity());
    columns.push(vec![T::one(); n]);
    names.push("intercept".to_string());
    for col in &matrix.interest {
        columns.push(col.data.to_dense(n));
        names.push(col.name.clone());
    }
    for &j in &union {
        columns.push(matrix.controls[j].data.to_dense(n));
        names.push(matrix.controls[j].name.clone());
    }
    let x = ColMajor::from_columns(&columns);
    let ls = least_squares(&x, &matrix.outcome).map_err(|err| match err {
        LinalgError::RankDeficient(cols) => {
            let offenders: Vec<&str> =
                cols.iter().map(|&j| names[j].as_str()).collect();
            Error::validation(format!(
                "refit design is rank deficient in: {}",
                offenders.join(", ")
            ))
        }
        other => Error::from(other),
    })?;
    let xtx_inverse = ls.xtx_inverse();
    let se = cluster_robust_se(
        &x,
        &ls.residuals,
        &matrix.clusters,
        matrix.cluster_count(),
        &xtx_inverse,
    )?;

    let k = 1 + matrix.interest.len() + union.len();
    let mut notes = Vec::new();
    let rss: T = ls.residuals.iter().map(|&u| u * u).sum();
    let mean_y = crate::scalar::mean(&matrix.outcome);
    let tss: T = matrix.outcome.iter().map(|&y| (y - mean_y) * (y - mean_y)).sum();
    // A mathematically exact fit lands at rounding-noise RSS, not zero, so
    // the perfect-fit test is relative to the outcome's variation.
    let fit = if rss <= tss * T::of(100.0) * T::epsilon() {
        notes.push(
            "refit leaves zero residual variation; fit statistics are undefined".to_string(),
        );
        None
    } else {
        Some(fit_statistics(rss, tss, n, k)?)
    };

    let mut interests = Vec::with_capacity(matrix.interest.len());
    for (idx, col) in matrix.interest.iter().enumerate() {
        let coefficient = ls.beta[idx + 1];
        let std_error = se[idx + 1];
        let t_statistic = if std_error > T::zero() {
            coefficient / std_error
        } else {
            T::zero()
        };
        let stars = star_count(t_statistic.abs(), settings.star_rule, matrix.cluster_count())?;
        interests.push(InterestEstimate {
            name: col.name.clone(),
            coefficient,
            std_error,
            t_statistic,
            stars,
        });
    }

    let blocks = matrix
        .blocks
        .iter()
        .map(|info| {
            let selected_names: Vec<String> = union
                .iter()
                .filter(|&&j| info.columns.contains(&j))
                .map(|&j| matrix.controls[j].name.clone())
                .collect();
            BlockSelection {
                name: info.block.name().to_string(),
                selected: selected_names.len(),
                candidates: info.observed_levels,
                selected_names,
            }
        })
        .collect();

    Ok(EstimationResult {
        spec_id: matrix.spec.spec_id,
        n,
        cluster_count: matrix.cluster_count(),
        intercept: ls.beta[0],
        intercept_se: se[0],
        interests,
        blocks,
        selected_total: union.len(),
        fit,
        notes,
        diagnostics,
    })
}
