//! L1-penalized least squares by cyclic coordinate descent, with a plugin
//! penalty level and data-driven penalty loadings.
//!
//! The objective over coefficients `b` (penalized set P, unpenalized set U) is
//!
//! ```text
//! (1/2n) * ||y - X b||^2  +  (lambda/n) * sum_{j in P} psi_j |b_j|
//! ```
//!
//! Each cyclic pass first takes one exact least-squares step on the whole
//! unpenalized block (per-coordinate steps when the block is rank deficient),
//! then updates each penalized coordinate by soft-thresholding
//! `rho_j = x_j'r + b_j ||x_j||^2` at `lambda * psi_j` and dividing by
//! `||x_j||^2`. Columns are never standardized; the loadings carry the scale,
//! which keeps indicator columns sparse.
//!
//! The plugin penalty level is `lambda = 2 c sigma sqrt(n) Q(1 - gamma/(2p))`
//! with `Q` the standard normal quantile, `c = 1.1`, and
//! `gamma = 0.1 / ln(n)` by default. Loadings start at the per-column
//! standard deviation with `sigma` the outcome's standard deviation, then
//! refine toward `psi_j = sqrt(mean(x_j^2 u^2)) / sigma` with `u` the
//! residuals of a least-squares refit on the current selection (shrinkage
//! bias in the lasso's own residuals would otherwise feed back into the
//! loadings), re-solving (warm-started) after each refinement until both the
//! loadings and the residual scale settle or the refinement budget runs out.

use crate::design::matrix::DesignColumn;
use crate::error::{Error, Result};
use crate::scalar::{population_sd, Real};
use crate::stats::normal_quantile;

/// Loadings below this floor are treated as degenerate and clamped.
const PSI_FLOOR: f64 = 1e-12;
/// Relative loading change below which refinement stops.
const PSI_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct LassoSettings {
    /// Convergence threshold on the largest coefficient change in a full pass.
    pub tol: f64,
    /// Budget on total coordinate passes, full and active-set combined.
    pub max_sweeps: usize,
    /// Plugin penalty constant.
    pub c: f64,
    /// Plugin tail probability; `None` means `0.1 / ln(n)`.
    pub gamma: Option<f64>,
    /// Budget on loading-refinement re-solves.
    pub max_refinements: usize,
    /// Record the objective after every pass.
    pub track_objective: bool,
}

impl Default for LassoSettings {
    fn default() -> Self {
        LassoSettings {
            tol: 1e-7,
            max_sweeps: 10_000,
            c: 1.1,
            gamma: None,
            max_refinements: 5,
            track_objective: false,
        }
    }
}

/// One penalized regression: outcome, unpenalized columns (intercept and
/// interest terms), and penalized candidate columns.
#[derive(Debug, Clone, Copy)]
pub struct LassoProblem<'a, T> {
    pub y: &'a [T],
    pub unpenalized: &'a [&'a DesignColumn<T>],
    pub penalized: &'a [&'a DesignColumn<T>],
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdFit<T> {
    /// Coefficients of the unpenalized columns, in problem order.
    pub unpenalized_coefs: Vec<T>,
    /// Coefficients of the penalized columns, in problem order.
    pub penalized_coefs: Vec<T>,
    pub residuals: Vec<T>,
    pub sweeps: usize,
    /// Objective after each pass, when tracking was requested.
    pub objective_trace: Option<Vec<T>>,
}

impl<T: Real> CdFit<T> {
    /// Indices of penalized columns with nonzero coefficients.
    pub fn selected(&self) -> Vec<usize> {
        self.penalized_coefs
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != T::zero())
            .map(|(j, _)| j)
            .collect()
    }
}

/// A plugin-penalty fit: the converged coordinate-descent solution plus the
/// penalty pieces that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PluginFit<T> {
    pub fit: CdFit<T>,
    pub lambda: T,
    pub loadings: Vec<T>,
    /// Residual standard deviation at the final fit.
    pub sigma_hat: T,
    /// Loading-refinement re-solves performed.
    pub refinements: usize,
    pub selected: Vec<usize>,
}

pub fn soft_threshold<T: Real>(z: T, threshold: T) -> T {
    let magnitude = z.abs() - threshold;
    if magnitude <= T::zero() {
        T::zero()
    } else {
        magnitude * z.signum()
    }
}

/// Default plugin tail probability, `0.1 / ln(n)`.
pub fn default_gamma(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 observations, got {n}")));
    }
    Ok(0.1 / (n as f64).ln())
}

/// Plugin penalty level `2 c sigma sqrt(n) Q(1 - gamma/(2p))`.
pub fn plugin_lambda<T: Real>(
    sigma_hat: T,
    n: usize,
    p: usize,
    c: f64,
    gamma: f64,
) -> Result<T> {
    if p == 0 {
        return Err(Error::domain("plugin penalty needs at least one candidate".to_string()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("gamma must be in (0, 1), got {gamma}")));
    }
    if !(c > 0.0) {
        return Err(Error::domain(format!("penalty constant must be positive, got {c}")));
    }
    if !(sigma_hat >= T::zero()) {
        return Err(Error::domain("negative or non-finite residual scale".to_string()));
    }
    let quantile: f64 = normal_quantile(1.0 - gamma / (2.0 * p as f64))?;
    Ok(T::of(2.0 * c * (n as f64).sqrt() * quantile) * sigma_hat)
}

fn validate_problem<T: Real>(problem: &LassoProblem<T>) -> Result<usize> {
    let n = problem.y.len();
    if n == 0 {
        return Err(Error::validation("empty outcome".to_string()));
    }
    if problem.y.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("non-finite outcome value".to_string()));
    }
    for col in problem.unpenalized.iter().chain(problem.penalized) {
        match &col.data {
            crate::design::matrix::ColumnData::Dense(values) => {
                if values.len() != n {
                    return Err(Error::validation(format!(
                        "column {} has {} rows, outcome has {n}",
                        col.name,
                        values.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::validation(format!(
                        "non-finite value in column {}",
                        col.name
                    )));
                }
            }
            crate::design::matrix::ColumnData::Indicator(rows) => {
                if rows.iter().any(|&i| i as usize >= n) {
                    return Err(Error::validation(format!(
                        "row index out of range in column {}",
                        col.name
                    )));
                }
            }
        }
    }
    Ok(n)
}

struct Workspace<T> {
    beta_u: Vec<T>,
    beta_p: Vec<T>,
    r: Vec<T>,
    norms_u: Vec<T>,
    norms_p: Vec<T>,
    /// Unpenalized indices the joint step updates, with the inverse Gram of
    /// their block. The sweep takes one exact joint step on these columns,
    /// which reaches the block optimum immediately where per-coordinate
    /// steps crawl on correlated columns. Rank-deficient columns are left
    /// out and stay frozen at their start values: the survivors span them,
    /// so the block optimum still zeroes every unpenalized gradient. `None`
    /// falls back to per-coordinate steps.
    joint_u: Option<(Vec<usize>, Vec<T>)>,
}

/// `(X'X)^-1` of the listed unpenalized columns, or the member positions of
/// the columns whose QR pivots vanish when the block is rank deficient.
fn block_gram_inverse<T: Real>(
    problem: &LassoProblem<T>,
    members: &[usize],
) -> Result<std::result::Result<Vec<T>, Vec<usize>>> {
    let n = problem.y.len();
    let dense: Vec<Vec<T>> =
        members.iter().map(|&j| problem.unpenalized[j].data.to_dense(n)).collect();
    match crate::linalg::least_squares(&crate::linalg::ColMajor::from_columns(&dense), problem.y) {
        Ok(solved) => Ok(Ok(solved.xtx_inverse())),
        Err(crate::linalg::LinalgError::RankDeficient(cols)) => Ok(Err(cols)),
        Err(other) => Err(other.into()),
    }
}

impl<T: Real> Workspace<T> {
    fn new(problem: &LassoProblem<T>, warm: Option<(&[T], &[T])>) -> Result<Self> {
        let norms_u: Vec<T> = problem.unpenalized.iter().map(|c| c.data.norm_sq()).collect();
        let norms_p: Vec<T> = problem.penalized.iter().map(|c| c.data.norm_sq()).collect();
        // A single column's coordinate step is already exact; the joint step
        // only pays off once columns can correlate.
        let count_u = problem.unpenalized.len();
        let joint_u = if count_u >= 2 {
            let all: Vec<usize> = (0..count_u).collect();
            match block_gram_inverse(problem, &all)? {
                Ok(inverse) => Some((all, inverse)),
                Err(deficient) => {
                    // Keep the columns whose pivots survive; the dropped ones
                    // are linear combinations of them.
                    let keep: Vec<usize> =
                        (0..count_u).filter(|j| !deficient.contains(j)).collect();
                    if keep.len() >= 2 {
                        block_gram_inverse(problem, &keep)?
                            .ok()
                            .map(|inverse| (keep, inverse))
                    } else {
                        None
                    }
                }
            }
        } else {
            None
        };
        let (beta_u, beta_p) = match warm {
            Some((u, p)) => {
                if u.len() != problem.unpenalized.len() || p.len() != problem.penalized.len() {
                    return Err(Error::validation(
                        "warm start has the wrong number of coefficients".to_string(),
                    ));
                }
                (u.to_vec(), p.to_vec())
            }
            None => (
                vec![T::zero(); problem.unpenalized.len()],
                vec![T::zero(); problem.penalized.len()],
            ),
        };
        let mut ws = Workspace { beta_u, beta_p, r: Vec::new(), norms_u, norms_p, joint_u };
        ws.recompute_residual(problem);
        Ok(ws)
    }

    fn recompute_residual(&mut self, problem: &LassoProblem<T>) {
        self.r = problem.y.to_vec();
        for (col, &b) in problem.unpenalized.iter().zip(&self.beta_u) {
            col.data.add_scaled_to(-b, &mut self.r);
        }
        for (col, &b) in problem.penalized.iter().zip(&self.beta_p) {
            col.data.add_scaled_to(-b, &mut self.r);
        }
    }

    /// One cyclic pass; `active` restricts the penalized coordinates.
    /// Returns the largest coefficient change.
    fn sweep(
        &mut self,
        problem: &LassoProblem<T>,
        lambda: T,
        loadings: &[T],
        active: Option<&[usize]>,
    ) -> T {
        let mut max_delta = T::zero();
        if let Some((members, ginv)) = &self.joint_u {
            // Joint step on the block: beta_u += (X_u'X_u)^-1 X_u'r, computed
            // from the gradient before any of it is applied.
            let k = members.len();
            let gradient: Vec<T> = members
                .iter()
                .map(|&j| problem.unpenalized[j].data.dot(&self.r))
                .collect();
            for (row, &j) in members.iter().enumerate() {
                let mut step = T::zero();
                for (m, &g) in gradient.iter().enumerate() {
                    step += ginv[row * k + m] * g;
                }
                if step != T::zero() {
                    self.beta_u[j] += step;
                    problem.unpenalized[j].data.add_scaled_to(-step, &mut self.r);
                    max_delta = max_delta.max(step.abs());
                }
            }
        } else {
            for (j, col) in problem.unpenalized.iter().enumerate() {
                if self.norms_u[j] <= T::zero() {
                    continue;
                }
                let delta = col.data.dot(&self.r) / self.norms_u[j];
                if delta != T::zero() {
                    self.beta_u[j] += delta;
                    col.data.add_scaled_to(-delta, &mut self.r);
                    max_delta = max_delta.max(delta.abs());
                }
            }
        }
        let update = |j: usize, ws: &mut Workspace<T>| {
            if ws.norms_p[j] <= T::zero() {
                return T::zero();
            }
            let col = problem.penalized[j];
            let old = ws.beta_p[j];
            let rho = col.data.dot(&ws.r) + old * ws.norms_p[j];
            let new = soft_threshold(rho, lambda * loadings[j]) / ws.norms_p[j];
            let delta = new - old;
            if delta != T::zero() {
                ws.beta_p[j] = new;
                col.data.add_scaled_to(-delta, &mut ws.r);
            }
            delta.abs()
        };
        match active {
            Some(indices) => {
                for &j in indices {
                    max_delta = max_delta.max(update(j, self));
                }
            }
            None => {
                for j in 0..problem.penalized.len() {
                    max_delta = max_delta.max(update(j, self));
                }
            }
        }
        max_delta
    }

    fn objective(&self, lambda: T, loadings: &[T]) -> T {
        let n = T::of_usize(self.r.len());
        let rss: T = self.r.iter().map(|&v| v * v).sum();
        let penalty: T = self
            .beta_p
            .iter()
            .zip(loadings)
            .map(|(&b, &psi)| psi * b.abs())
            .sum();
        rss / (T::of(2.0) * n) + lambda * penalty / n
    }
}

/// Solve at a fixed penalty level and fixed loadings.
///
/// Convergence requires a full pass whose largest coefficient change is
/// below `tol`; between full passes, cheaper passes iterate the currently
/// active coordinates. Exhausting the pass budget is an error.
pub fn coordinate_descent<T: Real>(
    problem: &LassoProblem<T>,
    lambda: T,
    loadings: &[T],
    warm: Option<(&[T], &[T])>,
    settings: &LassoSettings,
) -> Result<CdFit<T>> {
    validate_problem(problem)?;
    if loadings.len() != problem.penalized.len() {
        return Err(Error::validation(format!(
            "{} loadings for {} penalized columns",
            loadings.len(),
            problem.penalized.len()
        )));
    }
    if !(lambda >= T::zero()) {
        return Err(Error::domain("penalty level must be nonnegative".to_string()));
    }
    let tol = T::of(settings.tol);
    let mut ws = Workspace::new(problem, warm)?;
    let mut trace = settings.track_objective.then(Vec::new);
    let mut sweeps = 0usize;

    macro_rules! one_sweep {
        ($active:expr) => {{
            sweeps += 1;
            if sweeps > settings.max_sweeps {
                return Err(Error::computation(format!(
                    "coordinate descent did not converge within {} passes",
                    settings.max_sweeps
                )));
            }
            let delta = ws.sweep(problem, lambda, loadings, $active);
            if let Some(trace) = trace.as_mut() {
                trace.push(ws.objective(lambda, loadings));
            }
            delta
        }};
    }

    loop {
        // Full pass over every coordinate, from a freshly accumulated
        // residual so drift cannot compound across phases.
        ws.recompute_residual(problem);
        let full_delta = one_sweep!(None);
        if full_delta < tol {
            break;
        }
        // Active-set phase: iterate the coordinates the full pass left
        // nonzero (members may cross zero and return within the phase).
        let active: Vec<usize> = ws
            .beta_p
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != T::zero())
            .map(|(j, _)| j)
            .collect();
        loop {
            let delta = one_sweep!(Some(&active));
            if delta < tol {
                break;
            }
        }
    }

    Ok(CdFit {
        unpenalized_coefs: ws.beta_u,
        penalized_coefs: ws.beta_p,
        residuals: ws.r,
        sweeps,
        objective_trace: trace,
    })
}

/// Objective value at the given coefficients.
pub fn objective<T: Real>(
    problem: &LassoProblem<T>,
    lambda: T,
    loadings: &[T],
    unpenalized_coefs: &[T],
    penalized_coefs: &[T],
) -> Result<T> {
    validate_problem(problem)?;
    let ws = Workspace::new(problem, Some((unpenalized_coefs, penalized_coefs)))?;
    Ok(ws.objective(lambda, loadings))
}

/// Largest stationarity violation of a fit, at the `(1/n)`-scaled gradient:
/// zero when every unpenalized gradient vanishes, every active penalized
/// gradient sits on its subgradient boundary, and every inactive gradient
/// stays inside it.
pub fn kkt_max_violation<T: Real>(
    problem: &LassoProblem<T>,
    lambda: T,
    loadings: &[T],
    fit: &CdFit<T>,
) -> T {
    let n = T::of_usize(problem.y.len());
    let mut worst = T::zero();
    for col in problem.unpenalized {
        if col.data.norm_sq() <= T::zero() {
            continue;
        }
        worst = worst.max((col.data.dot(&fit.residuals) / n).abs());
    }
    for (j, col) in problem.penalized.iter().enumerate() {
        if col.data.norm_sq() <= T::zero() {
            continue;
        }
        let gradient = col.data.dot(&fit.residuals) / n;
        let boundary = lambda * loadings[j] / n;
        let beta = fit.penalized_coefs[j];
        let violation = if beta == T::zero() {
            gradient.abs() - boundary
        } else {
            (gradient - boundary * beta.signum()).abs()
        };
        worst = worst.max(violation);
    }
    worst
}

/// Smallest penalty level at which every penalized coefficient is zero:
/// `max_j |x_j' r0| / psi_j` with `r0` the residual from the unpenalized
/// columns alone.
pub fn lambda_max<T: Real>(problem: &LassoProblem<T>, loadings: &[T]) -> Result<T> {
    validate_problem(problem)?;
    if loadings.len() != problem.penalized.len() {
        return Err(Error::validation("one loading per penalized column".to_string()));
    }
    let base = LassoProblem { y: problem.y, unpenalized: problem.unpenalized, penalized: &[] };
    let fit = coordinate_descent(&base, T::zero(), &[], None, &LassoSettings::default())?;
    let mut best = T::zero();
    for (col, &psi) in problem.penalized.iter().zip(loadings) {
        if psi <= T::of(PSI_FLOOR) {
            continue;
        }
        best = best.max(col.data.dot(&fit.residuals).abs() / psi);
    }
    Ok(best)
}

/// Geometric penalty grid from `lambda_max` down `decades` orders of
/// magnitude, inclusive of both ends.
pub fn lambda_grid<T: Real>(lambda_max: T, points: usize, decades: f64) -> Vec<T> {
    if points == 0 {
        return Vec::new();
    }
    if points == 1 {
        return vec![lambda_max];
    }
    let ratio = T::of(10.0_f64.powf(-decades / (points as f64 - 1.0)));
    let mut out = Vec::with_capacity(points);
    let mut current = lambda_max;
    for _ in 0..points {
        out.push(current);
        current = current * ratio;
    }
    out
}

/// Full plugin pipeline: initial scale-based loadings, plugin penalty,
/// coordinate descent, then residual-based loading refinements.
pub fn plugin_lasso<T: Real>(
    problem: &LassoProblem<T>,
    settings: &LassoSettings,
) -> Result<PluginFit<T>> {
    let n = validate_problem(problem)?;
    let p = problem.penalized.len();
    let floor = T::of(PSI_FLOOR);

    if p == 0 {
        let fit = coordinate_descent(problem, T::zero(), &[], None, settings)?;
        let sigma_hat = root_mean_square(&fit.residuals);
        return Ok(PluginFit {
            fit,
            lambda: T::zero(),
            loadings: Vec::new(),
            sigma_hat,
            refinements: 0,
            selected: Vec::new(),
        });
    }

    let gamma = match settings.gamma {
        Some(g) => g,
        None => default_gamma(n)?,
    };
    let sigma0 = population_sd(problem.y);
    if sigma0 <= T::zero() {
        return Err(Error::domain("constant outcome: penalty scale is undefined".to_string()));
    }
    let mut loadings: Vec<T> = problem
        .penalized
        .iter()
        .map(|col| col.data.population_sd(n).max(floor))
        .collect();
    let mut lambda = plugin_lambda(sigma0, n, p, settings.c, gamma)?;
    let mut fit = coordinate_descent(problem, lambda, &loadings, None, settings)?;
    let mut refinements = 0usize;
    // Residual scale behind the current lambda. Starts at the outcome scale,
    // which overstates the noise, so the loop must keep re-solving until the
    // scale itself settles, not merely until the loadings do.
    let mut sigma_used = sigma0;

    for _ in 0..settings.max_refinements {
        // Refine from the residuals of a least-squares refit on the selected
        // support. The lasso's own residuals carry its shrinkage bias, which
        // would feed back into the loadings: a shrunk column inflates its own
        // loading, shrinking it further on the next pass.
        let refit = refit_residuals(problem, &fit.selected());
        let residuals = refit.as_deref().unwrap_or(&fit.residuals);
        let sigma = root_mean_square(residuals);
        if sigma <= T::zero() {
            break; // perfect fit: loadings are undefined, keep the solution
        }
        let mut max_rel_change = T::zero();
        let new_loadings: Vec<T> = problem
            .penalized
            .iter()
            .zip(&loadings)
            .map(|(col, &old)| {
                let new = (col.data.mean_sq_times_sq(residuals).sqrt() / sigma).max(floor);
                max_rel_change = max_rel_change.max((new - old).abs() / old.max(floor));
                new
            })
            .collect();
        let sigma_rel_change = (sigma - sigma_used).abs() / sigma_used;
        if max_rel_change < T::of(PSI_REL_TOL) && sigma_rel_change < T::of(PSI_REL_TOL) {
            break;
        }
        loadings = new_loadings;
        sigma_used = sigma;
        lambda = plugin_lambda(sigma, n, p, settings.c, gamma)?;
        let warm = (fit.unpenalized_coefs.clone(), fit.penalized_coefs.clone());
        fit = coordinate_descent(problem, lambda, &loadings, Some((&warm.0, &warm.1)), settings)?;
        refinements += 1;
    }

    let sigma_hat = root_mean_square(&fit.residuals);
    let selected = fit.selected();
    Ok(PluginFit { fit, lambda, loadings, sigma_hat, refinements, selected })
}

fn root_mean_square<T: Real>(values: &[T]) -> T {
    let n = T::of_usize(values.len());
    (values.iter().map(|&v| v * v).sum::<T>() / n).sqrt()
}

/// Residuals of a least-squares refit on the unpenalized columns plus the
/// selected penalized columns, or `None` when that refit is rank deficient.
fn refit_residuals<T: Real>(problem: &LassoProblem<T>, selected: &[usize]) -> Option<Vec<T>> {
    let n = problem.y.len();
    let mut dense: Vec<Vec<T>> =
        problem.unpenalized.iter().map(|c| c.data.to_dense(n)).collect();
    dense.extend(selected.iter().map(|&j| problem.penalized[j].data.to_dense(n)));
    if dense.is_empty() {
        return Some(problem.y.to_vec());
    }
    crate::linalg::least_squares(&crate::linalg::ColMajor::from_columns(&dense), problem.y)
        .map(|solved| solved.residuals)
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::matrix::{ColumnData, DesignColumn};
    use crate::linalg::{least_squares, ColMajor};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn ones(n: usize) -> DesignColumn<f64> {
        DesignColumn::dense("intercept", vec![1.0; n])
    }

    fn random_dense(rng: &mut ChaCha8Rng, n: usize, name: &str) -> DesignColumn<f64> {
        let values: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        DesignColumn::dense(name, values)
    }

    #[test]
    fn soft_threshold_hand_values() {
        assert_relative_eq!(soft_threshold(3.0, 1.0), 2.0);
        assert_relative_eq!(soft_threshold(-3.0, 1.0), -2.0);
        assert_relative_eq!(soft_threshold(0.5, 1.0), 0.0);
        assert_relative_eq!(soft_threshold(-0.5, 1.0), 0.0);
        assert_relative_eq!(soft_threshold(2.0, 0.0), 2.0);
        assert_relative_eq!(soft_threshold(-1.0, 1.0), 0.0);
    }

    #[test]
    fn plugin_lambda_known_value() {
        // sigma 1, n = 100, p = 100, c = 1.1, gamma = 0.1:
        // quantile argument 0.9995, lambda = 22 * 3.2905267314918948.
        let lambda: f64 = plugin_lambda(1.0, 100, 100, 1.1, 0.1).unwrap();
        assert_relative_eq!(lambda, 72.391_588_092_821_69, max_relative = 1e-13);
        assert!(plugin_lambda::<f64>(1.0, 100, 0, 1.1, 0.1).is_err());
        assert!(plugin_lambda::<f64>(1.0, 100, 10, 1.1, 1.5).is_err());
        assert_relative_eq!(default_gamma(100).unwrap(), 0.1 / 100.0_f64.ln());
    }

    #[test]
    fn orthogonal_design_matches_the_closed_form() {
        let x1 = DesignColumn::dense("x1", vec![1.0, 1.0, 1.0, 1.0]);
        let x2 = DesignColumn::dense("x2", vec![1.0, -1.0, 1.0, -1.0]);
        let x3 = DesignColumn::dense("x3", vec![1.0, 1.0, -1.0, -1.0]);
        let y = [3.0, 1.0, 0.5, -0.5];
        let penalized = [&x1, &x2, &x3];
        let problem = LassoProblem { y: &y, unpenalized: &[], penalized: &penalized };
        // Correlations: x1'y = 4, x2'y = 3, x3'y = 4; norms all 4.
        let fit = coordinate_descent(
            &problem,
            2.0,
            &[1.0, 1.0, 1.0],
            None,
            &LassoSettings::default(),
        )
        .unwrap();
        assert_relative_eq!(fit.penalized_coefs[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(fit.penalized_coefs[1], 0.25, epsilon = 1e-12);
        assert_relative_eq!(fit.penalized_coefs[2], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_penalty_reproduces_least_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 80;
        let intercept = ones(n);
        let x1 = random_dense(&mut rng, n, "x1");
        let x2 = random_dense(&mut rng, n, "x2");
        let x3 = random_dense(&mut rng, n, "x3");
        let y: Vec<f64> = (0..n)
            .map(|i| {
                1.5 + 2.0 * as_dense(&x1)[i] - 0.7 * as_dense(&x2)[i]
                    + rng.sample::<f64, _>(StandardNormal) * 0.3
            })
            .collect();
        let penalized = [&x1, &x2, &x3];
        let unpenalized = [&intercept];
        let problem = LassoProblem { y: &y, unpenalized: &unpenalized, penalized: &penalized };
        let settings = LassoSettings { tol: 1e-13, ..LassoSettings::default() };
        let fit = coordinate_descent(&problem, 0.0, &[1.0; 3], None, &settings).unwrap();

        let x = ColMajor::from_columns(&[
            vec![1.0; n],
            as_dense(&x1).to_vec(),
            as_dense(&x2).to_vec(),
            as_dense(&x3).to_vec(),
        ]);
        let ls = least_squares(&x, &y).unwrap();
        assert_relative_eq!(fit.unpenalized_coefs[0], ls.beta[0], epsilon = 1e-9);
        for j in 0..3 {
            assert_relative_eq!(fit.penalized_coefs[j], ls.beta[j + 1], epsilon = 1e-9);
        }
    }

    fn as_dense(col: &DesignColumn<f64>) -> &[f64] {
        match &col.data {
            ColumnData::Dense(values) => values,
            ColumnData::Indicator(_) => unreachable!(),
        }
    }

    #[test]
    fn objective_is_monotone_and_kkt_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let n = 200;
        let intercept = ones(n);
        let columns: Vec<DesignColumn<f64>> =
            (0..30).map(|j| random_dense(&mut rng, n, &format!("x{j}"))).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| {
                0.5 + 1.2 * as_dense(&columns[3])[i] - 0.8 * as_dense(&columns[11])[i]
                    + rng.sample::<f64, _>(StandardNormal)
            })
            .collect();
        let penalized: Vec<&DesignColumn<f64>> = columns.iter().collect();
        let unpenalized = [&intercept];
        let problem = LassoProblem { y: &y, unpenalized: &unpenalized, penalized: &penalized };
        let loadings = vec![1.0; 30];
        let lambda = lambda_max(&problem, &loadings).unwrap() * 0.2;
        let settings = LassoSettings { track_objective: true, ..LassoSettings::default() };
        let fit = coordinate_descent(&problem, lambda, &loadings, None, &settings).unwrap();

        let trace = fit.objective_trace.as_ref().unwrap();
        for pair in trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "objective rose: {} -> {}", pair[0], pair[1]);
        }
        let violation = kkt_max_violation(&problem, lambda, &loadings, &fit);
        assert!(violation <= 10.0 * settings.tol, "KKT violation {violation}");
        // The trace ends at the value the standalone objective reports.
        let last = objective(
            &problem,
            lambda,
            &loadings,
            &fit.unpenalized_coefs,
            &fit.penalized_coefs,
        )
        .unwrap();
        assert_relative_eq!(last, *trace.last().unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn lambda_max_kills_every_penalized_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 150;
        let intercept = ones(n);
        let columns: Vec<DesignColumn<f64>> =
            (0..8).map(|j| random_dense(&mut rng, n, &format!("x{j}"))).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| 2.0 + 0.9 * as_dense(&columns[2])[i] + rng.sample::<f64, _>(StandardNormal))
            .collect();
        let penalized: Vec<&DesignColumn<f64>> = columns.iter().collect();
        let unpenalized = [&intercept];
        let problem = LassoProblem { y: &y, unpenalized: &unpenalized, penalized: &penalized };
        let loadings = vec![1.0; 8];
        let lm = lambda_max(&problem, &loadings).unwrap();

        let at = coordinate_descent(&problem, lm, &loadings, None, &LassoSettings::default())
            .unwrap();
        assert!(at.penalized_coefs.iter().all(|&b| b == 0.0));
        let below =
            coordinate_descent(&problem, lm * 0.9, &loadings, None, &LassoSettings::default())
                .unwrap();
        assert!(below.penalized_coefs.iter().any(|&b| b != 0.0));
    }

    #[test]
    fn lambda_grid_is_geometric() {
        let grid: Vec<f64> = lambda_grid(100.0, 4, 3.0);
        assert_eq!(grid.len(), 4);
        assert_relative_eq!(grid[0], 100.0);
        assert_relative_eq!(grid[3], 0.1, max_relative = 1e-12);
        assert_relative_eq!(grid[1] / grid[0], grid[2] / grid[1], max_relative = 1e-12);
    }

    #[test]
    fn plugin_pipeline_recovers_a_sparse_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 400;
        let p = 50;
        let intercept = ones(n);
        let columns: Vec<DesignColumn<f64>> =
            (0..p).map(|j| random_dense(&mut rng, n, &format!("x{j}"))).collect();
        let truth = [(3usize, 2.0), (17, -1.5), (40, 1.0)];
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let mut v = 0.7 + 0.5 * rng.sample::<f64, _>(StandardNormal);
                for &(j, b) in &truth {
                    v += b * as_dense(&columns[j])[i];
                }
                v
            })
            .collect();
        let penalized: Vec<&DesignColumn<f64>> = columns.iter().collect();
        let unpenalized = [&intercept];
        let problem = LassoProblem { y: &y, unpenalized: &unpenalized, penalized: &penalized };
        let plugin = plugin_lasso(&problem, &LassoSettings::default()).unwrap();

        for &(j, b) in &truth {
            assert!(plugin.selected.contains(&j), "missed column {j}");
            let err = (plugin.fit.penalized_coefs[j] - b).abs();
            assert!(err < 0.4, "column {j} off by {err}");
        }
        assert!(plugin.selected.len() <= 10, "selected {:?}", plugin.selected);
        assert!(plugin.refinements <= 5);
        assert!(plugin.sigma_hat > 0.3 && plugin.sigma_hat < 0.8, "{}", plugin.sigma_hat);
    }

    #[test]
    fn unpenalized_columns_survive_any_penalty() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100;
        let intercept = ones(n);
        let noise = random_dense(&mut rng, n, "noise");
        let y: Vec<f64> = (0..n).map(|_| 3.0 + 0.01 * rng.sample::<f64, _>(StandardNormal)).collect();
        let penalized = [&noise];
        let unpenalized = [&intercept];
        let problem = LassoProblem { y: &y, unpenalized: &unpenalized, penalized: &penalized };
        let fit =
            coordinate_descent(&problem, 1e6, &[1.0], None, &LassoSettings::default()).unwrap();
        let mean = y.iter().sum::<f64>() / n as f64;
        assert_relative_eq!(fit.unpenalized_coefs[0], mean, max_relative = 1e-9);
        assert_eq!(fit.penalized_coefs[0], 0.0);
    }

    #[test]
    fn exhausting_the_pass_budget_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 50;
        let base: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        // Strongly correlated columns force many passes.
        let x1 = DesignColumn::dense("x1", base.clone());
        let x2 = DesignColumn::dense(
            "x2",
            base.iter()
                .map(|&v| 0.999 * v + 0.001 * rng.sample::<f64, _>(StandardNormal))
                .collect(),
        );
        let y: Vec<f64> = base.iter().map(|&v| v * 2.0).collect();
        let penalized = [&x1, &x2];
        let problem = LassoProblem { y: &y, unpenalized: &[], penalized: &penalized };
        let settings = LassoSettings { max_sweeps: 1, ..LassoSettings::default() };
        let err = coordinate_descent(&problem, 0.0, &[1.0, 1.0], None, &settings).unwrap_err();
        assert!(err.to_string().contains("did not converge"), "{err}");
    }

    #[test]
    fn indicator_candidates_work_unstandardized() {
        // Outcome depends on a sparse indicator; the loading (its sd)
        // absorbs the scale difference against dense columns.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 300;
        let intercept = ones(n);
        let rows: Vec<u32> = (0..n as u32).filter(|&i| i % 10 == 0).collect();
        let indicator = DesignColumn::indicator("group", rows.clone());
        let dense = random_dense(&mut rng, n, "x");
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let bump = if i % 10 == 0 { 1.5 } else { 0.0 };
                bump + 0.2 * rng.sample::<f64, _>(StandardNormal)
            })
            .collect();
        let penalized = [&indicator, &dense];
        let unpenalized = [&intercept];
        let problem = LassoProblem { y: &y, unpenalized: &unpenalized, penalized: &penalized };
        let plugin = plugin_lasso(&problem, &LassoSettings::default()).unwrap();
        assert!(plugin.selected.contains(&0), "indicator not selected");
        assert!(plugin.fit.penalized_coefs[0] > 0.8);
    }
}
