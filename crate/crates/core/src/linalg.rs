//! Dense least squares via Householder QR.
//!
//! The decomposition is the numerically stable path for the refit stage:
//! X = QR with Q orthogonal, so the solution of min ||y - Xb|| is obtained
//! from R b = Q'y by back substitution, and (X'X)^-1 = R^-1 R^-T feeds the
//! sandwich covariance without ever forming X'X.

use crate::error::Error;
use crate::scalar::Real;

/// Column-major dense matrix (entry (i, j) at `data[j*n + i]`).
#[derive(Debug, Clone)]
pub struct ColMajor<T> {
    pub n: usize,
    pub p: usize,
    pub data: Vec<T>,
}

impl<T: Real> ColMajor<T> {
    pub fn from_columns(columns: &[Vec<T>]) -> Self {
        let p = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * p);
        for col in columns {
            assert_eq!(col.len(), n, "ragged column lengths");
            data.extend_from_slice(col);
        }
        ColMajor { n, p, data }
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.n..(j + 1) * self.n]
    }
}

#[derive(Debug)]
pub enum LinalgError {
    /// Columns at these indices have (numerically) zero pivot: each lies in
    /// the span of the columns before it.
    RankDeficient(Vec<usize>),
    Shape(String),
    NonFinite(String),
}

impl From<LinalgError> for Error {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::RankDeficient(cols) => {
                Error::computation(format!("rank deficient design, collinear columns {cols:?}"))
            }
            LinalgError::Shape(m) => Error::validation(m),
            LinalgError::NonFinite(m) => Error::validation(m),
        }
    }
}

/// Result of a QR least-squares solve.
#[derive(Debug, Clone)]
pub struct LeastSquares<T> {
    pub beta: Vec<T>,
    pub residuals: Vec<T>,
    /// Upper-triangular factor, row-major p x p (rows below diagonal zero).
    r: Vec<T>,
    p: usize,
}

impl<T: Real> LeastSquares<T> {
    /// (X'X)^-1 as a row-major p x p matrix, from R^-1 R^-T.
    pub fn xtx_inverse(&self) -> Vec<T> {
        let p = self.p;
        // Invert R by back substitution against each unit vector.
        let mut rinv = vec![T::zero(); p * p];
        for col in 0..p {
            for i in (0..=col).rev() {
                let mut s = if i == col { T::one() } else { T::zero() };
                for k in i + 1..=col {
                    s -= self.r[i * p + k] * rinv[k * p + col];
                }
                rinv[i * p + col] = s / self.r[i * p + i];
            }
        }
        // (X'X)^-1 = R^-1 R^-T; entry (i,j) = sum_k rinv[i,k] rinv[j,k]
        let mut out = vec![T::zero(); p * p];
        for i in 0..p {
            for j in i..p {
                let mut s = T::zero();
                for k in j.max(i)..p {
                    s += rinv[i * p + k] * rinv[j * p + k];
                }
                out[i * p + j] = s;
                out[j * p + i] = s;
            }
        }
        out
    }
}

/// Least squares via Householder QR.
///
/// Errors with [`LinalgError::RankDeficient`] naming every column whose
/// pivot vanishes after the preceding columns are projected out.
pub fn least_squares<T: Real>(x: &ColMajor<T>, y: &[T]) -> Result<LeastSquares<T>, LinalgError> {
    let (n, p) = (x.n, x.p);
    if n == 0 || p == 0 {
        return Err(LinalgError::Shape("empty design matrix".into()));
    }
    if y.len() != n {
        return Err(LinalgError::Shape(format!(
            "outcome length {} does not match row count {n}",
            y.len()
        )));
    }
    if p > n {
        return Err(LinalgError::Shape(format!(
            "more columns ({p}) than rows ({n})"
        )));
    }
    if x.data.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err(LinalgError::NonFinite("non-finite value in least squares input".into()));
    }

    let mut a = x.data.clone();
    let mut qty = y.to_vec();
    let col_scale: Vec<T> = (0..p)
        .map(|j| x.column(j).iter().map(|&v| v * v).sum::<T>().sqrt())
        .collect();
    let mut deficient = Vec::new();

    for j in 0..p {
        // Norm of column j from row j down.
        let mut norm2 = T::zero();
        for i in j..n {
            let v = a[j * n + i];
            norm2 += v * v;
        }
        let norm = norm2.sqrt();
        let tol = col_scale[j].max(T::one()) * T::epsilon() * T::of(64.0);
        if norm <= tol {
            deficient.push(j);
            continue;
        }
        let pivot = a[j * n + j];
        let alpha = if pivot >= T::zero() { -norm } else { norm };
        // Householder vector v = x_j - alpha e_j (stored in place below the diagonal).
        a[j * n + j] = pivot - alpha;
        let vtv = norm2 - T::of(2.0) * alpha * pivot + alpha * alpha;
        let two = T::of(2.0);
        // Apply H = I - 2 v v'/v'v to remaining columns and to qty.
        for k in j + 1..p {
            let mut dot = T::zero();
            for i in j..n {
                dot += a[j * n + i] * a[k * n + i];
            }
            let f = two * dot / vtv;
            for i in j..n {
                a[k * n + i] = a[k * n + i] - f * a[j * n + i];
            }
        }
        let mut dot = T::zero();
        for i in j..n {
            dot += a[j * n + i] * qty[i];
        }
        let f = two * dot / vtv;
        for i in j..n {
            qty[i] = qty[i] - f * a[j * n + i];
        }
        // The reflected column now has alpha on the diagonal, zeros below.
        a[j * n + j] = alpha;
        for i in j + 1..n {
            // keep v for nothing further; zero the subdiagonal for clarity
            a[j * n + i] = T::zero();
        }
    }

    if !deficient.is_empty() {
        return Err(LinalgError::RankDeficient(deficient));
    }

    // Extract R (row-major) and back-substitute.
    let mut r = vec![T::zero(); p * p];
    for j in 0..p {
        for i in 0..=j {
            r[i * p + j] = a[j * n + i];
        }
    }
    let mut beta = vec![T::zero(); p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for k in i + 1..p {
            s -= r[i * p + k] * beta[k];
        }
        beta[i] = s / r[i * p + i];
    }
    // Residuals against the original matrix.
    let mut residuals = y.to_vec();
    for j in 0..p {
        let b = beta[j];
        if b != T::zero() {
            for (res, &v) in residuals.iter_mut().zip(x.column(j)) {
                *res -= b * v;
            }
        }
    }
    Ok(LeastSquares { beta, residuals, r, p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Independent oracle: solve the normal equations X'X b = X'y by
    /// Gauss-Jordan elimination with partial pivoting.
    fn normal_equations(x: &ColMajor<f64>, y: &[f64]) -> Vec<f64> {
        let p = x.p;
        let mut m = vec![0.0f64; p * (p + 1)];
        for i in 0..p {
            for j in 0..p {
                m[i * (p + 1) + j] = x
                    .column(i)
                    .iter()
                    .zip(x.column(j))
                    .map(|(a, b)| a * b)
                    .sum::<f64>();
            }
            m[i * (p + 1) + p] = x.column(i).iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        }
        for col in 0..p {
            let pivot_row = (col..p)
                .max_by(|&a, &b| {
                    m[a * (p + 1) + col]
                        .abs()
                        .partial_cmp(&m[b * (p + 1) + col].abs())
                        .unwrap()
                })
                .unwrap();
            for j in 0..=p {
                m.swap(col * (p + 1) + j, pivot_row * (p + 1) + j);
            }
            let pv = m[col * (p + 1) + col];
            for j in 0..=p {
                m[col * (p + 1) + j] /= pv;
            }
            for row in 0..p {
                if row != col {
                    let f = m[row * (p + 1) + col];
                    for j in 0..=p {
                        m[row * (p + 1) + j] -= f * m[col * (p + 1) + j];
                    }
                }
            }
        }
        (0..p).map(|i| m[i * (p + 1) + p]).collect()
    }

    fn random_system(rng: &mut StdRng, n: usize, p: usize) -> (ColMajor<f64>, Vec<f64>) {
        let cols: Vec<Vec<f64>> = (0..p)
            .map(|j| {
                (0..n)
                    .map(|_| rng.gen::<f64>() * 2.0 - 1.0 + if j == 0 { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let y = (0..n).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        (ColMajor::from_columns(&cols), y)
    }

    #[test]
    fn matches_normal_equations_oracle_on_random_systems() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..20 {
            let (x, y) = random_system(&mut rng, 200, 5);
            let fit = least_squares(&x, &y).unwrap();
            let oracle = normal_equations(&x, &y);
            for (a, b) in fit.beta.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn exact_fit_has_zero_residuals() {
        let x = ColMajor::from_columns(&[vec![1.0_f64; 4], vec![1.0, 2.0, 3.0, 4.0]]);
        let y = vec![3.0, 5.0, 7.0, 9.0]; // y = 1 + 2 x
        let fit = least_squares(&x, &y).unwrap();
        assert!((fit.beta[0] - 1.0).abs() < 1e-10);
        assert!((fit.beta[1] - 2.0).abs() < 1e-10);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-10));
    }

    #[test]
    fn intercept_only_recovers_mean() {
        let x = ColMajor::from_columns(&[vec![1.0_f64; 5]]);
        let y = vec![2.0, 4.0, 6.0, 8.0, 10.0];
        let fit = least_squares(&x, &y).unwrap();
        assert!((fit.beta[0] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_names_collinear_columns() {
        let c0 = vec![1.0; 6];
        let c1 = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let c2: Vec<f64> = c1.iter().map(|v| 2.0 * v).collect(); // duplicate direction
        let x = ColMajor::from_columns(&[c0, c1, c2]);
        let y = vec![0.0; 6];
        match least_squares(&x, &y) {
            Err(LinalgError::RankDeficient(cols)) => assert_eq!(cols, vec![2]),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn xtx_inverse_matches_direct_inverse() {
        let mut rng = StdRng::seed_from_u64(7);
        let (x, y) = random_system(&mut rng, 60, 4);
        let fit = least_squares(&x, &y).unwrap();
        let inv = fit.xtx_inverse();
        // Check X'X * inv = I
        let p = x.p;
        for i in 0..p {
            for j in 0..p {
                let xtx_ij: Vec<f64> = (0..p)
                    .map(|k| {
                        x.column(i)
                            .iter()
                            .zip(x.column(k))
                            .map(|(a, b)| a * b)
                            .sum::<f64>()
                            * inv[k * p + j]
                    })
                    .collect();
                let v: f64 = xtx_ij.iter().sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-8, "({i},{j}) -> {v}");
            }
        }
    }
}
