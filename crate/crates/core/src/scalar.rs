//! Floating-point abstraction for the numeric kernels.
//!
//! Solver, statistics, and index computations are generic over [`Real`] so
//! they run at `f32` or `f64`; the pipeline instantiates everything at
//! [`crate::Scalar`] (= `f64`).

use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Scalar trait for the numeric kernels: IEEE float operations plus
/// conversions from primitive counts and literals.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::NumAssignOps
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to any Real")
    }

    /// Conversion from a count.
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize converts to any Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Mean of a slice; 0 for an empty slice.
pub fn mean<T: Real>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    values.iter().copied().sum::<T>() / T::of_usize(values.len())
}

/// Population standard deviation (divides by n, not n-1).
pub fn population_sd<T: Real>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let m = mean(values);
    let ss = values.iter().map(|&v| (v - m) * (v - m)).sum::<T>();
    (ss / T::of_usize(values.len())).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_sd_match_hand_values() {
        let xs = [1.0f64, 2.0, 3.0, 4.0];
        assert!((mean(&xs) - 2.5).abs() < 1e-15);
        // population variance = ((1.5)^2 + (0.5)^2 + (0.5)^2 + (1.5)^2)/4 = 1.25
        assert!((population_sd(&xs) - 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn generic_over_f32() {
        let xs = [1.0f32, 3.0];
        assert!((mean(&xs) - 2.0).abs() < 1e-6);
    }
}
