//! Cabin densification indices.
//!
//! Both indices rescale a layout against the roomiest configuration of the
//! same aircraft model, read from a reference table, so that 100 means "as
//! dense as the reference allows" on the row axis and "as roomy as the
//! reference allows" on the pitch axis:
//!
//! * row-density index = 100 * (seat-bearing rows) / (reference max rows)
//! * pitch index       = 100 * (row-weighted mean pitch) / (reference max pitch)
//!
//! Placeholder rows (no seat in any column) count toward neither numerator.

use crate::cabin::layout::{CabinLayout, ConfigTriple};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Mean cabin pitch with each section weighted by its seat-bearing row count.
pub fn weighted_mean_pitch<T: Real>(triples: &[ConfigTriple]) -> Result<T> {
    let total_rows: u32 = triples.iter().map(|t| t.row_count).sum();
    if total_rows == 0 {
        return Err(Error::domain(
            "cannot average pitch over zero seat-bearing rows".to_string(),
        ));
    }
    let mut acc = T::zero();
    for triple in triples {
        acc += T::of(triple.pitch_inches) * T::of_usize(triple.row_count as usize);
    }
    Ok(acc / T::of_usize(total_rows as usize))
}

/// Row-density index in (0, 100]: how many of the reference configuration's
/// rows this layout installs.
pub fn row_density_index<T: Real>(layout: &CabinLayout, reference_max_rows: u32) -> Result<T> {
    if reference_max_rows == 0 {
        return Err(Error::domain("reference max rows must be positive".to_string()));
    }
    let rows = layout.seat_bearing_rows();
    if rows == 0 {
        return Err(Error::domain(format!(
            "layout {} has no seat-bearing rows",
            layout.aircraft_model
        )));
    }
    if rows > reference_max_rows {
        return Err(Error::domain(format!(
            "layout {} has {} seat-bearing rows, more than the reference maximum {}",
            layout.aircraft_model, rows, reference_max_rows
        )));
    }
    Ok(T::of(100.0) * T::of_usize(rows as usize) / T::of_usize(reference_max_rows as usize))
}

/// Pitch index in (0, 100]: row-weighted mean pitch relative to the
/// reference configuration's maximum pitch.
pub fn pitch_index<T: Real>(layout: &CabinLayout, reference_max_pitch: f64) -> Result<T> {
    if !(reference_max_pitch > 0.0) {
        return Err(Error::domain("reference max pitch must be positive".to_string()));
    }
    let mean: T = weighted_mean_pitch(&layout.config_triples())?;
    let index = T::of(100.0) * mean / T::of(reference_max_pitch);
    if index > T::of(100.0) + T::of(1e-9) {
        return Err(Error::domain(format!(
            "layout {} mean pitch exceeds the reference maximum {}",
            layout.aircraft_model, reference_max_pitch
        )));
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cabin::parse::parse_seat_map;
    use approx::assert_relative_eq;

    /// 31 seat-bearing rows: 7 at 34" and 24 at 31", plus one placeholder.
    fn two_section_map() -> CabinLayout {
        let mut text = String::from("Demo (X)\ncolumns: A B C | D E F\npitch: 1-7 34\npitch: 8-32 31\n");
        for row in 1..=7 {
            text.push_str(&format!("{row} 1* 1* 1* 1* 1* 1*\n"));
        }
        for row in 8..=32 {
            if row == 13 {
                text.push_str("13 0 0 0 0 0 0\n");
            } else {
                text.push_str(&format!("{row} 1 1 1 1 1 1\n"));
            }
        }
        parse_seat_map(&text).unwrap()
    }

    #[test]
    fn weighted_mean_pitch_weights_by_rows() {
        let layout = two_section_map();
        // (34*7 + 31*24) / 31 = 982/31
        let mean: f64 = weighted_mean_pitch(&layout.config_triples()).unwrap();
        assert_relative_eq!(mean, 982.0 / 31.0, max_relative = 1e-15);
    }

    #[test]
    fn pitch_index_against_reference_34() {
        let layout = two_section_map();
        // 100 * (982/31) / 34 = 98200/1054
        let idx: f64 = pitch_index(&layout, 34.0).unwrap();
        assert_relative_eq!(idx, 98_200.0 / 1_054.0, max_relative = 1e-15);
        assert_relative_eq!(idx, 93.168_880_455_407_97, max_relative = 1e-12);
    }

    #[test]
    fn row_density_skips_placeholder_rows() {
        let layout = two_section_map();
        assert_eq!(layout.seat_bearing_rows(), 31);
        let idx: f64 = row_density_index(&layout, 32).unwrap();
        assert_relative_eq!(idx, 100.0 * 31.0 / 32.0, max_relative = 1e-15);
    }

    #[test]
    fn full_reference_layout_scores_100() {
        let layout = parse_seat_map(
            "D (X)\ncolumns: A | B\npitch: 1-2 30\n1 1 1\n2 1 1\n",
        )
        .unwrap();
        let rows: f64 = row_density_index(&layout, 2).unwrap();
        assert_relative_eq!(rows, 100.0);
        let pitch: f64 = pitch_index(&layout, 30.0).unwrap();
        assert_relative_eq!(pitch, 100.0);
    }

    #[test]
    fn more_rows_than_reference_is_a_domain_error() {
        let layout = two_section_map();
        assert!(row_density_index::<f64>(&layout, 30).is_err());
    }

    #[test]
    fn f32_instantiation_matches_f64() {
        let layout = two_section_map();
        let as32: f32 = pitch_index(&layout, 34.0).unwrap();
        let as64: f64 = pitch_index(&layout, 34.0).unwrap();
        assert_relative_eq!(as32 as f64, as64, max_relative = 1e-6);
    }
}
