//! Market-level summaries: passenger dispersion tables and market
//! concentration.
//!
//! The dispersion table cross-tabulates passengers by cabin row and seat
//! letter, then derives two integer percent panels: shares within each row
//! (row panel) and shares within each letter (column panel). Percents round
//! half-up, so 12.5% prints as 13. The concentration index is the Herfindahl
//! sum of squared shares.

use std::io::Read;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Integer percent of `numerator / denominator`, rounding halves up.
///
/// Computed exactly in integers as `(200 n + d) / (2 d)`.
pub fn round_half_up_percent(numerator: u64, denominator: u64) -> Result<u32> {
    if denominator == 0 {
        return Err(Error::domain("percent of a zero denominator".to_string()));
    }
    if numerator > denominator {
        return Err(Error::domain(format!(
            "numerator {numerator} exceeds denominator {denominator}"
        )));
    }
    Ok(((200 * numerator + denominator) / (2 * denominator)) as u32)
}

/// Bookings cross-tabulated by advance-purchase day (rows) and fare letter
/// class (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispersionTable {
    pub row_labels: Vec<String>,
    pub class_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl DispersionTable {
    pub fn new(
        row_labels: Vec<String>,
        class_labels: Vec<String>,
        counts: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if counts.len() != row_labels.len() {
            return Err(Error::validation(format!(
                "{} count rows for {} row labels",
                counts.len(),
                row_labels.len()
            )));
        }
        for (idx, row) in counts.iter().enumerate() {
            if row.len() != class_labels.len() {
                return Err(Error::validation(format!(
                    "row {} has {} cells for {} class labels",
                    row_labels[idx],
                    row.len(),
                    class_labels.len()
                )));
            }
        }
        let table = DispersionTable { row_labels, class_labels, counts };
        if table.grand_total() == 0 {
            return Err(Error::validation("dispersion table is empty".to_string()));
        }
        Ok(table)
    }

    /// Read a counts CSV whose header is a row-label column followed by one
    /// column per class, e.g. `advance_days,A,B,C,D,E,F`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = csv_reader.headers()?.clone();
        if headers.len() < 2 {
            return Err(Error::validation(
                "counts CSV needs a label column and at least one class column".to_string(),
            ));
        }
        let class_labels: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut row_labels = Vec::new();
        let mut counts = Vec::new();
        for (idx, record) in csv_reader.records().enumerate() {
            let record = record?;
            let lineno = idx + 2;
            if record.len() != headers.len() {
                return Err(Error::parse(
                    lineno,
                    format!("{} fields, expected {}", record.len(), headers.len()),
                ));
            }
            row_labels.push(record.get(0).unwrap_or_default().to_string());
            let mut row = Vec::with_capacity(class_labels.len());
            for field in record.iter().skip(1) {
                let value: u64 = field.parse().map_err(|_| {
                    Error::parse(lineno, format!("invalid count {field:?}"))
                })?;
                row.push(value);
            }
            counts.push(row);
        }
        Self::new(row_labels, class_labels, counts)
    }

    pub fn from_csv_path<P: AsRef<std::path::Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_csv_reader(text.as_bytes())
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn class_totals(&self) -> Vec<u64> {
        let mut totals = vec![0u64; self.class_labels.len()];
        for row in &self.counts {
            for (total, cell) in totals.iter_mut().zip(row) {
                *total += cell;
            }
        }
        totals
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Percent of each row booked in each class: `cell / row_total`.
    /// A row with zero bookings reports zeros.
    pub fn within_row_percents(&self) -> Vec<Vec<u32>> {
        let row_totals = self.row_totals();
        self.counts
            .iter()
            .zip(&row_totals)
            .map(|(row, &total)| {
                row.iter()
                    .map(|&cell| {
                        if total == 0 {
                            0
                        } else {
                            round_half_up_percent(cell, total).expect("cell <= row total")
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Percent of each class booked on each day: `cell / class_total`.
    pub fn within_class_percents(&self) -> Vec<Vec<u32>> {
        let class_totals = self.class_totals();
        self.counts
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&class_totals)
                    .map(|(&cell, &total)| {
                        if total == 0 {
                            0
                        } else {
                            round_half_up_percent(cell, total).expect("cell <= class total")
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Each class's share of all bookings; the totals row of the row panel.
    pub fn class_total_percents(&self) -> Vec<u32> {
        let grand = self.grand_total();
        self.class_totals()
            .iter()
            .map(|&total| round_half_up_percent(total, grand).expect("class total <= grand"))
            .collect()
    }

    /// Each day's share of all bookings; the totals column of the class panel.
    pub fn row_total_percents(&self) -> Vec<u32> {
        let grand = self.grand_total();
        self.row_totals()
            .iter()
            .map(|&total| round_half_up_percent(total, grand).expect("row total <= grand"))
            .collect()
    }
}

/// Shares of a nonnegative vector: each value divided by the sum.
pub fn shares<T: Real>(values: &[T]) -> Result<Vec<T>> {
    if values.is_empty() {
        return Err(Error::domain("shares of an empty vector".to_string()));
    }
    let mut total = T::zero();
    for &v in values {
        if !(v >= T::zero()) {
            return Err(Error::domain(format!("negative or non-finite value {v}")));
        }
        total += v;
    }
    if total <= T::zero() {
        return Err(Error::domain("shares of an all-zero vector".to_string()));
    }
    Ok(values.iter().map(|&v| v / total).collect())
}

/// Herfindahl concentration index: the sum of squared shares. Equals 1 for a
/// monopoly and 1/k for k equal participants.
pub fn herfindahl_index<T: Real>(values: &[T]) -> Result<T> {
    let shares = shares(values)?;
    Ok(shares.iter().map(|&s| s * s).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn demo_table() -> DispersionTable {
        // Hand-tabulated 3x3:         row totals
        //   day 1:  5  3  2    -> 10
        //   day 2:  1  0  7    ->  8
        //   day 3:  2  2  2    ->  6
        // class totals: 8 5 11, grand 24.
        DispersionTable::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec![5, 3, 2], vec![1, 0, 7], vec![2, 2, 2]],
        )
        .unwrap()
    }

    #[test]
    fn half_up_rounding_is_exact_integer_arithmetic() {
        assert_eq!(round_half_up_percent(1, 8).unwrap(), 13); // 12.5 -> 13
        assert_eq!(round_half_up_percent(1, 3).unwrap(), 33); // 33.33
        assert_eq!(round_half_up_percent(2, 3).unwrap(), 67); // 66.67
        assert_eq!(round_half_up_percent(0, 7).unwrap(), 0);
        assert_eq!(round_half_up_percent(7, 7).unwrap(), 100);
        assert_eq!(round_half_up_percent(3, 8).unwrap(), 38); // 37.5 -> 38
        assert!(round_half_up_percent(2, 0).is_err());
        assert!(round_half_up_percent(3, 2).is_err());
    }

    #[test]
    fn marginals_add_up() {
        let table = demo_table();
        assert_eq!(table.row_totals(), vec![10, 8, 6]);
        assert_eq!(table.class_totals(), vec![8, 5, 11]);
        assert_eq!(table.grand_total(), 24);
    }

    #[test]
    fn row_panel_percents() {
        let table = demo_table();
        let rows = table.within_row_percents();
        assert_eq!(rows[0], vec![50, 30, 20]);
        assert_eq!(rows[1], vec![13, 0, 88]); // 12.5 -> 13, 87.5 -> 88
        assert_eq!(rows[2], vec![33, 33, 33]);
        // Totals row: 8/24, 5/24, 11/24 -> 33, 21, 46.
        assert_eq!(table.class_total_percents(), vec![33, 21, 46]);
    }

    #[test]
    fn class_panel_percents() {
        let table = demo_table();
        let cols = table.within_class_percents();
        // Class A: 5/8, 1/8, 2/8 -> 63, 13, 25.
        assert_eq!((cols[0][0], cols[1][0], cols[2][0]), (63, 13, 25));
        // Class C: 2/11, 7/11, 2/11 -> 18, 64, 18.
        assert_eq!((cols[0][2], cols[1][2], cols[2][2]), (18, 64, 18));
        // Totals column: 10/24, 8/24, 6/24 -> 42, 33, 25.
        assert_eq!(table.row_total_percents(), vec![42, 33, 25]);
    }

    #[test]
    fn csv_round_trip() {
        let csv = "advance_days,A,B,C\n1,5,3,2\n2,1,0,7\n3,2,2,2\n";
        let table = DispersionTable::from_csv_reader(csv.as_bytes()).unwrap();
        assert_eq!(table, demo_table());
        let bad = "advance_days,A\n1,x\n";
        let err = DispersionTable::from_csv_reader(bad.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn herfindahl_known_values() {
        let h: f64 = herfindahl_index(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(h, 0.25);
        let h: f64 = herfindahl_index(&[10.0]).unwrap();
        assert_relative_eq!(h, 1.0);
        // Shares 0.6 / 0.4 -> 0.36 + 0.16 = 0.52.
        let h: f64 = herfindahl_index(&[60.0, 40.0]).unwrap();
        assert_relative_eq!(h, 0.52, max_relative = 1e-15);
        // Scale invariance.
        let a: f64 = herfindahl_index(&[3.0, 1.0, 4.0]).unwrap();
        let b: f64 = herfindahl_index(&[30.0, 10.0, 40.0]).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-15);
    }

    #[test]
    fn herfindahl_rejects_degenerate_input() {
        assert!(herfindahl_index::<f64>(&[]).is_err());
        assert!(herfindahl_index(&[0.0, 0.0]).is_err());
        assert!(herfindahl_index(&[1.0, -0.5]).is_err());
    }
}
