//! Cabin layout model: rows of per-letter cells plus row-level markers and
//! pitch sections.
//!
//! A layout is a grid. Each row holds one cell per column letter; a cell is
//! absent (no seat installed), a standard seat, or an extra-pitch seat. Rows
//! additionally carry furniture/position markers (galley, lavatory, over-wing,
//! emergency exit). Rows whose cells are all absent are legal placeholders:
//! they keep their row number but contribute no seats and never count as
//! seat-bearing.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellState {
    Absent,
    Standard,
    ExtraPitch,
}

impl CellState {
    pub fn exists(self) -> bool {
        self != CellState::Absent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowMarker {
    Galley,
    Lavatory,
    OverWing,
    EmergencyExit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowSpec {
    pub row_number: u32,
    /// One state per layout column, aligned with `CabinLayout::columns`.
    pub cells: Vec<CellState>,
    pub markers: BTreeSet<RowMarker>,
}

impl RowSpec {
    pub fn is_seat_bearing(&self) -> bool {
        self.cells.iter().any(|c| c.exists())
    }

    pub fn seat_count(&self) -> u32 {
        self.cells.iter().filter(|c| c.exists()).count() as u32
    }
}

/// A contiguous row range sharing one seat pitch, in inches.
#[derive(Debug, Clone, PartialEq)]
pub struct PitchSection {
    pub first_row: u32,
    pub last_row: u32,
    pub pitch_inches: f64,
}

/// Per-section (pitch, seat-bearing row count, seat count) summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigTriple {
    pub pitch_inches: f64,
    pub row_count: u32,
    pub seat_count: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeatFlags {
    pub is_middle: bool,
    pub is_window: bool,
    pub is_aisle: bool,
    pub is_last_row: bool,
    pub is_emergency_exit: bool,
    pub is_comfort: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CabinLayout {
    pub aircraft_model: String,
    pub carrier: String,
    pub declared_capacity: Option<u32>,
    /// Column letters, fuselage-left to fuselage-right.
    pub columns: Vec<char>,
    /// Column counts per seat block, left to right (e.g. [3, 3] for 3-3).
    /// Blocks are separated by aisles; their sizes sum to `columns.len()`.
    pub block_sizes: Vec<usize>,
    pub rows: Vec<RowSpec>,
    pub pitch_sections: Vec<PitchSection>,
}

pub const PITCH_MIN_INCHES: f64 = 28.0;
pub const PITCH_MAX_INCHES: f64 = 36.0;

impl CabinLayout {
    /// Number of cells whose state is not absent.
    pub fn seat_count(&self) -> u32 {
        self.rows.iter().map(RowSpec::seat_count).sum()
    }

    /// Number of rows containing at least one existing seat.
    pub fn seat_bearing_rows(&self) -> u32 {
        self.rows.iter().filter(|r| r.is_seat_bearing()).count() as u32
    }

    /// Highest row number containing any existing seat.
    pub fn last_seat_row(&self) -> Option<u32> {
        self.rows
            .iter()
            .rev()
            .find(|r| r.is_seat_bearing())
            .map(|r| r.row_number)
    }

    pub fn row(&self, row_number: u32) -> Option<&RowSpec> {
        self.rows.iter().find(|r| r.row_number == row_number)
    }

    pub fn column_index(&self, letter: char) -> Option<usize> {
        self.columns.iter().position(|&c| c == letter)
    }

    /// Existing seats as (row, letter) pairs, row-major.
    pub fn seats(&self) -> Vec<(u32, char)> {
        let mut out = Vec::with_capacity(self.seat_count() as usize);
        for row in &self.rows {
            for (idx, cell) in row.cells.iter().enumerate() {
                if cell.exists() {
                    out.push((row.row_number, self.columns[idx]));
                }
            }
        }
        out
    }

    /// Count of extra-pitch seats.
    pub fn comfort_seat_count(&self) -> u32 {
        self.rows
            .iter()
            .map(|r| r.cells.iter().filter(|c| **c == CellState::ExtraPitch).count() as u32)
            .sum()
    }

    /// Positions of extra-pitch seats as (row, letter) pairs.
    pub fn comfort_positions(&self) -> BTreeSet<(u32, char)> {
        let mut out = BTreeSet::new();
        for row in &self.rows {
            for (idx, cell) in row.cells.iter().enumerate() {
                if *cell == CellState::ExtraPitch {
                    out.insert((row.row_number, self.columns[idx]));
                }
            }
        }
        out
    }

    /// Per-pitch-section (P, R, S) summaries; R counts only seat-bearing rows.
    pub fn config_triples(&self) -> Vec<ConfigTriple> {
        self.pitch_sections
            .iter()
            .map(|sec| {
                let in_section = |r: &&RowSpec| {
                    r.row_number >= sec.first_row && r.row_number <= sec.last_row
                };
                let row_count = self
                    .rows
                    .iter()
                    .filter(in_section)
                    .filter(|r| r.is_seat_bearing())
                    .count() as u32;
                let seat_count = self
                    .rows
                    .iter()
                    .filter(in_section)
                    .map(|r| r.seat_count())
                    .sum();
                ConfigTriple { pitch_inches: sec.pitch_inches, row_count, seat_count }
            })
            .collect()
    }

    /// Check every type invariant; parsing and construction both route here.
    pub fn validate(&self) -> Result<()> {
        let mut prev_row = 0u32;
        for row in &self.rows {
            if row.row_number == 0 {
                return Err(Error::validation("row numbers must be positive".to_string()));
            }
            if row.row_number <= prev_row {
                return Err(Error::validation(format!(
                    "row numbers must be strictly increasing: row {} follows row {}",
                    row.row_number, prev_row
                )));
            }
            prev_row = row.row_number;
            if row.cells.len() != self.columns.len() {
                return Err(Error::validation(format!(
                    "row {} has {} cells, layout declares {} columns",
                    row.row_number,
                    row.cells.len(),
                    self.columns.len()
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for &c in &self.columns {
            if !seen.insert(c) {
                return Err(Error::validation(format!("duplicate column letter {c}")));
            }
        }
        if self.block_sizes.iter().sum::<usize>() != self.columns.len() {
            return Err(Error::validation(
                "seat block sizes do not sum to the column count".to_string(),
            ));
        }
        if self.block_sizes.iter().any(|&b| b == 0) {
            return Err(Error::validation("empty seat block".to_string()));
        }

        // Pitch sections: ordered, non-overlapping, in (28, 36), covering all
        // seat-bearing rows.
        let mut prev_last = 0u32;
        for sec in &self.pitch_sections {
            if sec.first_row == 0 || sec.last_row < sec.first_row {
                return Err(Error::validation(format!(
                    "invalid pitch section rows {}-{}",
                    sec.first_row, sec.last_row
                )));
            }
            if sec.first_row <= prev_last {
                return Err(Error::validation(format!(
                    "pitch sections overlap at row {}",
                    sec.first_row
                )));
            }
            prev_last = sec.last_row;
            if !(PITCH_MIN_INCHES..=PITCH_MAX_INCHES).contains(&sec.pitch_inches) {
                return Err(Error::validation(format!(
                    "pitch {}\" outside the {PITCH_MIN_INCHES}-{PITCH_MAX_INCHES}\" range",
                    sec.pitch_inches
                )));
            }
        }
        for row in self.rows.iter().filter(|r| r.is_seat_bearing()) {
            if !self
                .pitch_sections
                .iter()
                .any(|s| row.row_number >= s.first_row && row.row_number <= s.last_row)
            {
                return Err(Error::validation(format!(
                    "seat-bearing row {} not covered by any pitch section",
                    row.row_number
                )));
            }
        }

        if let Some(declared) = self.declared_capacity {
            let counted = self.seat_count();
            if declared != counted {
                return Err(Error::validation(format!(
                    "declared capacity {declared} does not match counted seats {counted}"
                )));
            }
        }
        Ok(())
    }

    /// Column index ranges of the seat blocks, left to right.
    fn block_ranges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.block_sizes.len());
        let mut start = 0;
        for &size in &self.block_sizes {
            out.push((start, start + size));
            start += size;
        }
        out
    }

    /// Lateral-position and row flags for an existing seat.
    ///
    /// Within its seat block, a seat is the window iff it is the
    /// fuselage-most existing seat of a fuselage-adjacent block; it is a
    /// middle iff both immediate in-block neighbours exist (the confined
    /// position); every other existing seat is an aisle seat.
    pub fn seat_flags(&self, row_number: u32, letter: char) -> Result<SeatFlags> {
        let row = self.row(row_number).ok_or_else(|| {
            Error::validation(format!("row {row_number} does not exist in this layout"))
        })?;
        let col = self.column_index(letter).ok_or_else(|| {
            Error::validation(format!("column {letter} does not exist in this layout"))
        })?;
        if !row.cells[col].exists() {
            return Err(Error::validation(format!(
                "no seat installed at row {row_number} letter {letter}"
            )));
        }

        let ranges = self.block_ranges();
        let block_idx = ranges
            .iter()
            .position(|&(s, e)| col >= s && col < e)
            .expect("column inside some block");
        let (start, end) = ranges[block_idx];
        let leftmost_block = block_idx == 0;
        let rightmost_block = block_idx == ranges.len() - 1;

        // Fuselage-most existing cell of a fuselage-adjacent block.
        let window_col = if leftmost_block {
            (start..end).find(|&i| row.cells[i].exists())
        } else if rightmost_block {
            (start..end).rev().find(|&i| row.cells[i].exists())
        } else {
            None
        };
        let is_window = window_col == Some(col);
        let flanked = col > start
            && col + 1 < end
            && row.cells[col - 1].exists()
            && row.cells[col + 1].exists();
        let is_middle = !is_window && flanked;
        let is_aisle = !is_window && !is_middle;

        Ok(SeatFlags {
            is_middle,
            is_window,
            is_aisle,
            is_last_row: Some(row_number) == self.last_seat_row(),
            is_emergency_exit: row.markers.contains(&RowMarker::EmergencyExit),
            is_comfort: row.cells[col] == CellState::ExtraPitch,
        })
    }
}

/// Positions that are extra-pitch on any same-model, same-carrier layout in
/// `registry`. Used to flag seats on sibling layouts that lack an
/// extra-pitch section but occupy the equivalent physical position.
pub fn comfort_positions_of_equipped_siblings(
    registry: &[CabinLayout],
    aircraft_model: &str,
    carrier: &str,
) -> BTreeSet<(u32, char)> {
    let mut out = BTreeSet::new();
    for layout in registry {
        if layout.aircraft_model == aircraft_model && layout.carrier == carrier {
            out.extend(layout.comfort_positions());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: u32, states: &[CellState]) -> RowSpec {
        RowSpec { row_number: n, cells: states.to_vec(), markers: BTreeSet::new() }
    }

    fn three_three(rows: Vec<RowSpec>) -> CabinLayout {
        let last = rows.iter().map(|r| r.row_number).max().unwrap_or(1);
        CabinLayout {
            aircraft_model: "T1".into(),
            carrier: "X".into(),
            declared_capacity: None,
            columns: vec!['A', 'B', 'C', 'D', 'E', 'F'],
            block_sizes: vec![3, 3],
            rows,
            pitch_sections: vec![PitchSection { first_row: 1, last_row: last, pitch_inches: 31.0 }],
        }
    }

    use CellState::{Absent as O, Standard as S};

    #[test]
    fn seat_count_counts_existing_cells() {
        let layout = three_three(vec![row(1, &[S, O, S, S, S, S])]);
        assert_eq!(layout.seat_count(), 5);
        let layout = three_three(vec![row(1, &[S, O, S, O, O, O])]);
        assert_eq!(layout.seat_count(), 2);
    }

    #[test]
    fn full_three_three_row_flags() {
        let layout = three_three(vec![row(1, &[S, S, S, S, S, S])]);
        let f = |letter| layout.seat_flags(1, letter).unwrap();
        assert!(f('A').is_window && !f('A').is_middle && !f('A').is_aisle);
        assert!(f('B').is_middle);
        assert!(f('C').is_aisle);
        assert!(f('D').is_aisle);
        assert!(f('E').is_middle);
        assert!(f('F').is_window);
    }

    #[test]
    fn gap_breaks_the_middle_flag() {
        // A absent: B becomes the window; C has no flanked neighbour pair.
        let layout = three_three(vec![row(1, &[O, S, S, S, S, O])]);
        assert!(layout.seat_flags(1, 'B').unwrap().is_window);
        assert!(layout.seat_flags(1, 'C').unwrap().is_aisle);
        // Right block: F absent, E is the window.
        assert!(layout.seat_flags(1, 'E').unwrap().is_window);
        assert!(layout.seat_flags(1, 'D').unwrap().is_aisle);
    }

    #[test]
    fn two_two_block_has_no_middle() {
        let layout = CabinLayout {
            aircraft_model: "T2".into(),
            carrier: "X".into(),
            declared_capacity: None,
            columns: vec!['A', 'B', 'C', 'D'],
            block_sizes: vec![2, 2],
            rows: vec![row(1, &[S, S, S, S])],
            pitch_sections: vec![PitchSection { first_row: 1, last_row: 1, pitch_inches: 30.0 }],
        };
        for letter in ['A', 'B', 'C', 'D'] {
            assert!(!layout.seat_flags(1, letter).unwrap().is_middle, "{letter}");
        }
        assert!(layout.seat_flags(1, 'A').unwrap().is_window);
        assert!(layout.seat_flags(1, 'B').unwrap().is_aisle);
        assert!(layout.seat_flags(1, 'C').unwrap().is_aisle);
        assert!(layout.seat_flags(1, 'D').unwrap().is_window);
    }

    #[test]
    fn last_row_ignores_trailing_placeholders() {
        let layout = three_three(vec![
            row(1, &[S, S, S, S, S, S]),
            row(2, &[S, S, S, S, S, S]),
            row(3, &[O, O, O, O, O, O]),
        ]);
        assert_eq!(layout.last_seat_row(), Some(2));
        assert!(layout.seat_flags(2, 'A').unwrap().is_last_row);
        assert!(!layout.seat_flags(1, 'A').unwrap().is_last_row);
    }

    #[test]
    fn emergency_exit_is_row_level() {
        let mut r = row(4, &[S, S, S, S, S, S]);
        r.markers.insert(RowMarker::EmergencyExit);
        let layout = three_three(vec![r]);
        for letter in ['A', 'B', 'C', 'D', 'E', 'F'] {
            assert!(layout.seat_flags(4, letter).unwrap().is_emergency_exit);
        }
    }

    #[test]
    fn nonexistent_seat_is_a_lookup_error() {
        let layout = three_three(vec![row(1, &[S, O, S, S, S, S])]);
        assert!(layout.seat_flags(1, 'B').is_err());
        assert!(layout.seat_flags(2, 'A').is_err());
        assert!(layout.seat_flags(1, 'Z').is_err());
    }

    #[test]
    fn capacity_mismatch_fails_validation() {
        let mut layout = three_three(vec![row(1, &[S, S, S, S, S, S])]);
        layout.declared_capacity = Some(7);
        let err = layout.validate().unwrap_err().to_string();
        assert!(err.contains('7') && err.contains('6'), "{err}");
    }

    #[test]
    fn uncovered_seat_bearing_row_fails_validation() {
        let mut layout = three_three(vec![row(1, &[S; 6]), row(2, &[S; 6])]);
        layout.pitch_sections = vec![PitchSection { first_row: 1, last_row: 1, pitch_inches: 31.0 }];
        assert!(layout.validate().is_err());
        // A placeholder row outside the sections is fine.
        let mut layout = three_three(vec![row(1, &[S; 6]), row(2, &[O; 6])]);
        layout.pitch_sections = vec![PitchSection { first_row: 1, last_row: 1, pitch_inches: 31.0 }];
        assert!(layout.validate().is_ok());
    }

    #[test]
    fn config_triples_count_only_seat_bearing_rows() {
        let mut layout = three_three(vec![
            row(1, &[S; 6]),
            row(2, &[S; 6]),
            row(3, &[O; 6]),
            row(4, &[S; 6]),
        ]);
        layout.pitch_sections = vec![
            PitchSection { first_row: 1, last_row: 2, pitch_inches: 34.0 },
            PitchSection { first_row: 3, last_row: 4, pitch_inches: 31.0 },
        ];
        let triples = layout.config_triples();
        assert_eq!(triples.len(), 2);
        assert_eq!((triples[0].row_count, triples[0].seat_count), (2, 12));
        assert_eq!((triples[1].row_count, triples[1].seat_count), (1, 6));
    }
}
