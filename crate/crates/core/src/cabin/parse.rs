//! Seat-map text format: parser and canonical serializer.
//!
//! A map file holds one layout:
//!
//! ```text
//! # anything after a hash is a comment
//! Boeing 737-800 (Gol)
//! 177 SEATS
//! columns: A B C | D E F
//! pitch: 1-7 34
//! pitch: 8-32 31
//! 1 1* 1* 1* 1* 1* 1*
//! 8 1 1 1 1 1 1
//! 16 ‡ 0 0 0 0 0 0
//! ```
//!
//! The model line comes first; the capacity, `columns:`, and `pitch:` lines
//! follow in any order; row lines close the file. A row line is the row
//! number followed by whitespace-separated tokens. Cell tokens fill columns
//! left to right: `0` no seat, `1` standard seat, `1*` extra-pitch seat.
//! Marker tokens attach to the row and consume no column: `G` galley, `W`
//! lavatory, `/` or `\` over-wing, `‡` emergency exit. Serialization emits
//! cell tokens first, then markers in a fixed order, so
//! `parse(serialize(layout)) == layout`.

use std::collections::BTreeSet;

use crate::cabin::layout::{CabinLayout, CellState, PitchSection, RowMarker, RowSpec};
use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

fn parse_model_line(line: &str, lineno: usize) -> Result<(String, String)> {
    let line = line.trim();
    if let Some(open) = line.rfind('(') {
        let rest = &line[open + 1..];
        let close = rest.rfind(')').ok_or_else(|| {
            Error::parse(lineno, "unclosed carrier parenthesis in model line".to_string())
        })?;
        let model = line[..open].trim().to_string();
        let carrier = rest[..close].trim().to_string();
        if model.is_empty() {
            return Err(Error::parse(lineno, "empty aircraft model".to_string()));
        }
        Ok((model, carrier))
    } else {
        Ok((line.to_string(), String::new()))
    }
}

fn parse_columns_line(body: &str, lineno: usize) -> Result<(Vec<char>, Vec<usize>)> {
    let mut columns = Vec::new();
    let mut block_sizes = Vec::new();
    let mut current = 0usize;
    for token in body.split_whitespace() {
        if token == "|" {
            block_sizes.push(current);
            current = 0;
            continue;
        }
        let mut chars = token.chars();
        let letter = chars.next().unwrap();
        if chars.next().is_some() || !letter.is_ascii_uppercase() {
            return Err(Error::parse(
                lineno,
                format!("column letters must be single uppercase characters, got {token:?}"),
            ));
        }
        columns.push(letter);
        current += 1;
    }
    block_sizes.push(current);
    if columns.is_empty() {
        return Err(Error::parse(lineno, "columns line declares no letters".to_string()));
    }
    Ok((columns, block_sizes))
}

fn parse_pitch_line(body: &str, lineno: usize) -> Result<PitchSection> {
    let mut parts = body.split_whitespace();
    let range = parts
        .next()
        .ok_or_else(|| Error::parse(lineno, "pitch line missing row range".to_string()))?;
    let pitch = parts
        .next()
        .ok_or_else(|| Error::parse(lineno, "pitch line missing pitch value".to_string()))?;
    if parts.next().is_some() {
        return Err(Error::parse(lineno, "pitch line has trailing tokens".to_string()));
    }
    let (first, last) = range
        .split_once('-')
        .ok_or_else(|| Error::parse(lineno, format!("pitch range {range:?} is not a-b")))?;
    let first_row: u32 = first
        .parse()
        .map_err(|_| Error::parse(lineno, format!("invalid row number {first:?}")))?;
    let last_row: u32 = last
        .parse()
        .map_err(|_| Error::parse(lineno, format!("invalid row number {last:?}")))?;
    let pitch_inches: f64 = pitch
        .parse()
        .map_err(|_| Error::parse(lineno, format!("invalid pitch value {pitch:?}")))?;
    Ok(PitchSection { first_row, last_row, pitch_inches })
}

fn parse_row_line(line: &str, lineno: usize, n_columns: usize) -> Result<RowSpec> {
    let mut tokens = line.split_whitespace();
    let row_number: u32 = tokens
        .next()
        .expect("row line has a first token")
        .parse()
        .map_err(|_| Error::parse(lineno, "invalid row number".to_string()))?;
    let mut cells = Vec::with_capacity(n_columns);
    let mut markers = BTreeSet::new();
    for token in tokens {
        let cell = match token {
            "0" => Some(CellState::Absent),
            "1" => Some(CellState::Standard),
            "1*" => Some(CellState::ExtraPitch),
            "G" => {
                markers.insert(RowMarker::Galley);
                None
            }
            "W" => {
                markers.insert(RowMarker::Lavatory);
                None
            }
            "/" | "\\" => {
                markers.insert(RowMarker::OverWing);
                None
            }
            "‡" => {
                markers.insert(RowMarker::EmergencyExit);
                None
            }
            other => {
                return Err(Error::parse(lineno, format!("unknown seat token {other:?}")));
            }
        };
        if let Some(state) = cell {
            cells.push(state);
        }
    }
    if cells.len() != n_columns {
        return Err(Error::parse(
            lineno,
            format!("row {row_number} has {} cell tokens, expected {n_columns}", cells.len()),
        ));
    }
    Ok(RowSpec { row_number, cells, markers })
}

/// Parse and validate one seat map.
pub fn parse_seat_map(input: &str) -> Result<CabinLayout> {
    let mut model: Option<(String, String)> = None;
    let mut declared_capacity: Option<u32> = None;
    let mut columns: Option<(Vec<char>, Vec<usize>)> = None;
    let mut pitch_sections: Vec<PitchSection> = Vec::new();
    let mut rows: Vec<RowSpec> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if model.is_none() {
            model = Some(parse_model_line(line, lineno)?);
            continue;
        }
        if let Some(body) = line.strip_prefix("columns:") {
            if columns.is_some() {
                return Err(Error::parse(lineno, "duplicate columns line".to_string()));
            }
            columns = Some(parse_columns_line(body, lineno)?);
            continue;
        }
        if let Some(body) = line.strip_prefix("pitch:") {
            pitch_sections.push(parse_pitch_line(body, lineno)?);
            continue;
        }
        let first = line.split_whitespace().next().expect("non-empty line");
        if first.chars().all(|c| c.is_ascii_digit()) {
            let rest = line[first.len()..].trim_start();
            let is_capacity = rest
                .split_whitespace()
                .next()
                .is_some_and(|w| w.eq_ignore_ascii_case("seats"));
            if is_capacity {
                if declared_capacity.is_some() {
                    return Err(Error::parse(lineno, "duplicate capacity line".to_string()));
                }
                declared_capacity = Some(first.parse().map_err(|_| {
                    Error::parse(lineno, format!("invalid seat capacity {first:?}"))
                })?);
                continue;
            }
            let n_columns = columns
                .as_ref()
                .ok_or_else(|| {
                    Error::parse(lineno, "row line before columns declaration".to_string())
                })?
                .0
                .len();
            rows.push(parse_row_line(line, lineno, n_columns)?);
            continue;
        }
        return Err(Error::parse(lineno, format!("unrecognized line {line:?}")));
    }

    let (aircraft_model, carrier) =
        model.ok_or_else(|| Error::parse(1, "missing model line".to_string()))?;
    let (columns, block_sizes) =
        columns.ok_or_else(|| Error::parse(1, "missing columns line".to_string()))?;
    if rows.is_empty() {
        return Err(Error::parse(1, "seat map declares no rows".to_string()));
    }
    let layout = CabinLayout {
        aircraft_model,
        carrier,
        declared_capacity,
        columns,
        block_sizes,
        rows,
        pitch_sections,
    };
    layout.validate()?;
    Ok(layout)
}

/// Emit the canonical text form; `parse_seat_map` inverts it exactly.
pub fn serialize_seat_map(layout: &CabinLayout) -> String {
    let mut out = String::new();
    if layout.carrier.is_empty() {
        out.push_str(&layout.aircraft_model);
    } else {
        out.push_str(&format!("{} ({})", layout.aircraft_model, layout.carrier));
    }
    out.push('\n');
    if let Some(capacity) = layout.declared_capacity {
        out.push_str(&format!("{capacity} SEATS\n"));
    }
    out.push_str("columns:");
    let mut col_idx = 0usize;
    for (block, &size) in layout.block_sizes.iter().enumerate() {
        if block > 0 {
            out.push_str(" |");
        }
        for _ in 0..size {
            out.push(' ');
            out.push(layout.columns[col_idx]);
            col_idx += 1;
        }
    }
    out.push('\n');
    for section in &layout.pitch_sections {
        out.push_str(&format!(
            "pitch: {}-{} {}\n",
            section.first_row, section.last_row, section.pitch_inches
        ));
    }
    for row in &layout.rows {
        out.push_str(&row.row_number.to_string());
        for cell in &row.cells {
            out.push(' ');
            out.push_str(match cell {
                CellState::Absent => "0",
                CellState::Standard => "1",
                CellState::ExtraPitch => "1*",
            });
        }
        for marker in &row.markers {
            out.push(' ');
            out.push_str(match marker {
                RowMarker::Galley => "G",
                RowMarker::Lavatory => "W",
                RowMarker::OverWing => "/",
                RowMarker::EmergencyExit => "‡",
            });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# narrow-body demo
Demo 100 (Test Air)
10 SEATS
columns: A B | C D
pitch: 1-2 34
pitch: 3-3 31
1 1* 1* 1* 1* G W
2 1 1 1 1 / ‡
3 0 1 1 0
";

    #[test]
    fn parses_the_demo_map() {
        let layout = parse_seat_map(SMALL).unwrap();
        assert_eq!(layout.aircraft_model, "Demo 100");
        assert_eq!(layout.carrier, "Test Air");
        assert_eq!(layout.declared_capacity, Some(10));
        assert_eq!(layout.columns, vec!['A', 'B', 'C', 'D']);
        assert_eq!(layout.block_sizes, vec![2, 2]);
        assert_eq!(layout.seat_count(), 10);
        assert_eq!(layout.comfort_seat_count(), 4);
        let row2 = layout.row(2).unwrap();
        assert!(row2.markers.contains(&RowMarker::OverWing));
        assert!(row2.markers.contains(&RowMarker::EmergencyExit));
        let row1 = layout.row(1).unwrap();
        assert!(row1.markers.contains(&RowMarker::Galley));
        assert!(row1.markers.contains(&RowMarker::Lavatory));
        assert_eq!(layout.row(3).unwrap().seat_count(), 2);
    }

    #[test]
    fn round_trips_through_the_canonical_form() {
        let layout = parse_seat_map(SMALL).unwrap();
        let text = serialize_seat_map(&layout);
        let again = parse_seat_map(&text).unwrap();
        assert_eq!(layout, again);
        // The canonical form is a fixed point.
        assert_eq!(serialize_seat_map(&again), text);
    }

    #[test]
    fn backslash_also_marks_the_wing() {
        let layout = parse_seat_map(
            "D (X)\ncolumns: A | B\npitch: 1-1 30\n1 1 1 \\\n",
        )
        .unwrap();
        assert!(layout.row(1).unwrap().markers.contains(&RowMarker::OverWing));
    }

    #[test]
    fn wrong_cell_count_reports_the_line() {
        let err = parse_seat_map("D (X)\ncolumns: A | B\npitch: 1-1 30\n1 1 1 1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 4"), "{err}");
        assert!(err.contains("expected 2"), "{err}");
    }

    #[test]
    fn unknown_token_is_rejected() {
        let err = parse_seat_map("D (X)\ncolumns: A | B\npitch: 1-1 30\n1 1 2\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown seat token"), "{err}");
    }

    #[test]
    fn capacity_mismatch_is_rejected_at_parse_time() {
        let err = parse_seat_map("D (X)\n3 SEATS\ncolumns: A | B\npitch: 1-1 30\n1 1 1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("declared capacity"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let layout = parse_seat_map(
            "# header\n\nD (X)\n  # indented comment\ncolumns: A | B\npitch: 1-1 30\n1 1 1 # trailing\n",
        )
        .unwrap();
        assert_eq!(layout.seat_count(), 2);
    }

    #[test]
    fn model_line_without_carrier_is_allowed() {
        let layout = parse_seat_map("Bare Model\ncolumns: A | B\npitch: 1-1 30\n1 1 1\n").unwrap();
        assert_eq!(layout.aircraft_model, "Bare Model");
        assert_eq!(layout.carrier, "");
        let again = parse_seat_map(&serialize_seat_map(&layout)).unwrap();
        assert_eq!(layout, again);
    }

    #[test]
    fn row_before_columns_is_an_error() {
        let err = parse_seat_map("D (X)\n1 1 1\ncolumns: A | B\n").unwrap_err().to_string();
        assert!(err.contains("before columns"), "{err}");
    }
}
