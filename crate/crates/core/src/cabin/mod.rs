//! Cabin layout parsing, seat classification, and densification indices.

pub mod indices;
pub mod layout;
pub mod parse;
pub mod reference;

pub use indices::{pitch_index, row_density_index, weighted_mean_pitch};
pub use layout::{
    comfort_positions_of_equipped_siblings, CabinLayout, CellState, ConfigTriple, PitchSection,
    RowMarker, RowSpec, SeatFlags,
};
pub use parse::{parse_seat_map, serialize_seat_map};
pub use reference::{ReferenceEntry, ReferenceTable};
