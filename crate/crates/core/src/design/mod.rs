//! Observation records, estimation specifications, and design assembly.

pub mod matrix;
pub mod record;
pub mod spec;

pub use matrix::{
    build_design, interest_value, outcome_value, standardize, BlockInfo, ColumnData,
    DesignColumn, DesignMatrix,
};
pub use record::{
    filter_records, read_records, read_records_from_path, write_records, FilterReport,
    IngestReport, ObservationRecord, CSV_HEADER,
};
pub use spec::{AdvBucket, ClusterKey, ControlBlock, EstimationSpec, InterestVar, SpecId};
