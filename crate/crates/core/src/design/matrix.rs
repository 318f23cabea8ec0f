//! Design construction: interest transforms, sparse indicator blocks, and
//! the assembled estimation matrix.
//!
//! Interest terms are stored dense. Control candidates are one-hot (or, for
//! airports, presence) indicators stored as sorted row-index lists, so the
//! selection passes cost time proportional to the number of ones rather than
//! to `n * levels`. Within each block the most frequent level is the dropped
//! base (ties broken toward the lexicographically first label), keeping every
//! block short of the span of the intercept.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::design::record::ObservationRecord;
use crate::design::spec::{ControlBlock, EstimationSpec, InterestVar};
use crate::error::{Error, Result};
use crate::linalg::ColMajor;
use crate::scalar::{population_sd, Real};

/// One design column, dense or binary-sparse.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData<T> {
    Dense(Vec<T>),
    /// Rows holding a one, strictly increasing.
    Indicator(Vec<u32>),
}

impl<T: Real> ColumnData<T> {
    pub fn len_hint(&self) -> Option<usize> {
        match self {
            ColumnData::Dense(values) => Some(values.len()),
            ColumnData::Indicator(_) => None,
        }
    }

    pub fn dot(&self, v: &[T]) -> T {
        match self {
            ColumnData::Dense(values) => {
                values.iter().zip(v).map(|(&x, &vi)| x * vi).sum()
            }
            ColumnData::Indicator(rows) => rows.iter().map(|&i| v[i as usize]).sum(),
        }
    }

    pub fn norm_sq(&self) -> T {
        match self {
            ColumnData::Dense(values) => values.iter().map(|&x| x * x).sum(),
            ColumnData::Indicator(rows) => T::of_usize(rows.len()),
        }
    }

    /// `target += coef * x`.
    pub fn add_scaled_to(&self, coef: T, target: &mut [T]) {
        if coef == T::zero() {
            return;
        }
        match self {
            ColumnData::Dense(values) => {
                for (t, &x) in target.iter_mut().zip(values) {
                    *t += coef * x;
                }
            }
            ColumnData::Indicator(rows) => {
                for &i in rows {
                    target[i as usize] += coef;
                }
            }
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<T> {
        match self {
            ColumnData::Dense(values) => values.clone(),
            ColumnData::Indicator(rows) => {
                let mut out = vec![T::zero(); n];
                for &i in rows {
                    out[i as usize] = T::one();
                }
                out
            }
        }
    }

    pub fn mean(&self, n: usize) -> T {
        match self {
            ColumnData::Dense(values) => crate::scalar::mean(values),
            ColumnData::Indicator(rows) => T::of_usize(rows.len()) / T::of_usize(n),
        }
    }

    pub fn population_sd(&self, n: usize) -> T {
        match self {
            ColumnData::Dense(values) => population_sd(values),
            ColumnData::Indicator(rows) => {
                let p = T::of_usize(rows.len()) / T::of_usize(n);
                (p * (T::one() - p)).sqrt()
            }
        }
    }

    /// `(1/n) * sum_i x_i^2 w_i^2`.
    pub fn mean_sq_times_sq(&self, weights: &[T]) -> T {
        let n = T::of_usize(weights.len());
        match self {
            ColumnData::Dense(values) => {
                let sum: T =
                    values.iter().zip(weights).map(|(&x, &w)| x * x * w * w).sum();
                sum / n
            }
            ColumnData::Indicator(rows) => {
                let sum: T = rows
                    .iter()
                    .map(|&i| {
                        let w = weights[i as usize];
                        w * w
                    })
                    .sum();
                sum / n
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignColumn<T> {
    pub name: String,
    pub data: ColumnData<T>,
}

impl<T: Real> DesignColumn<T> {
    pub fn dense(name: impl Into<String>, values: Vec<T>) -> Self {
        DesignColumn { name: name.into(), data: ColumnData::Dense(values) }
    }

    pub fn indicator(name: impl Into<String>, rows: Vec<u32>) -> Self {
        DesignColumn { name: name.into(), data: ColumnData::Indicator(rows) }
    }
}

/// Where one control block landed in the assembled candidate list.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockInfo {
    pub block: ControlBlock,
    /// Column range inside `DesignMatrix::controls`.
    pub columns: Range<usize>,
    /// Distinct levels observed in the data, base included.
    pub observed_levels: usize,
    pub base_level: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    pub spec: EstimationSpec,
    pub n: usize,
    /// Log fare.
    pub outcome: Vec<T>,
    pub interest: Vec<DesignColumn<T>>,
    pub controls: Vec<DesignColumn<T>>,
    pub blocks: Vec<BlockInfo>,
    /// Cluster index per observation, into `cluster_labels`.
    pub clusters: Vec<u32>,
    pub cluster_labels: Vec<String>,
}

impl<T: Real> DesignMatrix<T> {
    pub fn cluster_count(&self) -> usize {
        self.cluster_labels.len()
    }

    pub fn interest_index(&self, name: &str) -> Option<usize> {
        self.interest.iter().position(|c| c.name == name)
    }
}

/// The log of `value`, failing with the term name when not strictly positive.
fn ln_checked<T: Real>(value: f64, term: &str) -> Result<T> {
    if value > 0.0 {
        Ok(T::of(value.ln()))
    } else {
        Err(Error::domain(format!("{term} requires a positive input, got {value}")))
    }
}

fn flag<T: Real>(value: bool) -> T {
    if value {
        T::one()
    } else {
        T::zero()
    }
}

/// The regressor value an interest term takes on one record. The synthetic
/// generator reuses this exact transform when planting effects, so planted
/// and estimated coefficients live on the same scale.
pub fn interest_value<T: Real>(record: &ObservationRecord, var: InterestVar) -> Result<T> {
    use InterestVar::*;
    match var {
        Adv => Ok(T::of(record.advance_days)),
        LnDist => ln_checked(record.distance_km, "ln(DIST)"),
        LnRowDensity => {
            let value = record.row_density_index.ok_or_else(|| {
                Error::domain(
                    "record lacks row_density_index; filter records for this specification first"
                        .to_string(),
                )
            })?;
            ln_checked(value, "ln(IROWDENS)")
        }
        Bsn => Ok(flag(record.business)),
        LnFlightTime => ln_checked(record.flight_time_hours, "ln(FLTIME)"),
        LnShipment => ln_checked(record.shipment_kg, "ln(SHIPMENT)"),
        LnRevPax => ln_checked(record.revpax, "ln(REVPAX)"),
        LnLoadFactor => ln_checked(record.load_factor, "ln(LF)"),
        LnFuelPrice => ln_checked(record.fuel_price, "ln(FUELP)"),
        Hub => Ok(flag(record.hub)),
        LnSeatShare => ln_checked(record.seat_share, "ln(SEATSH)"),
        LnRhhi => ln_checked(record.rhhi, "ln(RHHI)"),
        Middle => Ok(flag(record.middle)),
        MiddleByBucket(bucket) => Ok(flag(
            record.middle
                && crate::design::spec::AdvBucket::of_days(record.advance_days) == bucket,
        )),
        LastRow => Ok(flag(record.last_row)),
        EmergencyExit => Ok(flag(record.emergency_exit)),
        Comfort => Ok(flag(record.comfort)),
        ComfortPlacebo => Ok(flag(record.comfort_placebo)),
        LnPitch => {
            let value = record.pitch_index.ok_or_else(|| {
                Error::domain(
                    "record lacks pitch_index; filter records for this specification first"
                        .to_string(),
                )
            })?;
            ln_checked(value, "ln(IPITCH)")
        }
    }
}

/// Log fare, the regression outcome.
pub fn outcome_value<T: Real>(record: &ObservationRecord) -> Result<T> {
    ln_checked(record.fare, "ln(FARE)")
}

/// Labels a record exposes for one control block. Airports contribute both
/// endpoints; the other blocks contribute one label.
fn block_labels(record: &ObservationRecord, block: ControlBlock) -> Vec<String> {
    match block {
        ControlBlock::Date => vec![record.departure_date.clone()],
        ControlBlock::Hour => vec![format!("{:02}", record.departure_hour)],
        ControlBlock::Airport => vec![record.origin.clone(), record.destination.clone()],
        ControlBlock::Profile => vec![record.profile.clone()],
    }
}

fn build_block<T: Real>(
    records: &[ObservationRecord],
    block: ControlBlock,
) -> Result<(Vec<DesignColumn<T>>, usize, String)> {
    let mut frequency: BTreeMap<String, usize> = BTreeMap::new();
    for record in records {
        for label in block_labels(record, block) {
            *frequency.entry(label).or_insert(0) += 1;
        }
    }
    let observed = frequency.len();
    if observed > block.level_cap() {
        return Err(Error::validation(format!(
            "{} block has {} observed levels, above the ceiling of {}",
            block.name(),
            observed,
            block.level_cap()
        )));
    }
    // Most frequent level is the base; BTreeMap order breaks ties toward the
    // lexicographically first label.
    let base = frequency
        .iter()
        .max_by_key(|(_, &count)| count)
        .map(|(label, _)| label.clone())
        .ok_or_else(|| Error::validation(format!("{} block observed no levels", block.name())))?;
    let base = frequency
        .iter()
        .find(|(_, &count)| count == frequency[&base])
        .map(|(label, _)| label.clone())
        .expect("some level attains the maximum count");

    let mut rows_per_level: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
    for (label, _) in frequency.iter() {
        if *label != base {
            rows_per_level.insert(label, Vec::new());
        }
    }
    for (row, record) in records.iter().enumerate() {
        for label in block_labels(record, block) {
            if let Some(rows) = rows_per_level.get_mut(label.as_str()) {
                // An airport can appear as both endpoints of different
                // records but only once per record, so no duplicate pushes.
                rows.push(row as u32);
            }
        }
    }
    let columns = rows_per_level
        .into_iter()
        .map(|(label, rows)| DesignColumn::indicator(format!("{}={label}", block.name()), rows))
        .collect();
    Ok((columns, observed, base))
}

/// Assemble outcome, interest columns, candidate control blocks, and cluster
/// assignments for one specification.
pub fn build_design<T: Real>(
    records: &[ObservationRecord],
    spec: &EstimationSpec,
) -> Result<DesignMatrix<T>> {
    if records.is_empty() {
        return Err(Error::validation("no records to build a design from".to_string()));
    }
    let n = records.len();

    let mut outcome = Vec::with_capacity(n);
    for record in records {
        outcome.push(outcome_value(record)?);
    }

    let mut interest = Vec::with_capacity(spec.interests.len());
    for &var in &spec.interests {
        let mut values = Vec::with_capacity(n);
        for record in records {
            values.push(interest_value(record, var)?);
        }
        interest.push(DesignColumn::dense(var.name(), values));
    }

    let mut controls = Vec::new();
    let mut blocks = Vec::with_capacity(spec.control_blocks.len());
    for &block in &spec.control_blocks {
        let (columns, observed_levels, base_level) = build_block(records, block)?;
        let start = controls.len();
        controls.extend(columns);
        blocks.push(BlockInfo {
            block,
            columns: start..controls.len(),
            observed_levels,
            base_level,
        });
    }

    let mut cluster_labels: Vec<String> = records
        .iter()
        .map(|r| match spec.cluster_key {
            crate::design::spec::ClusterKey::Route => r.route.clone(),
            crate::design::spec::ClusterKey::Observation => String::new(),
        })
        .collect();
    let clusters = match spec.cluster_key {
        crate::design::spec::ClusterKey::Observation => {
            cluster_labels = (0..n).map(|i| format!("obs{i}")).collect();
            (0..n as u32).collect()
        }
        crate::design::spec::ClusterKey::Route => {
            let mut distinct: Vec<String> = cluster_labels.clone();
            distinct.sort();
            distinct.dedup();
            let index: BTreeMap<&str, u32> = distinct
                .iter()
                .enumerate()
                .map(|(i, label)| (label.as_str(), i as u32))
                .collect();
            let assignment =
                cluster_labels.iter().map(|label| index[label.as_str()]).collect();
            cluster_labels = distinct;
            assignment
        }
    };

    Ok(DesignMatrix {
        spec: spec.clone(),
        n,
        outcome,
        interest,
        controls,
        blocks,
        clusters,
        cluster_labels,
    })
}

/// Center each column to mean zero and scale to unit population standard
/// deviation, in place. Returns the means and standard deviations. Fails on
/// a constant column, naming it.
pub fn standardize<T: Real>(matrix: &mut ColMajor<T>) -> Result<(Vec<T>, Vec<T>)> {
    let mut means = Vec::with_capacity(matrix.p);
    let mut sds = Vec::with_capacity(matrix.p);
    for j in 0..matrix.p {
        let column = matrix.column(j);
        let mean = crate::scalar::mean(column);
        let sd = population_sd(column);
        if sd <= T::zero() {
            return Err(Error::domain(format!(
                "column {j} is constant and cannot be standardized"
            )));
        }
        means.push(mean);
        sds.push(sd);
        let start = j * matrix.n;
        for value in &mut matrix.data[start..start + matrix.n] {
            *value = (*value - mean) / sd;
        }
    }
    Ok((means, sds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::record::sample_record;
    use crate::design::spec::{AdvBucket, ClusterKey, SpecId};
    use approx::assert_relative_eq;

    fn records_for_blocks() -> Vec<ObservationRecord> {
        // Dates: d2 appears 3 times (base), d1 twice, d3 once.
        // Hours: 08 four times (base), 10 twice.
        // Routes: two distinct.
        let mut out = Vec::new();
        let specs = [
            ("d1", 8, "AAA", "BBB"),
            ("d1", 8, "AAA", "BBB"),
            ("d2", 8, "AAA", "CCC"),
            ("d2", 8, "AAA", "CCC"),
            ("d2", 10, "BBB", "CCC"),
            ("d3", 10, "BBB", "CCC"),
        ];
        for (date, hour, origin, destination) in specs {
            let mut r = sample_record();
            r.departure_date = date.to_string();
            r.departure_hour = hour;
            r.origin = origin.to_string();
            r.destination = destination.to_string();
            r.route = format!("{origin}-{destination}");
            out.push(r);
        }
        out
    }

    #[test]
    fn interest_transforms_match_hand_values() {
        let r = sample_record();
        let v: f64 = interest_value(&r, InterestVar::Adv).unwrap();
        assert_relative_eq!(v, 12.0);
        let v: f64 = interest_value(&r, InterestVar::LnDist).unwrap();
        assert_relative_eq!(v, 800.0f64.ln());
        let v: f64 = interest_value(&r, InterestVar::LnRowDensity).unwrap();
        assert_relative_eq!(v, 93.75f64.ln());
        let v: f64 = interest_value(&r, InterestVar::Hub).unwrap();
        assert_relative_eq!(v, 1.0);
        let v: f64 = outcome_value(&r).unwrap();
        assert_relative_eq!(v, 250.0f64.ln());
    }

    #[test]
    fn bucket_interaction_fires_only_in_its_bucket() {
        let mut r = sample_record();
        r.middle = true;
        r.advance_days = 12.0; // week2
        let v: f64 = interest_value(&r, InterestVar::MiddleByBucket(AdvBucket::Week2)).unwrap();
        assert_relative_eq!(v, 1.0);
        let v: f64 = interest_value(&r, InterestVar::MiddleByBucket(AdvBucket::Week1)).unwrap();
        assert_relative_eq!(v, 0.0);
        r.middle = false;
        let v: f64 = interest_value(&r, InterestVar::MiddleByBucket(AdvBucket::Week2)).unwrap();
        assert_relative_eq!(v, 0.0);
    }

    #[test]
    fn missing_index_is_a_domain_error() {
        let mut r = sample_record();
        r.row_density_index = None;
        assert!(interest_value::<f64>(&r, InterestVar::LnRowDensity).is_err());
        r.pitch_index = None;
        assert!(interest_value::<f64>(&r, InterestVar::LnPitch).is_err());
    }

    #[test]
    fn blocks_drop_the_most_frequent_level() {
        let records = records_for_blocks();
        let spec = EstimationSpec::for_id(SpecId::S1);
        let design: DesignMatrix<f64> = build_design(&records, &spec).unwrap();

        let date_block = &design.blocks[0];
        assert_eq!(date_block.base_level, "d2");
        assert_eq!(date_block.observed_levels, 3);
        let date_names: Vec<&str> = design.controls[date_block.columns.clone()]
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(date_names, vec!["date=d1", "date=d3"]);

        let hour_block = &design.blocks[1];
        assert_eq!(hour_block.base_level, "08");
        assert_eq!(hour_block.observed_levels, 2);
        let hour_col = &design.controls[hour_block.columns.start];
        assert_eq!(hour_col.name, "hour=10");
        assert_eq!(hour_col.data, ColumnData::Indicator(vec![4, 5]));
    }

    #[test]
    fn tie_on_frequency_takes_the_lexicographically_first_base() {
        let mut records = records_for_blocks();
        records.truncate(4); // d1 twice, d2 twice
        let spec = EstimationSpec::for_id(SpecId::S1);
        let design: DesignMatrix<f64> = build_design(&records, &spec).unwrap();
        assert_eq!(design.blocks[0].base_level, "d1");
    }

    #[test]
    fn airport_block_marks_both_endpoints() {
        let records = records_for_blocks();
        let mut spec = EstimationSpec::for_id(SpecId::S7);
        spec.interests = EstimationSpec::for_id(SpecId::S1).interests;
        let design: DesignMatrix<f64> = build_design(&records, &spec).unwrap();
        let airport_block =
            design.blocks.iter().find(|b| b.block == ControlBlock::Airport).unwrap();
        // Every airport touches four records, so the tie resolves to AAA.
        assert_eq!(airport_block.base_level, "AAA");
        let names: Vec<&str> = design.controls[airport_block.columns.clone()]
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(names, vec!["airport=BBB", "airport=CCC"]);
        let bbb = &design.controls[airport_block.columns.start];
        assert_eq!(bbb.data, ColumnData::Indicator(vec![0, 1, 4, 5]));
    }

    #[test]
    fn level_cap_is_enforced() {
        let mut records = Vec::new();
        for i in 0..30 {
            let mut r = sample_record();
            r.departure_hour = (i % 24) as u8;
            r.profile = format!("p{i}");
            records.push(r);
        }
        // 24 hours is exactly the cap: fine.
        let spec = EstimationSpec::for_id(SpecId::S1);
        assert!(build_design::<f64>(&records, &spec).is_ok());
        // Blow the date cap with 131 distinct dates.
        let mut records = Vec::new();
        for i in 0..131 {
            let mut r = sample_record();
            r.departure_date = format!("d{i:03}");
            records.push(r);
        }
        let err = build_design::<f64>(&records, &spec).unwrap_err().to_string();
        assert!(err.contains("date") && err.contains("130"), "{err}");
    }

    #[test]
    fn clusters_index_distinct_routes() {
        let records = records_for_blocks();
        let spec = EstimationSpec::for_id(SpecId::S1);
        let design: DesignMatrix<f64> = build_design(&records, &spec).unwrap();
        assert_eq!(design.cluster_labels, vec!["AAA-BBB", "AAA-CCC", "BBB-CCC"]);
        assert_eq!(design.clusters, vec![0, 0, 1, 1, 2, 2]);
        assert_eq!(design.cluster_count(), 3);

        let mut spec = spec;
        spec.cluster_key = ClusterKey::Observation;
        let design: DesignMatrix<f64> = build_design(&records, &spec).unwrap();
        assert_eq!(design.cluster_count(), 6);
    }

    #[test]
    fn indicator_ops_match_dense_ops() {
        let rows = vec![1u32, 3, 4];
        let sparse: ColumnData<f64> = ColumnData::Indicator(rows.clone());
        let dense = ColumnData::Dense(sparse.to_dense(6));
        let v = [0.5, -1.0, 2.0, 3.0, -0.25, 7.0];
        assert_relative_eq!(sparse.dot(&v), dense.dot(&v));
        assert_relative_eq!(sparse.norm_sq(), dense.norm_sq());
        assert_relative_eq!(sparse.mean(6), dense.mean(6));
        assert_relative_eq!(sparse.population_sd(6), dense.population_sd(6), max_relative = 1e-15);
        assert_relative_eq!(
            sparse.mean_sq_times_sq(&v),
            dense.mean_sq_times_sq(&v),
            max_relative = 1e-15
        );
        let mut a = v;
        let mut b = v;
        sparse.add_scaled_to(2.5, &mut a);
        dense.add_scaled_to(2.5, &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn standardize_centers_and_scales() {
        let mut m =
            ColMajor::from_columns(&[vec![1.0_f64, 2.0, 3.0, 6.0], vec![5.0, 5.0, 7.0, 7.0]]);
        let (means, sds) = standardize(&mut m).unwrap();
        assert_relative_eq!(means[0], 3.0);
        assert_relative_eq!(means[1], 6.0);
        assert_relative_eq!(sds[1], 1.0);
        for j in 0..2 {
            let col = m.column(j);
            assert_relative_eq!(crate::scalar::mean(col), 0.0, epsilon = 1e-15);
            assert_relative_eq!(population_sd(col), 1.0, max_relative = 1e-12);
        }
        let mut constant = ColMajor::from_columns(&[vec![2.0_f64, 2.0, 2.0]]);
        assert!(standardize(&mut constant).is_err());
    }
}
