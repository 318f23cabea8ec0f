//! Ticket-level observation records and CSV ingestion.
//!
//! A record is one sold ticket: the fare, booking and flight attributes, the
//! seat's position flags, the cabin indices of the operating layout, and the
//! categorical keys (date, hour, airports, buyer profile, route). Every field
//! is required except the two cabin indices, which may be absent when the
//! operating layout is unknown; specification-aware filtering drops records
//! lacking the index a given specification needs.
//!
//! Ingestion parses fields by header name and accounts for every dropped row:
//! the report counts, per field, how many rows had the field missing and how
//! many had it present but invalid (unparseable or out of range).

use std::collections::BTreeMap;
use std::io::Read;

use serde::Serialize;

use crate::design::spec::SpecId;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationRecord {
    /// Ticket fare in local currency; the outcome is its natural log.
    pub fare: f64,
    /// Days between purchase and departure.
    pub advance_days: f64,
    pub distance_km: f64,
    /// Business-traveler ticket.
    pub business: bool,
    pub flight_time_hours: f64,
    /// Route freight volume, kg.
    pub shipment_kg: f64,
    /// Revenue passengers on the route.
    pub revpax: f64,
    /// Flight load factor in (0, 1].
    pub load_factor: f64,
    pub fuel_price: f64,
    /// Route touches the carrier's hub.
    pub hub: bool,
    /// Carrier's share of route seats, in (0, 1].
    pub seat_share: f64,
    /// Route revenue concentration (Herfindahl) on the booking day.
    pub rhhi: f64,
    pub middle: bool,
    pub last_row: bool,
    pub emergency_exit: bool,
    pub comfort: bool,
    /// Seat in an extra-pitch position of a sibling layout, on an aircraft
    /// without the extra-pitch section.
    pub comfort_placebo: bool,
    pub row_density_index: Option<f64>,
    pub pitch_index: Option<f64>,
    /// Departure date label, e.g. `2019-03-14`.
    pub departure_date: String,
    /// Departure hour, 0-23.
    pub departure_hour: u8,
    pub origin: String,
    pub destination: String,
    /// Buyer profile label.
    pub profile: String,
    /// Cluster key: directional origin-destination market.
    pub route: String,
}

pub const CSV_HEADER: [&str; 25] = [
    "fare",
    "advance_days",
    "distance_km",
    "business",
    "flight_time_hours",
    "shipment_kg",
    "revpax",
    "load_factor",
    "fuel_price",
    "hub",
    "seat_share",
    "rhhi",
    "middle",
    "last_row",
    "emergency_exit",
    "comfort",
    "comfort_placebo",
    "row_density_index",
    "pitch_index",
    "departure_date",
    "departure_hour",
    "origin",
    "destination",
    "profile",
    "route",
];

/// Per-field accounting of why ingestion dropped rows.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub rows_read: usize,
    pub records_kept: usize,
    pub rows_dropped: usize,
    /// Field name to count of rows where the field was empty.
    pub missing: BTreeMap<String, usize>,
    /// Field name to count of rows where the field was present but invalid.
    pub invalid: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Issue {
    Missing,
    Invalid,
}

struct RowParser<'a> {
    record: &'a csv::StringRecord,
    index: &'a BTreeMap<String, usize>,
    issues: Vec<(&'static str, Issue)>,
}

impl<'a> RowParser<'a> {
    fn raw(&mut self, name: &'static str) -> Option<&'a str> {
        let idx = *self.index.get(name).expect("header checked before parsing");
        match self.record.get(idx).map(str::trim) {
            Some("") | None => {
                self.issues.push((name, Issue::Missing));
                None
            }
            Some(value) => Some(value),
        }
    }

    fn f64_checked(
        &mut self,
        name: &'static str,
        valid: impl Fn(f64) -> bool,
    ) -> Option<f64> {
        let raw = self.raw(name)?;
        match raw.parse::<f64>() {
            Ok(value) if value.is_finite() && valid(value) => Some(value),
            _ => {
                self.issues.push((name, Issue::Invalid));
                None
            }
        }
    }

    fn opt_f64_checked(
        &mut self,
        name: &'static str,
        valid: impl Fn(f64) -> bool,
    ) -> Option<Option<f64>> {
        let idx = *self.index.get(name).expect("header checked before parsing");
        let raw = match self.record.get(idx).map(str::trim) {
            Some("") | None => return Some(None),
            Some(value) => value,
        };
        match raw.parse::<f64>() {
            Ok(value) if value.is_finite() && valid(value) => Some(Some(value)),
            _ => {
                self.issues.push((name, Issue::Invalid));
                None
            }
        }
    }

    fn boolean(&mut self, name: &'static str) -> Option<bool> {
        let raw = self.raw(name)?;
        match raw {
            "0" | "false" => Some(false),
            "1" | "true" => Some(true),
            _ => {
                self.issues.push((name, Issue::Invalid));
                None
            }
        }
    }

    fn hour(&mut self, name: &'static str) -> Option<u8> {
        let raw = self.raw(name)?;
        match raw.parse::<u8>() {
            Ok(value) if value <= 23 => Some(value),
            _ => {
                self.issues.push((name, Issue::Invalid));
                None
            }
        }
    }

    fn text(&mut self, name: &'static str) -> Option<String> {
        self.raw(name).map(str::to_string)
    }
}

fn parse_row(
    record: &csv::StringRecord,
    index: &BTreeMap<String, usize>,
) -> std::result::Result<ObservationRecord, Vec<(&'static str, Issue)>> {
    let mut p = RowParser { record, index, issues: Vec::new() };
    let positive = |v: f64| v > 0.0;
    let unit = |v: f64| v > 0.0 && v <= 1.0;
    let index_range = |v: f64| v > 0.0 && v <= 100.0;

    let fare = p.f64_checked("fare", positive);
    let advance_days = p.f64_checked("advance_days", |v| v >= 0.0);
    let distance_km = p.f64_checked("distance_km", positive);
    let business = p.boolean("business");
    let flight_time_hours = p.f64_checked("flight_time_hours", positive);
    let shipment_kg = p.f64_checked("shipment_kg", positive);
    let revpax = p.f64_checked("revpax", positive);
    let load_factor = p.f64_checked("load_factor", unit);
    let fuel_price = p.f64_checked("fuel_price", positive);
    let hub = p.boolean("hub");
    let seat_share = p.f64_checked("seat_share", unit);
    let rhhi = p.f64_checked("rhhi", unit);
    let middle = p.boolean("middle");
    let last_row = p.boolean("last_row");
    let emergency_exit = p.boolean("emergency_exit");
    let comfort = p.boolean("comfort");
    let comfort_placebo = p.boolean("comfort_placebo");
    let row_density_index = p.opt_f64_checked("row_density_index", index_range);
    let pitch_index = p.opt_f64_checked("pitch_index", index_range);
    let departure_date = p.text("departure_date");
    let departure_hour = p.hour("departure_hour");
    let origin = p.text("origin");
    let destination = p.text("destination");
    let profile = p.text("profile");
    let route = p.text("route");

    if !p.issues.is_empty() {
        return Err(p.issues);
    }
    Ok(ObservationRecord {
        fare: fare.unwrap(),
        advance_days: advance_days.unwrap(),
        distance_km: distance_km.unwrap(),
        business: business.unwrap(),
        flight_time_hours: flight_time_hours.unwrap(),
        shipment_kg: shipment_kg.unwrap(),
        revpax: revpax.unwrap(),
        load_factor: load_factor.unwrap(),
        fuel_price: fuel_price.unwrap(),
        hub: hub.unwrap(),
        seat_share: seat_share.unwrap(),
        rhhi: rhhi.unwrap(),
        middle: middle.unwrap(),
        last_row: last_row.unwrap(),
        emergency_exit: emergency_exit.unwrap(),
        comfort: comfort.unwrap(),
        comfort_placebo: comfort_placebo.unwrap(),
        row_density_index: row_density_index.unwrap(),
        pitch_index: pitch_index.unwrap(),
        departure_date: departure_date.unwrap(),
        departure_hour: departure_hour.unwrap(),
        origin: origin.unwrap(),
        destination: destination.unwrap(),
        profile: profile.unwrap(),
        route: route.unwrap(),
    })
}

/// Read records from CSV, dropping rows with missing or invalid required
/// fields and accounting for every drop per field.
pub fn read_records<R: Read>(reader: R) -> Result<(Vec<ObservationRecord>, IngestReport)> {
    let mut csv_reader = csv::ReaderBuilder::new().from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let mut index = BTreeMap::new();
    for (pos, name) in headers.iter().enumerate() {
        index.insert(name.trim().to_string(), pos);
    }
    for required in CSV_HEADER {
        if !index.contains_key(required) {
            return Err(Error::validation(format!("input CSV lacks column {required:?}")));
        }
    }

    let mut records = Vec::new();
    let mut report = IngestReport::default();
    for row in csv_reader.records() {
        let row = row?;
        report.rows_read += 1;
        match parse_row(&row, &index) {
            Ok(record) => records.push(record),
            Err(issues) => {
                report.rows_dropped += 1;
                for (field, issue) in issues {
                    let map = match issue {
                        Issue::Missing => &mut report.missing,
                        Issue::Invalid => &mut report.invalid,
                    };
                    *map.entry(field.to_string()).or_insert(0) += 1;
                }
            }
        }
    }
    report.records_kept = records.len();
    Ok((records, report))
}

pub fn read_records_from_path<P: AsRef<std::path::Path>>(
    path: P,
) -> Result<(Vec<ObservationRecord>, IngestReport)> {
    let file = std::fs::File::open(path.as_ref())?;
    read_records(file)
}

fn format_f64(value: f64) -> String {
    // Shortest round-trip decimal form, stable across runs.
    format!("{value}")
}

/// Write records in canonical column order; `read_records` inverts it.
pub fn write_records<W: std::io::Write>(
    records: &[ObservationRecord],
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    let flag = |b: bool| if b { "1" } else { "0" }.to_string();
    let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
    for r in records {
        w.write_record(&[
            format_f64(r.fare),
            format_f64(r.advance_days),
            format_f64(r.distance_km),
            flag(r.business),
            format_f64(r.flight_time_hours),
            format_f64(r.shipment_kg),
            format_f64(r.revpax),
            format_f64(r.load_factor),
            format_f64(r.fuel_price),
            flag(r.hub),
            format_f64(r.seat_share),
            format_f64(r.rhhi),
            flag(r.middle),
            flag(r.last_row),
            flag(r.emergency_exit),
            flag(r.comfort),
            flag(r.comfort_placebo),
            opt(r.row_density_index),
            opt(r.pitch_index),
            r.departure_date.clone(),
            format!("{:02}", r.departure_hour),
            r.origin.clone(),
            r.destination.clone(),
            r.profile.clone(),
            r.route.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Why specification-aware filtering dropped records.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub input: usize,
    pub kept: usize,
    /// Field name to count of records dropped for lacking it.
    pub excluded: BTreeMap<String, usize>,
}

/// Keep the records usable under `spec`: the row-density index is required
/// by every specification except the one that measures pitch instead.
pub fn filter_records(
    records: Vec<ObservationRecord>,
    spec: SpecId,
) -> (Vec<ObservationRecord>, FilterReport) {
    let needs_pitch = spec == SpecId::S8;
    let mut report = FilterReport { input: records.len(), ..FilterReport::default() };
    let mut kept = Vec::with_capacity(records.len());
    for record in records {
        let missing_field = if needs_pitch {
            record.pitch_index.is_none().then_some("pitch_index")
        } else {
            record.row_density_index.is_none().then_some("row_density_index")
        };
        match missing_field {
            Some(field) => *report.excluded.entry(field.to_string()).or_insert(0) += 1,
            None => kept.push(record),
        }
    }
    report.kept = kept.len();
    (kept, report)
}

#[cfg(test)]
pub(crate) fn sample_record() -> ObservationRecord {
    ObservationRecord {
        fare: 250.0,
        advance_days: 12.0,
        distance_km: 800.0,
        business: false,
        flight_time_hours: 1.4,
        shipment_kg: 12_000.0,
        revpax: 140.0,
        load_factor: 0.82,
        fuel_price: 2.9,
        hub: true,
        seat_share: 0.55,
        rhhi: 0.41,
        middle: false,
        last_row: false,
        emergency_exit: false,
        comfort: false,
        comfort_placebo: false,
        row_density_index: Some(93.75),
        pitch_index: Some(93.2),
        departure_date: "2019-03-14".to_string(),
        departure_hour: 8,
        origin: "AAA".to_string(),
        destination: "BBB".to_string(),
        profile: "p042".to_string(),
        route: "AAA-BBB".to_string(),
    }
}
