//! Synthetic ticket generation.
//!
//! The generator builds a miniature airline world deterministically from a
//! seed: a fleet of parametric narrowbody layouts (emitted as seat-map text
//! and run through the real parser, so seat flags are structurally
//! consistent), a set of directional routes between airports, calendars of
//! departure dates and hours, and a skewed population of buyer profiles.
//! Each ticket draws a flight, a buyer, and a seat, and log fare is the sum
//! of the configured true effects evaluated through the same covariate
//! transforms the estimator uses, plus sparse control effects, a per-route
//! cluster effect, and idiosyncratic noise.
//!
//! Within each aircraft family the mean pitch times the row count is held at
//! a constant five sixths of the reference maxima product, so the log pitch
//! index equals `ln(25000/3)` minus the log row-density index on every
//! variant. The two density parametrizations therefore span the same model
//! space exactly.

use std::collections::{BTreeMap, HashSet};
use std::ops::RangeInclusive;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Exp, Normal};

use crate::cabin::{
    comfort_positions_of_equipped_siblings, parse_seat_map, pitch_index, row_density_index,
    CabinLayout, ReferenceEntry, SeatFlags,
};
use crate::design::{interest_value, InterestVar, ObservationRecord};
use crate::error::{Error, Result};

use super::config::{DgpConfig, DensityTruth, FleetShape, MiddleTruth, TrueEffects};

/// One splitmix64 step; used to derive independent stream seeds.
pub(crate) fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const WORLD_STREAM: u64 = 0x57_4F52_4C44; // "WORLD"
const TICKET_STREAM: u64 = 0x54_4943_4B45; // "TICKE"
const FLIGHT_STREAM: u64 = 0x46_4C49_4748; // "FLIGH"

/// ln(pitch index) + ln(row-density index) on every synthetic variant.
pub const LN_INDEX_PRODUCT: f64 = 9.028_018_815_182_229; // ln(25000/3)

struct Family {
    model: &'static str,
    columns_line: &'static str,
    /// Column indices of the rightmost block, zeroed in short last rows.
    right_block: &'static [usize],
    max_rows: u32,
    max_pitch: f64,
    rows: RangeInclusive<u32>,
    can_equip: bool,
}

impl Family {
    /// Mean pitch times row count, held constant across the family.
    fn pitch_budget(&self) -> f64 {
        5.0 / 6.0 * self.max_pitch * f64::from(self.max_rows)
    }
}

const FAMILIES: [Family; 3] = [
    Family {
        model: "RJ-190",
        columns_line: "A B | C D",
        right_block: &[2, 3],
        max_rows: 19,
        max_pitch: 34.0,
        rows: 16..=19,
        can_equip: false,
    },
    Family {
        model: "NB-300",
        columns_line: "A B C | D E F",
        right_block: &[3, 4, 5],
        max_rows: 30,
        max_pitch: 35.0,
        rows: 25..=30,
        can_equip: true,
    },
    Family {
        model: "NB-330",
        columns_line: "A B C | D E F",
        right_block: &[3, 4, 5],
        max_rows: 33,
        max_pitch: 36.0,
        rows: 28..=33,
        can_equip: true,
    },
];

/// Rows of the extra-pitch section on equipped variants.
const COMFORT_ROWS: u32 = 7;

/// Pitch plan for one variant: the extra-pitch section pitch and the
/// standard pitch, or a single uniform pitch.
fn pitch_plan(family: &Family, rows: u32) -> (f64, f64) {
    let budget = family.pitch_budget();
    let front = (budget / f64::from(rows) + 2.5).min(family.max_pitch);
    let back = (budget - f64::from(COMFORT_ROWS) * front) / f64::from(rows - COMFORT_ROWS);
    (front, back)
}

/// Whether an extra-pitch variant exists for this row count: the front
/// section must gain at least two inches and the back section must stay at
/// or above the 28-inch floor.
fn equipped_exists(family: &Family, rows: u32) -> bool {
    if !family.can_equip || rows <= COMFORT_ROWS {
        return false;
    }
    let (front, back) = pitch_plan(family, rows);
    front >= back + 2.0 && back >= 28.0
}

/// Visual positions where an all-zero placeholder row may sit.
const PLACEHOLDER_POSITIONS: [u32; 2] = [13, 21];

/// Emit the seat-map text for one variant. Deterministic in its arguments.
fn seat_map_text(family: &Family, rows: u32, equipped: bool, carrier: &str) -> String {
    let wanted_placeholders = rows % 3;
    let mut placeholders: Vec<u32> = Vec::new();
    for &pos in &PLACEHOLDER_POSITIONS {
        if placeholders.len() as u32 >= wanted_placeholders {
            break;
        }
        let total_with_this = rows + placeholders.len() as u32 + 1;
        // Keep the extra-pitch section and the last row seat-bearing.
        if pos > COMFORT_ROWS + 1 && pos < total_with_this {
            placeholders.push(pos);
        }
    }
    let total_rows = rows + placeholders.len() as u32;
    let short_last_row = (rows + u32::from(equipped)) % 2 == 0;

    // The exit row sits a little past mid-cabin, counted over seat-bearing
    // rows only.
    let exit_ordinal = (f64::from(rows) * 0.55).ceil() as u32;

    let column_letters: Vec<char> = family
        .columns_line
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .collect();

    let mut lines: Vec<String> = Vec::new();
    let mut body: Vec<String> = Vec::new();
    let mut seat_total = 0u32;
    let mut seen_seat_rows = 0u32;
    for row_number in 1..=total_rows {
        if placeholders.contains(&row_number) {
            let cells = vec!["0"; column_letters.len()].join(" ");
            body.push(format!("{row_number} {cells}"));
            continue;
        }
        seen_seat_rows += 1;
        let is_last = seen_seat_rows == rows;
        let mut cells: Vec<String> = Vec::with_capacity(column_letters.len());
        for idx in 0..column_letters.len() {
            let absent = short_last_row && is_last && family.right_block.contains(&idx);
            let token = if absent {
                "0"
            } else if equipped && row_number <= COMFORT_ROWS {
                "1*"
            } else {
                "1"
            };
            if token != "0" {
                seat_total += 1;
            }
            cells.push(token.to_string());
        }
        let marker = if seen_seat_rows == exit_ordinal { " ‡" } else { "" };
        body.push(format!("{row_number} {}{marker}", cells.join(" ")));
    }

    lines.push(format!("{} ({carrier})", family.model));
    lines.push(format!("{seat_total} SEATS"));
    lines.push(format!("columns: {}", family.columns_line));
    if equipped {
        let (front, back) = pitch_plan(family, rows);
        lines.push(format!("pitch: 1-{COMFORT_ROWS} {front}"));
        lines.push(format!("pitch: {}-{total_rows} {back}", COMFORT_ROWS + 1));
    } else {
        let mean = family.pitch_budget() / f64::from(rows);
        lines.push(format!("pitch: 1-{total_rows} {mean}"));
    }
    lines.extend(body);
    lines.join("\n")
}

/// One drawable seat of a variant.
#[derive(Debug, Clone)]
struct VariantSeat {
    flags: SeatFlags,
    placebo: bool,
}

/// One fleet variant with everything the ticket loop needs precomputed.
#[derive(Debug, Clone)]
pub(crate) struct Variant {
    pub(crate) rows: u32,
    pub(crate) equipped: bool,
    seats: Vec<VariantSeat>,
    cumulative_weight: Vec<f64>,
    total_weight: f64,
    pub(crate) seat_count: u32,
    pub(crate) row_density: f64,
    pub(crate) pitch: f64,
}

impl Variant {
    fn draw_seat<R: Rng>(&self, rng: &mut R) -> &VariantSeat {
        let target = rng.gen::<f64>() * self.total_weight;
        let idx = match self
            .cumulative_weight
            .binary_search_by(|w| w.partial_cmp(&target).expect("finite weights"))
        {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        &self.seats[idx.min(self.seats.len() - 1)]
    }
}

/// All variants of all families, plus the layouts they came from.
pub(crate) struct FleetCatalog {
    /// Variants grouped by family, keyed by (rows, equipped).
    variants: Vec<BTreeMap<(u32, bool), Variant>>,
}

impl FleetCatalog {
    pub(crate) fn build(fleet: &FleetShape) -> Result<FleetCatalog> {
        // Phase one: parse every variant's layout.
        let mut parsed: Vec<(usize, u32, bool, CabinLayout)> = Vec::new();
        for (family_idx, family) in FAMILIES.iter().enumerate() {
            for rows in family.rows.clone() {
                let text = seat_map_text(family, rows, false, &fleet.carrier);
                let layout = parse_seat_map(&text)?;
                layout.validate()?;
                parsed.push((family_idx, rows, false, layout));
                if equipped_exists(family, rows) {
                    let text = seat_map_text(family, rows, true, &fleet.carrier);
                    let layout = parse_seat_map(&text)?;
                    layout.validate()?;
                    parsed.push((family_idx, rows, true, layout));
                }
            }
        }
        let registry: Vec<CabinLayout> = parsed.iter().map(|(_, _, _, l)| l.clone()).collect();

        // Phase two: precompute seat draws, flags, and indices.
        let mut variants: Vec<BTreeMap<(u32, bool), Variant>> =
            (0..FAMILIES.len()).map(|_| BTreeMap::new()).collect();
        for (family_idx, rows, equipped, layout) in parsed {
            let family = &FAMILIES[family_idx];
            let sibling_comfort = if equipped {
                Default::default()
            } else {
                comfort_positions_of_equipped_siblings(
                    &registry,
                    &layout.aircraft_model,
                    &layout.carrier,
                )
            };
            let row_density: f64 = row_density_index(&layout, family.max_rows)?;
            let pitch: f64 = pitch_index(&layout, family.max_pitch)?;
            let mut seats = Vec::new();
            let mut cumulative = Vec::new();
            let mut total = 0.0f64;
            for (row, letter) in layout.seats() {
                let flags = layout.seat_flags(row, letter)?;
                let class_weight = if flags.is_middle {
                    fleet.middle_weight
                } else if flags.is_window {
                    fleet.window_weight
                } else {
                    fleet.aisle_weight
                };
                let weight = if flags.is_comfort {
                    class_weight * fleet.comfort_weight_factor
                } else {
                    class_weight
                };
                total += weight;
                cumulative.push(total);
                let placebo = !equipped && sibling_comfort.contains(&(row, letter));
                // Placebo positions mirror the siblings' extra-pitch section,
                // which only ever spans the front rows.
                debug_assert!(!placebo || row <= COMFORT_ROWS);
                seats.push(VariantSeat { flags, placebo });
            }
            if total <= 0.0 {
                return Err(Error::validation(
                    "seat-draw weights leave no drawable seat".to_string(),
                ));
            }
            variants[family_idx].insert(
                (rows, equipped),
                Variant {
                    rows,
                    equipped,
                    seats,
                    cumulative_weight: cumulative,
                    total_weight: total,
                    seat_count: layout.seat_count(),
                    row_density,
                    pitch,
                },
            );
        }
        Ok(FleetCatalog { variants })
    }

    fn variant(&self, family: usize, rows: u32, equipped: bool) -> &Variant {
        self.variants[family]
            .get(&(rows, equipped))
            .expect("variant drawn from the family's own range")
    }

    fn has_equipped(&self, family: usize, rows: u32) -> bool {
        self.variants[family].contains_key(&(rows, true))
    }

    #[cfg(test)]
    fn all_variants(&self) -> impl Iterator<Item = &Variant> {
        self.variants.iter().flat_map(|m| m.values())
    }
}

/// Reference bounds for the synthetic fleet, keyed by model name.
pub fn fleet_reference_entries() -> Vec<ReferenceEntry> {
    FAMILIES
        .iter()
        .map(|f| ReferenceEntry {
            model: f.model.to_string(),
            max_rows: f.max_rows,
            max_pitch: f.max_pitch,
        })
        .collect()
}

/// Map an airport index to a three-letter code.
fn airport_code(idx: usize) -> String {
    let a = u8::try_from(idx / 676).unwrap_or(25) % 26;
    let b = u8::try_from((idx / 26) % 26).unwrap_or(0);
    let c = u8::try_from(idx % 26).unwrap_or(0);
    String::from_utf8(vec![b'A' + a, b'A' + b, b'A' + c]).expect("ascii")
}

/// Month lengths from March onward in a non-leap year.
const MONTH_LENGTHS: [(u32, u32); 6] = [(3, 31), (4, 30), (5, 31), (6, 30), (7, 31), (8, 31)];

/// Label for the `idx`-th departure date, counting from March 1st.
fn date_label(idx: usize) -> String {
    let mut remaining = idx as u32;
    for (month, length) in MONTH_LENGTHS {
        if remaining < length {
            return format!("2019-{month:02}-{:02}", remaining + 1);
        }
        remaining -= length;
    }
    // validate() caps date_levels at the calendar length.
    unreachable!("date index outside the generator calendar")
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

struct RouteData {
    origin: usize,
    destination: usize,
    label: String,
    family: usize,
    dist_km: f64,
    flight_time_hours: f64,
    shipment_kg: f64,
    fuel_price: f64,
    seat_share: f64,
    rhhi_logit_base: f64,
    lf_logit_base: f64,
    hub: bool,
    cluster_effect: f64,
}

struct World {
    airports: Vec<String>,
    airport_effects: Vec<f64>,
    routes: Vec<RouteData>,
    date_labels: Vec<String>,
    date_effects: Vec<f64>,
    date_peak: Vec<bool>,
    hour_cumulative: Vec<f64>,
    hour_effects: Vec<f64>,
    profile_cumulative: Vec<f64>,
    profile_effects: BTreeMap<usize, f64>,
    anchor_profiles: Vec<usize>,
}

fn build_world(config: &DgpConfig) -> Result<World> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(config.seed ^ WORLD_STREAM));
    let normal = Normal::new(0.0, 1.0).map_err(|e| Error::computation(e.to_string()))?;
    let m = &config.market;
    let c = &config.controls;

    let airports: Vec<String> = (0..config.airport_count).map(airport_code).collect();
    let mut airport_effects = vec![0.0f64; config.airport_count];
    for k in 0..c.airport_effect_count {
        let idx = m.hub_airports + k;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        airport_effects[idx] = sign * c.airport_effect_size;
    }

    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut routes: Vec<RouteData> = Vec::with_capacity(config.route_count);
    while routes.len() < config.route_count {
        let origin = rng.gen_range(0..config.airport_count);
        let destination = rng.gen_range(0..config.airport_count);
        if origin == destination || !seen.insert((origin, destination)) {
            continue;
        }
        let size = normal.sample(&mut rng);
        let ln_dist = m.dist_ln_mid + m.dist_ln_size_slope * size
            + m.dist_ln_noise * normal.sample(&mut rng);
        let dist_km = ln_dist.exp();
        let family = if dist_km < config.fleet.short_haul_km {
            0
        } else if dist_km < config.fleet.medium_haul_km {
            1
        } else {
            2
        };
        let flight_time_hours = (dist_km / m.cruise_speed_kmh + m.flight_time_overhead_hours)
            * (m.flight_time_ln_sd * normal.sample(&mut rng)).exp();
        let shipment_kg = (m.shipment_ln_mean + m.shipment_ln_sd * normal.sample(&mut rng)).exp();
        let fuel_price = (m.fuel_ln_mean + m.fuel_ln_sd * normal.sample(&mut rng)).exp();
        let seat_share = logistic(
            m.seat_share_logit_mean
                + m.seat_share_size_slope * size
                + m.seat_share_logit_sd * normal.sample(&mut rng),
        );
        let rhhi_logit_base = m.rhhi_logit_mean + m.rhhi_route_sd * normal.sample(&mut rng);
        let lf_logit_base = m.lf_logit_mean + m.lf_logit_route_sd * normal.sample(&mut rng);
        let hub = origin < m.hub_airports || destination < m.hub_airports;
        let cluster_effect = config.cluster_sd * normal.sample(&mut rng);
        routes.push(RouteData {
            origin,
            destination,
            label: format!("{}-{}", airports[origin], airports[destination]),
            family,
            dist_km,
            flight_time_hours,
            shipment_kg,
            fuel_price,
            seat_share,
            rhhi_logit_base,
            lf_logit_base,
            hub,
            cluster_effect,
        });
    }

    let date_labels: Vec<String> = (0..config.date_levels).map(date_label).collect();
    let peak_set: HashSet<usize> = config.peak_date_indices().into_iter().collect();
    let date_peak: Vec<bool> = (0..config.date_levels).map(|d| peak_set.contains(&d)).collect();
    let date_effects: Vec<f64> = date_peak
        .iter()
        .map(|&peak| if peak { c.peak_date_effect } else { 0.0 })
        .collect();

    let mut hour_effects = vec![0.0f64; config.hour_levels];
    for &(hour, effect) in &c.peak_hour_effects {
        hour_effects[usize::from(hour)] = effect;
    }
    let mut hour_cumulative = Vec::with_capacity(config.hour_levels);
    let mut running = 0.0f64;
    for hour in 0..config.hour_levels {
        let is_peak = c.peak_hour_effects.iter().any(|(h, _)| usize::from(*h) == hour);
        let is_shoulder = c.shoulder_hours.iter().any(|h| usize::from(*h) == hour);
        running += if is_peak {
            3.0
        } else if is_shoulder {
            2.0
        } else {
            1.0
        };
        hour_cumulative.push(running);
    }

    let anchors = config.anchor_profile_indices();
    let mut profile_effects = BTreeMap::new();
    let mut anchor_profiles = Vec::with_capacity(anchors.len() * 2);
    for (positive, negative) in &anchors {
        profile_effects.insert(*positive, c.anchor_profile_effect);
        profile_effects.insert(*negative, -c.anchor_profile_effect);
        anchor_profiles.push(*positive);
        anchor_profiles.push(*negative);
    }
    let mut profile_cumulative = Vec::with_capacity(config.profile_levels);
    let mut running = 0.0f64;
    for idx in 0..config.profile_levels {
        running += (idx as f64 + 1.0).powf(-0.8);
        profile_cumulative.push(running);
    }

    Ok(World {
        airports,
        airport_effects,
        routes,
        date_labels,
        date_effects,
        date_peak,
        hour_cumulative,
        hour_effects,
        profile_cumulative,
        profile_effects,
        anchor_profiles,
    })
}

fn draw_cumulative<R: Rng>(cumulative: &[f64], rng: &mut R) -> usize {
    let total = *cumulative.last().expect("nonempty cumulative weights");
    let target = rng.gen::<f64>() * total;
    match cumulative.binary_search_by(|w| w.partial_cmp(&target).expect("finite weights")) {
        Ok(i) => (i + 1).min(cumulative.len() - 1),
        Err(i) => i.min(cumulative.len() - 1),
    }
}

/// The terms whose weighted sum (plus controls and noise) is log fare.
fn truth_terms(effects: &TrueEffects) -> Vec<(InterestVar, f64)> {
    let mut terms = vec![
        (InterestVar::Adv, effects.adv),
        (InterestVar::LnDist, effects.ln_dist),
        (InterestVar::Bsn, effects.bsn),
        (InterestVar::LnFlightTime, effects.ln_flight_time),
        (InterestVar::LnShipment, effects.ln_shipment),
        (InterestVar::LnRevPax, effects.ln_revpax),
        (InterestVar::LnLoadFactor, effects.ln_load_factor),
        (InterestVar::LnFuelPrice, effects.ln_fuel_price),
        (InterestVar::Hub, effects.hub),
        (InterestVar::LnSeatShare, effects.ln_seat_share),
        (InterestVar::LnRhhi, effects.ln_rhhi),
        (InterestVar::LastRow, effects.last_row),
        (InterestVar::EmergencyExit, effects.emergency_exit),
        (InterestVar::Comfort, effects.comfort),
        (InterestVar::ComfortPlacebo, effects.comfort_placebo),
    ];
    match effects.middle {
        MiddleTruth::Uniform(b) => terms.push((InterestVar::Middle, b)),
        MiddleTruth::ByBucket(buckets) => {
            use crate::design::AdvBucket::*;
            for bucket in [Week1, Week2, Week3, Beyond3] {
                terms.push((InterestVar::MiddleByBucket(bucket), buckets.for_bucket(bucket)));
            }
        }
    }
    match effects.density {
        DensityTruth::RowDensity(b) => terms.push((InterestVar::LnRowDensity, b)),
        DensityTruth::Pitch(b) => terms.push((InterestVar::LnPitch, b)),
    }
    terms
}

/// A generated dataset with its ground truth.
#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub records: Vec<ObservationRecord>,
    /// Every true effect entering log fare, by display name.
    pub truth: Vec<(String, f64)>,
    /// Control levels with nonzero true effects, as `block=label` strings.
    pub active_controls: Vec<String>,
}

/// Generate one dataset. Identical configurations produce identical data.
pub fn generate(config: &DgpConfig) -> Result<GeneratedDataset> {
    config.validate()?;
    let catalog = FleetCatalog::build(&config.fleet)?;
    let world = build_world(config)?;
    let terms = truth_terms(&config.effects);
    let m = &config.market;

    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(config.seed ^ TICKET_STREAM));
    let normal = Normal::new(0.0, 1.0).map_err(|e| Error::computation(e.to_string()))?;

    let mut records = Vec::with_capacity(config.sample_size);
    for _ in 0..config.sample_size {
        let route_idx = rng.gen_range(0..world.routes.len());
        let route = &world.routes[route_idx];
        let date_idx = rng.gen_range(0..config.date_levels);
        let hour = draw_cumulative(&world.hour_cumulative, &mut rng);

        // Flight-level draws come from a stream keyed by (route, date, hour),
        // so every ticket on the same flight shares them.
        let mut flight_seed = splitmix64(config.seed ^ FLIGHT_STREAM);
        flight_seed = splitmix64(flight_seed ^ route_idx as u64);
        flight_seed = splitmix64(flight_seed ^ date_idx as u64);
        flight_seed = splitmix64(flight_seed ^ hour as u64);
        let mut flight_rng = ChaCha8Rng::seed_from_u64(flight_seed);

        let family = &FAMILIES[route.family];
        let rows = flight_rng.gen_range(family.rows.clone());
        let equipped = catalog.has_equipped(route.family, rows)
            && flight_rng.gen_bool(config.fleet.equipped_share);
        let variant = catalog.variant(route.family, rows, equipped);
        debug_assert_eq!(variant.rows, rows);
        debug_assert_eq!(variant.equipped, equipped);
        let load_factor = logistic(
            route.lf_logit_base + m.lf_logit_flight_sd * normal.sample(&mut flight_rng),
        );
        let demand = (m.demand_ln_sd * normal.sample(&mut flight_rng)).exp();
        let boarding = (load_factor * demand).clamp(0.02, 0.995);
        let revpax = Binomial::new(u64::from(variant.seat_count), boarding)
            .map_err(|e| Error::computation(e.to_string()))?
            .sample(&mut flight_rng)
            .max(1) as f64;
        let rhhi = logistic(
            route.rhhi_logit_base + m.rhhi_daily_sd * normal.sample(&mut flight_rng),
        );

        // Buyer draws.
        let profile_idx = if !world.anchor_profiles.is_empty()
            && rng.gen::<f64>() < config.controls.anchor_profile_share
        {
            world.anchor_profiles[rng.gen_range(0..world.anchor_profiles.len())]
        } else {
            draw_cumulative(&world.profile_cumulative, &mut rng)
        };
        let income_tier = (profile_idx % 10) as f64;
        let trips_tier = ((profile_idx / 10) % 10) as f64;
        let is_peak_hour = config
            .controls
            .peak_hour_effects
            .iter()
            .any(|(h, _)| usize::from(*h) == hour);
        let is_shoulder_hour =
            config.controls.shoulder_hours.iter().any(|h| usize::from(*h) == hour);
        let business_logit = m.business_base_logit
            + m.business_income_slope * (income_tier - 4.5)
            + m.business_trips_slope * (trips_tier - 4.5)
            + if is_peak_hour { m.business_peak_bump } else { 0.0 }
            + if is_shoulder_hour { m.business_shoulder_bump } else { 0.0 };
        let business = rng.gen_bool(logistic(business_logit));

        let (mean, cap) = if business {
            (m.adv_business_mean, m.adv_business_cap)
        } else {
            (m.adv_leisure_mean, m.adv_leisure_cap)
        };
        let mean = if world.date_peak[date_idx] {
            mean * (1.0 - config.controls.peak_adv_shrink)
        } else {
            mean
        };
        let exp = Exp::new(1.0 / mean).map_err(|e| Error::computation(e.to_string()))?;
        let advance_days = (exp.sample(&mut rng).floor() as u32).min(cap);

        let seat = variant.draw_seat(&mut rng);

        let mut record = ObservationRecord {
            fare: 1.0,
            advance_days: f64::from(advance_days),
            distance_km: route.dist_km,
            business,
            flight_time_hours: route.flight_time_hours,
            shipment_kg: route.shipment_kg,
            revpax,
            load_factor,
            fuel_price: route.fuel_price,
            hub: route.hub,
            seat_share: route.seat_share,
            rhhi,
            middle: seat.flags.is_middle,
            last_row: seat.flags.is_last_row,
            emergency_exit: seat.flags.is_emergency_exit,
            comfort: seat.flags.is_comfort,
            comfort_placebo: seat.placebo,
            row_density_index: Some(variant.row_density),
            pitch_index: Some(variant.pitch),
            departure_date: world.date_labels[date_idx].clone(),
            departure_hour: hour as u8,
            origin: world.airports[route.origin].clone(),
            destination: world.airports[route.destination].clone(),
            profile: format!("p{:04}", profile_idx + 1),
            route: route.label.clone(),
        };

        let mut ln_fare = config.effects.intercept;
        for &(var, beta) in &terms {
            if beta != 0.0 {
                ln_fare += beta * interest_value::<f64>(&record, var)?;
            }
        }
        ln_fare += world.date_effects[date_idx];
        ln_fare += world.hour_effects[hour];
        ln_fare += world.airport_effects[route.origin];
        ln_fare += world.airport_effects[route.destination];
        ln_fare += world.profile_effects.get(&profile_idx).copied().unwrap_or(0.0);
        ln_fare += route.cluster_effect;
        ln_fare += config.noise_sd * normal.sample(&mut rng);
        record.fare = ln_fare.exp();
        records.push(record);
    }

    let truth = terms.iter().map(|&(var, beta)| (var.name(), beta)).collect();
    let mut active_controls = Vec::new();
    for (idx, &peak) in world.date_peak.iter().enumerate() {
        if peak && world.date_effects[idx] != 0.0 {
            active_controls.push(format!("date={}", world.date_labels[idx]));
        }
    }
    for (hour, &effect) in world.hour_effects.iter().enumerate() {
        if effect != 0.0 {
            active_controls.push(format!("hour={hour:02}"));
        }
    }
    for (idx, &effect) in world.airport_effects.iter().enumerate() {
        if effect != 0.0 {
            active_controls.push(format!("airport={}", world.airports[idx]));
        }
    }
    for (&idx, &effect) in &world.profile_effects {
        if effect != 0.0 {
            active_controls.push(format!("profile=p{:04}", idx + 1));
        }
    }

    Ok(GeneratedDataset { records, truth, active_controls })
}
