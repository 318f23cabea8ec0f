//! Configuration for the synthetic ticket generator.
//!
//! Every distributional choice the generator makes is a field here with a
//! documented default, so experiments can tighten or remove any channel
//! (confounding, cluster effects, fleet mix) without touching generator code.
//! Defaults are calibrated so that estimating the matching specification on a
//! default dataset produces fare elasticities, selection behavior, and fit
//! statistics of realistic magnitude for a short-haul airline market.

use serde::{Deserialize, Serialize};

use crate::design::{AdvBucket, EstimationSpec, InterestVar, SpecId};
use crate::error::{Error, Result};

/// True middle-seat discount structure on log fare.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MiddleTruth {
    /// One effect shared by every middle seat.
    Uniform(f64),
    /// Effects that differ by advance-purchase bucket.
    ByBucket(BucketEffects),
}

/// Per-bucket middle-seat effects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BucketEffects {
    pub week1: f64,
    pub week2: f64,
    pub week3: f64,
    pub beyond3: f64,
}

impl BucketEffects {
    pub fn for_bucket(&self, bucket: AdvBucket) -> f64 {
        match bucket {
            AdvBucket::Week1 => self.week1,
            AdvBucket::Week2 => self.week2,
            AdvBucket::Week3 => self.week3,
            AdvBucket::Beyond3 => self.beyond3,
        }
    }

    fn values(&self) -> [f64; 4] {
        [self.week1, self.week2, self.week3, self.beyond3]
    }
}

/// Which cabin-density variable carries the true density effect.
///
/// The synthetic fleet keeps mean pitch times row count constant within each
/// aircraft family, making the log pitch index an exact affine function of
/// the log row-density index. Either parametrization therefore induces the
/// same fare distribution, with the coefficient sign flipped and the constant
/// absorbed into the intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DensityTruth {
    /// Effect of the log row-density index.
    RowDensity(f64),
    /// Effect of the log pitch index.
    Pitch(f64),
}

impl DensityTruth {
    /// The implied coefficient on the log row-density index.
    pub fn row_density_equivalent(&self) -> f64 {
        match *self {
            DensityTruth::RowDensity(b) => b,
            DensityTruth::Pitch(b) => -b,
        }
    }

    /// The implied coefficient on the log pitch index.
    pub fn pitch_equivalent(&self) -> f64 {
        match *self {
            DensityTruth::RowDensity(b) => -b,
            DensityTruth::Pitch(b) => b,
        }
    }
}

/// True coefficients on log fare for every interest variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrueEffects {
    pub intercept: f64,
    /// Per raw day of advance purchase.
    pub adv: f64,
    pub ln_dist: f64,
    pub bsn: f64,
    pub ln_flight_time: f64,
    pub ln_shipment: f64,
    pub ln_revpax: f64,
    pub ln_load_factor: f64,
    pub ln_fuel_price: f64,
    pub hub: f64,
    pub ln_seat_share: f64,
    pub ln_rhhi: f64,
    pub last_row: f64,
    pub emergency_exit: f64,
    pub comfort: f64,
    /// Placebo seats carry no true effect by default.
    pub comfort_placebo: f64,
    pub middle: MiddleTruth,
    pub density: DensityTruth,
}

impl Default for TrueEffects {
    fn default() -> Self {
        TrueEffects {
            intercept: 6.7,
            adv: -0.0033,
            ln_dist: 0.2385,
            bsn: 0.3912,
            ln_flight_time: 0.4824,
            ln_shipment: 0.0376,
            ln_revpax: -0.1698,
            ln_load_factor: 0.1632,
            ln_fuel_price: 0.7424,
            hub: 0.5306,
            ln_seat_share: 0.0668,
            ln_rhhi: 0.1490,
            last_row: 0.0322,
            emergency_exit: 0.0306,
            comfort: 0.6669,
            comfort_placebo: 0.0,
            middle: MiddleTruth::ByBucket(BucketEffects {
                week1: 0.2949,
                week2: 0.1018,
                week3: -0.0232,
                beyond3: -0.0358,
            }),
            density: DensityTruth::RowDensity(-0.6872),
        }
    }
}

impl TrueEffects {
    /// Alternative calibration used when the bucketed-middle specification is
    /// the estimation target; shifts every shared coefficient slightly and
    /// steepens the density effect.
    pub fn bucketed_calibration() -> Self {
        TrueEffects {
            intercept: 6.7,
            adv: -0.0029,
            ln_dist: 0.2390,
            bsn: 0.3827,
            ln_flight_time: 0.4776,
            ln_shipment: 0.0382,
            ln_revpax: -0.1694,
            ln_load_factor: 0.1575,
            ln_fuel_price: 0.7554,
            hub: 0.5363,
            ln_seat_share: 0.0674,
            ln_rhhi: 0.1477,
            last_row: 0.0370,
            emergency_exit: 0.0268,
            comfort: 0.6602,
            comfort_placebo: 0.0,
            middle: MiddleTruth::ByBucket(BucketEffects {
                week1: 0.2949,
                week2: 0.1018,
                week3: -0.0232,
                beyond3: -0.0358,
            }),
            density: DensityTruth::RowDensity(-0.7293),
        }
    }

    fn all_finite(&self) -> bool {
        let mut values = vec![
            self.intercept,
            self.adv,
            self.ln_dist,
            self.bsn,
            self.ln_flight_time,
            self.ln_shipment,
            self.ln_revpax,
            self.ln_load_factor,
            self.ln_fuel_price,
            self.hub,
            self.ln_seat_share,
            self.ln_rhhi,
            self.last_row,
            self.emergency_exit,
            self.comfort,
            self.comfort_placebo,
            self.density.row_density_equivalent(),
        ];
        match self.middle {
            MiddleTruth::Uniform(b) => values.push(b),
            MiddleTruth::ByBucket(b) => values.extend(b.values()),
        }
        values.iter().all(|v| v.is_finite())
    }

    fn middle_is_active(&self) -> bool {
        match self.middle {
            MiddleTruth::Uniform(b) => b != 0.0,
            MiddleTruth::ByBucket(b) => b.values().iter().any(|v| *v != 0.0),
        }
    }
}

/// Sparse true control effects: which date, hour, airport, and profile
/// levels move log fare, and how the advance-purchase distribution shifts on
/// peak dates (the confounding channel the selection step must absorb).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlEffects {
    /// Every `stride`-th departure date is a peak date.
    pub peak_date_stride: usize,
    /// Additive log-fare effect on peak dates.
    pub peak_date_effect: f64,
    /// Fractional cut of the mean advance purchase on peak dates; this is
    /// what makes omitted date controls bias the ADV coefficient.
    pub peak_adv_shrink: f64,
    /// Departure hours with a log-fare effect.
    pub peak_hour_effects: Vec<(u8, f64)>,
    /// Hours drawn more often than baseline but without a fare effect.
    pub shoulder_hours: Vec<u8>,
    /// Number of profile pairs with large opposite effects. Members of a
    /// pair share income, trip-frequency, and type attributes, so profile
    /// effects stay orthogonal to the business propensity by construction.
    pub anchor_profile_pairs: usize,
    /// Absolute log-fare effect of each anchor profile.
    pub anchor_profile_effect: f64,
    /// Share of tickets drawn from the anchor profiles.
    pub anchor_profile_share: f64,
    /// Number of non-hub airports with a log-fare effect.
    pub airport_effect_count: usize,
    /// Absolute effect of each such airport, alternating sign.
    pub airport_effect_size: f64,
}

impl Default for ControlEffects {
    fn default() -> Self {
        ControlEffects {
            peak_date_stride: 10,
            peak_date_effect: 1.0,
            peak_adv_shrink: 0.55,
            peak_hour_effects: vec![(8, 0.45), (18, 0.50)],
            shoulder_hours: vec![7, 9, 17, 19],
            anchor_profile_pairs: 8,
            anchor_profile_effect: 0.55,
            anchor_profile_share: 0.28,
            airport_effect_count: 6,
            airport_effect_size: 0.45,
        }
    }
}

/// Shapes of the market-level covariate distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MarketShape {
    /// Airports counted as hubs (the first ones in code order).
    pub hub_airports: usize,
    /// Log-distance location, slope on the latent route-size factor, and
    /// residual spread. The size factor also lifts seat share and load
    /// factor so that route covariates are positively dependent.
    pub dist_ln_mid: f64,
    pub dist_ln_size_slope: f64,
    pub dist_ln_noise: f64,
    /// Flight time is distance over cruise speed plus overhead, times a
    /// lognormal route factor.
    pub cruise_speed_kmh: f64,
    pub flight_time_overhead_hours: f64,
    pub flight_time_ln_sd: f64,
    pub shipment_ln_mean: f64,
    pub shipment_ln_sd: f64,
    pub fuel_ln_mean: f64,
    pub fuel_ln_sd: f64,
    pub seat_share_logit_mean: f64,
    pub seat_share_logit_sd: f64,
    pub seat_share_size_slope: f64,
    pub rhhi_logit_mean: f64,
    pub rhhi_route_sd: f64,
    pub rhhi_daily_sd: f64,
    pub lf_logit_mean: f64,
    pub lf_logit_route_sd: f64,
    pub lf_logit_flight_sd: f64,
    /// Lognormal day-to-day demand spread that separates realized revenue
    /// passengers from the published route load factor.
    pub demand_ln_sd: f64,
    pub business_base_logit: f64,
    pub business_income_slope: f64,
    pub business_trips_slope: f64,
    pub business_peak_bump: f64,
    pub business_shoulder_bump: f64,
    /// Mean advance-purchase days by traveler type, with hard caps.
    pub adv_business_mean: f64,
    pub adv_leisure_mean: f64,
    pub adv_business_cap: u32,
    pub adv_leisure_cap: u32,
}

impl Default for MarketShape {
    fn default() -> Self {
        MarketShape {
            hub_airports: 8,
            dist_ln_mid: 6.8,
            dist_ln_size_slope: 0.55,
            dist_ln_noise: 0.25,
            cruise_speed_kmh: 700.0,
            flight_time_overhead_hours: 0.4,
            flight_time_ln_sd: 0.18,
            shipment_ln_mean: 8.8,
            shipment_ln_sd: 1.2,
            fuel_ln_mean: 1.06,
            fuel_ln_sd: 0.15,
            seat_share_logit_mean: 0.4,
            seat_share_logit_sd: 1.4,
            seat_share_size_slope: 0.3,
            rhhi_logit_mean: -0.5,
            rhhi_route_sd: 0.7,
            rhhi_daily_sd: 0.35,
            lf_logit_mean: 1.1,
            lf_logit_route_sd: 0.4,
            lf_logit_flight_sd: 0.3,
            demand_ln_sd: 0.25,
            business_base_logit: -1.45,
            business_income_slope: 0.16,
            business_trips_slope: 0.10,
            business_peak_bump: 0.9,
            business_shoulder_bump: 0.45,
            adv_business_mean: 6.0,
            adv_leisure_mean: 24.0,
            adv_business_cap: 60,
            adv_leisure_cap: 90,
        }
    }
}

/// Fleet composition and seat-draw behavior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FleetShape {
    /// Carrier code stamped on every synthetic layout.
    pub carrier: String,
    /// Routes shorter than this fly the regional 2-2 family.
    pub short_haul_km: f64,
    /// Routes shorter than this (but not short-haul) fly the smaller 3-3
    /// family; longer routes fly the larger one.
    pub medium_haul_km: f64,
    /// Probability that a narrowbody flight uses the extra-pitch variant,
    /// where one exists for its row count.
    pub equipped_share: f64,
    /// Seat-draw weights by position class.
    pub window_weight: f64,
    pub middle_weight: f64,
    pub aisle_weight: f64,
    /// Multiplier on the weight of extra-pitch seats.
    pub comfort_weight_factor: f64,
}

impl Default for FleetShape {
    fn default() -> Self {
        FleetShape {
            carrier: "SYN".to_string(),
            short_haul_km: 700.0,
            medium_haul_km: 1600.0,
            equipped_share: 0.5,
            window_weight: 1.0,
            middle_weight: 0.55,
            aisle_weight: 1.3,
            comfort_weight_factor: 0.5,
        }
    }
}

/// Full generator configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DgpConfig {
    pub sample_size: usize,
    pub route_count: usize,
    pub airport_count: usize,
    pub date_levels: usize,
    pub hour_levels: usize,
    pub profile_levels: usize,
    pub effects: TrueEffects,
    pub controls: ControlEffects,
    pub market: MarketShape,
    pub fleet: FleetShape,
    /// Standard deviation of the additive per-route effect on log fare.
    pub cluster_sd: f64,
    /// Standard deviation of the idiosyncratic log-fare noise.
    pub noise_sd: f64,
    pub seed: u64,
}

impl Default for DgpConfig {
    fn default() -> Self {
        DgpConfig {
            sample_size: 15_517,
            route_count: 333,
            airport_count: 55,
            date_levels: 130,
            hour_levels: 24,
            profile_levels: 1761,
            effects: TrueEffects::default(),
            controls: ControlEffects::default(),
            market: MarketShape::default(),
            fleet: FleetShape::default(),
            cluster_sd: 0.25,
            noise_sd: 0.60,
            seed: 20_190_314,
        }
    }
}

/// Longest representable departure-date range (these many consecutive days
/// starting March 1st fit the generator's fixed calendar).
pub const MAX_DATE_LEVELS: usize = 184;

/// Offset between the members of an anchor-profile pair. It is a multiple of
/// every attribute modulus, so paired profiles share income tier, trip tier,
/// and traveler type while their effects cancel.
pub(crate) const ANCHOR_PAIR_OFFSET: usize = 200;

/// First anchor base index and spacing between anchor bases.
pub(crate) const ANCHOR_BASE_START: usize = 37;
pub(crate) const ANCHOR_BASE_STEP: usize = 97;

impl DgpConfig {
    /// The configuration whose truth matches the interest set of `spec`, so
    /// that a recovery experiment estimates a correctly specified model.
    ///
    /// The uniform-middle specification (5) gets a uniform middle effect, the
    /// bucketed specification (6) the bucketed calibration, and the pitch
    /// specification (8) the same truth expressed through the pitch index.
    /// Other specifications share the default truth.
    pub fn for_specification(spec: SpecId) -> Self {
        let mut config = DgpConfig::default();
        match spec {
            SpecId::S5 => {
                config.effects.middle = MiddleTruth::Uniform(0.0649);
            }
            SpecId::S6 => {
                config.effects = TrueEffects::bucketed_calibration();
            }
            SpecId::S8 => {
                config.effects.density = DensityTruth::Pitch(1.0998);
            }
            _ => {}
        }
        config
    }

    /// A deliberately confounded miniature: one peak date drives both log
    /// fare and the advance-purchase distribution, and nothing else moves
    /// fares. Omitting the date control biases the ADV coefficient; the
    /// selection step absorbs it.
    pub fn single_confounder(seed: u64) -> Self {
        let mut config = DgpConfig {
            sample_size: 1_500,
            route_count: 40,
            airport_count: 12,
            date_levels: 2,
            hour_levels: 2,
            profile_levels: 4,
            cluster_sd: 0.10,
            noise_sd: 0.50,
            seed,
            ..DgpConfig::default()
        };
        config.effects = TrueEffects {
            intercept: 5.0,
            adv: -0.05,
            ln_dist: 0.0,
            bsn: 0.0,
            ln_flight_time: 0.0,
            ln_shipment: 0.0,
            ln_revpax: 0.0,
            ln_load_factor: 0.0,
            ln_fuel_price: 0.0,
            hub: 0.0,
            ln_seat_share: 0.0,
            ln_rhhi: 0.0,
            last_row: 0.0,
            emergency_exit: 0.0,
            comfort: 0.0,
            comfort_placebo: 0.0,
            middle: MiddleTruth::Uniform(0.0),
            density: DensityTruth::RowDensity(0.0),
        };
        config.controls = ControlEffects {
            peak_date_stride: 2,
            peak_date_effect: 0.8,
            peak_adv_shrink: 0.6,
            peak_hour_effects: vec![],
            shoulder_hours: vec![],
            anchor_profile_pairs: 0,
            anchor_profile_effect: 0.0,
            anchor_profile_share: 0.0,
            airport_effect_count: 0,
            airport_effect_size: 0.0,
        };
        config
    }

    /// Same dataset with a different seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The designated peak-date indices.
    pub fn peak_date_indices(&self) -> Vec<usize> {
        if self.controls.peak_date_stride == 0 {
            return Vec::new();
        }
        (0..self.date_levels)
            .filter(|idx| (idx + 1) % self.controls.peak_date_stride == 0)
            .collect()
    }

    /// The anchor-profile index pairs `(positive, negative)`.
    pub fn anchor_profile_indices(&self) -> Vec<(usize, usize)> {
        (0..self.controls.anchor_profile_pairs)
            .map(|k| {
                let base = ANCHOR_BASE_START + k * ANCHOR_BASE_STEP;
                (base, base + ANCHOR_PAIR_OFFSET)
            })
            .collect()
    }

    /// Check every invariant the generator relies on.
    pub fn validate(&self) -> Result<()> {
        if self.sample_size == 0 {
            return Err(Error::validation("sample size must be at least 1".to_string()));
        }
        if self.airport_count < 2 {
            return Err(Error::validation("need at least two airports".to_string()));
        }
        let max_routes = self.airport_count * (self.airport_count - 1);
        if self.route_count == 0 || self.route_count > max_routes {
            return Err(Error::validation(format!(
                "route count {} outside 1..={max_routes} for {} airports",
                self.route_count, self.airport_count
            )));
        }
        if self.date_levels < 2 || self.date_levels > MAX_DATE_LEVELS {
            return Err(Error::validation(format!(
                "date levels {} outside 2..={MAX_DATE_LEVELS}",
                self.date_levels
            )));
        }
        if self.hour_levels < 2 || self.hour_levels > 24 {
            return Err(Error::validation(format!(
                "hour levels {} outside 2..=24",
                self.hour_levels
            )));
        }
        if self.profile_levels < 2 {
            return Err(Error::validation("need at least two profiles".to_string()));
        }
        for (name, value) in [("cluster effect scale", self.cluster_sd), ("noise scale", self.noise_sd)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::validation(format!("{name} must be finite and nonnegative")));
            }
        }
        if !self.effects.all_finite() {
            return Err(Error::validation("true coefficients must be finite".to_string()));
        }
        if self.effects.middle_is_active() && self.fleet.middle_weight <= 0.0 {
            return Err(Error::validation(
                "middle-seat effect is nonzero but the middle-seat draw weight is zero".to_string(),
            ));
        }
        if self.fleet.window_weight <= 0.0
            || self.fleet.aisle_weight <= 0.0
            || self.fleet.middle_weight < 0.0
            || self.fleet.comfort_weight_factor <= 0.0
        {
            return Err(Error::validation("seat-draw weights must be positive".to_string()));
        }
        if !(0.0..=1.0).contains(&self.fleet.equipped_share) {
            return Err(Error::validation("equipped share must lie in [0, 1]".to_string()));
        }
        if self.fleet.short_haul_km <= 0.0 || self.fleet.medium_haul_km <= self.fleet.short_haul_km {
            return Err(Error::validation(
                "fleet distance splits must satisfy 0 < short < medium".to_string(),
            ));
        }
        let c = &self.controls;
        if c.peak_date_stride == 0 && c.peak_date_effect != 0.0 {
            return Err(Error::validation(
                "peak-date effect is nonzero but the stride is zero".to_string(),
            ));
        }
        if !(0.0..1.0).contains(&c.peak_adv_shrink) {
            return Err(Error::validation("peak ADV shrink must lie in [0, 1)".to_string()));
        }
        if !(0.0..1.0).contains(&c.anchor_profile_share) {
            return Err(Error::validation("anchor profile share must lie in [0, 1)".to_string()));
        }
        if c.anchor_profile_pairs > 0 {
            let last = ANCHOR_BASE_START
                + (c.anchor_profile_pairs - 1) * ANCHOR_BASE_STEP
                + ANCHOR_PAIR_OFFSET;
            if last >= self.profile_levels {
                return Err(Error::validation(format!(
                    "anchor profiles need at least {} profile levels, have {}",
                    last + 1,
                    self.profile_levels
                )));
            }
        }
        if self.market.hub_airports >= self.airport_count {
            return Err(Error::validation(
                "hub airports must leave at least one non-hub airport".to_string(),
            ));
        }
        if c.airport_effect_count > self.airport_count - self.market.hub_airports {
            return Err(Error::validation(
                "airport effects must fit among non-hub airports".to_string(),
            ));
        }
        for (hour, _) in &c.peak_hour_effects {
            if usize::from(*hour) >= self.hour_levels {
                return Err(Error::validation(format!(
                    "peak hour {hour} outside the configured 0..{} range",
                    self.hour_levels
                )));
            }
        }
        let m = &self.market;
        for (name, value) in [
            ("distance noise", m.dist_ln_noise),
            ("flight time spread", m.flight_time_ln_sd),
            ("shipment spread", m.shipment_ln_sd),
            ("fuel spread", m.fuel_ln_sd),
            ("seat share spread", m.seat_share_logit_sd),
            ("concentration route spread", m.rhhi_route_sd),
            ("concentration daily spread", m.rhhi_daily_sd),
            ("load factor route spread", m.lf_logit_route_sd),
            ("load factor flight spread", m.lf_logit_flight_sd),
            ("demand spread", m.demand_ln_sd),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::validation(format!("{name} must be finite and nonnegative")));
            }
        }
        if m.cruise_speed_kmh <= 0.0 {
            return Err(Error::validation("cruise speed must be positive".to_string()));
        }
        if m.adv_business_mean <= 0.0 || m.adv_leisure_mean <= 0.0 {
            return Err(Error::validation("advance-purchase means must be positive".to_string()));
        }
        Ok(())
    }

    /// True coefficient for each interest term of `spec`, in specification
    /// order. Errors when the truth is not expressible in that
    /// specification's terms (a bucketed middle truth cannot be summarized
    /// by one uniform middle coefficient).
    pub fn truth_for(&self, spec: SpecId) -> Result<Vec<(InterestVar, f64)>> {
        let estimation = EstimationSpec::for_id(spec);
        let e = &self.effects;
        estimation
            .interests
            .iter()
            .map(|&var| {
                let value = match var {
                    InterestVar::Adv => e.adv,
                    InterestVar::LnDist => e.ln_dist,
                    InterestVar::Bsn => e.bsn,
                    InterestVar::LnFlightTime => e.ln_flight_time,
                    InterestVar::LnShipment => e.ln_shipment,
                    InterestVar::LnRevPax => e.ln_revpax,
                    InterestVar::LnLoadFactor => e.ln_load_factor,
                    InterestVar::LnFuelPrice => e.ln_fuel_price,
                    InterestVar::Hub => e.hub,
                    InterestVar::LnSeatShare => e.ln_seat_share,
                    InterestVar::LnRhhi => e.ln_rhhi,
                    InterestVar::LastRow => e.last_row,
                    InterestVar::EmergencyExit => e.emergency_exit,
                    InterestVar::Comfort => e.comfort,
                    InterestVar::ComfortPlacebo => e.comfort_placebo,
                    InterestVar::LnRowDensity => e.density.row_density_equivalent(),
                    InterestVar::LnPitch => e.density.pitch_equivalent(),
                    InterestVar::Middle => match e.middle {
                        MiddleTruth::Uniform(b) => b,
                        MiddleTruth::ByBucket(_) => {
                            return Err(Error::validation(
                                "the middle truth varies by bucket; estimate with the \
                                 bucketed specification instead"
                                    .to_string(),
                            ))
                        }
                    },
                    InterestVar::MiddleByBucket(bucket) => match e.middle {
                        MiddleTruth::Uniform(b) => b,
                        MiddleTruth::ByBucket(buckets) => buckets.for_bucket(bucket),
                    },
                };
                Ok((var, value))
            })
            .collect()
    }
}
