//! Estimation specifications: which interest terms enter unpenalized and
//! which control blocks supply selection candidates.
//!
//! The eight standard specifications form a cumulative ladder. Booking terms
//! enter first, then route and market structure, then seat-level attributes;
//! the sixth splits the middle-seat premium by advance-purchase bucket and
//! adds a placebo; the seventh widens the candidate control set with airport
//! and buyer-profile indicators; the eighth measures cabin densification
//! through seat pitch instead of row count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpecId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
}

impl SpecId {
    pub const ALL: [SpecId; 8] =
        [Self::S1, Self::S2, Self::S3, Self::S4, Self::S5, Self::S6, Self::S7, Self::S8];

    pub fn number(self) -> u8 {
        match self {
            Self::S1 => 1,
            Self::S2 => 2,
            Self::S3 => 3,
            Self::S4 => 4,
            Self::S5 => 5,
            Self::S6 => 6,
            Self::S7 => 7,
            Self::S8 => 8,
        }
    }

    pub fn from_number(number: u8) -> Result<Self> {
        Self::ALL
            .get(number.wrapping_sub(1) as usize)
            .copied()
            .ok_or_else(|| Error::validation(format!("specification must be 1-8, got {number}")))
    }
}

impl std::fmt::Display for SpecId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Advance-purchase buckets splitting the middle-seat term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AdvBucket {
    /// 7 days or fewer before departure.
    Week1,
    /// 8-14 days.
    Week2,
    /// 15-21 days.
    Week3,
    /// More than 21 days.
    Beyond3,
}

impl AdvBucket {
    pub const ALL: [AdvBucket; 4] = [Self::Week1, Self::Week2, Self::Week3, Self::Beyond3];

    pub fn of_days(days: f64) -> Self {
        if days <= 7.0 {
            Self::Week1
        } else if days <= 14.0 {
            Self::Week2
        } else if days <= 21.0 {
            Self::Week3
        } else {
            Self::Beyond3
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Week1 => "week1",
            Self::Week2 => "week2",
            Self::Week3 => "week3",
            Self::Beyond3 => "beyond3",
        }
    }
}

/// An unpenalized interest term. Continuous inputs enter in natural logs
/// except the advance-purchase day count, which enters in raw days;
/// binary attributes enter as 0/1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterestVar {
    Adv,
    LnDist,
    LnRowDensity,
    Bsn,
    LnFlightTime,
    LnShipment,
    LnRevPax,
    LnLoadFactor,
    LnFuelPrice,
    Hub,
    LnSeatShare,
    LnRhhi,
    Middle,
    MiddleByBucket(AdvBucket),
    LastRow,
    EmergencyExit,
    Comfort,
    ComfortPlacebo,
    LnPitch,
}

impl InterestVar {
    pub fn name(self) -> String {
        match self {
            Self::Adv => "ADV".to_string(),
            Self::LnDist => "ln(DIST)".to_string(),
            Self::LnRowDensity => "ln(IROWDENS)".to_string(),
            Self::Bsn => "BSN".to_string(),
            Self::LnFlightTime => "ln(FLTIME)".to_string(),
            Self::LnShipment => "ln(SHIPMENT)".to_string(),
            Self::LnRevPax => "ln(REVPAX)".to_string(),
            Self::LnLoadFactor => "ln(LF)".to_string(),
            Self::LnFuelPrice => "ln(FUELP)".to_string(),
            Self::Hub => "HUB".to_string(),
            Self::LnSeatShare => "ln(SEATSH)".to_string(),
            Self::LnRhhi => "ln(RHHI)".to_string(),
            Self::Middle => "MIDDLE".to_string(),
            Self::MiddleByBucket(bucket) => format!("MIDDLE:{}", bucket.label()),
            Self::LastRow => "LASTROW".to_string(),
            Self::EmergencyExit => "EMERGEXIT".to_string(),
            Self::Comfort => "COMFORT".to_string(),
            Self::ComfortPlacebo => "COMFORT_PLACEBO".to_string(),
            Self::LnPitch => "ln(IPITCH)".to_string(),
        }
    }
}

/// A block of categorical selection candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ControlBlock {
    Date,
    Hour,
    Airport,
    Profile,
}

impl ControlBlock {
    pub fn name(self) -> &'static str {
        match self {
            Self::Date => "date",
            Self::Hour => "hour",
            Self::Airport => "airport",
            Self::Profile => "profile",
        }
    }

    /// Contract ceiling on observed levels, base included.
    pub fn level_cap(self) -> usize {
        match self {
            Self::Date => 130,
            Self::Hour => 24,
            Self::Airport => 55,
            Self::Profile => 1761,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationSpec {
    pub spec_id: SpecId,
    pub interests: Vec<InterestVar>,
    pub control_blocks: Vec<ControlBlock>,
    /// Which record field clusters the standard errors.
    pub cluster_key: ClusterKey,
}

/// Cluster key for the sandwich variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClusterKey {
    Route,
    /// Each observation its own cluster (heteroskedasticity-robust only).
    Observation,
}

impl ClusterKey {
    pub fn name(self) -> &'static str {
        match self {
            Self::Route => "route",
            Self::Observation => "observation",
        }
    }
}

impl EstimationSpec {
    /// The standard cumulative ladder.
    pub fn for_id(spec_id: SpecId) -> Self {
        use InterestVar::*;
        let mut interests = vec![Adv, LnDist];
        let n = spec_id.number();
        if n >= 2 {
            interests.push(Bsn);
        }
        if n >= 3 {
            interests.extend([LnFlightTime, LnShipment, LnRevPax, LnLoadFactor, LnFuelPrice, Hub]);
        }
        if n >= 4 {
            interests.extend([LnSeatShare, LnRhhi]);
        }
        if n >= 5 {
            interests.extend([LastRow, EmergencyExit, Comfort]);
        }
        if n == 5 {
            interests.push(Middle);
        }
        if n >= 6 {
            interests.extend(AdvBucket::ALL.map(MiddleByBucket));
            interests.push(ComfortPlacebo);
        }
        // The densification index closes the list: row count for 1-7,
        // pitch for 8.
        interests.push(if n == 8 { LnPitch } else { LnRowDensity });

        let mut control_blocks = vec![ControlBlock::Date, ControlBlock::Hour];
        if n >= 7 {
            control_blocks.extend([ControlBlock::Airport, ControlBlock::Profile]);
        }
        EstimationSpec { spec_id, interests, control_blocks, cluster_key: ClusterKey::Route }
    }

    pub fn interest_names(&self) -> Vec<String> {
        self.interests.iter().map(|v| v.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_sizes_are_cumulative() {
        let sizes: Vec<usize> =
            SpecId::ALL.iter().map(|&id| EstimationSpec::for_id(id).interests.len()).collect();
        // 1: ADV, ln(DIST), ln(IROWDENS)
        // 2: +BSN; 3: +6 route terms; 4: +2 market terms;
        // 5: +LASTROW, EMERGEXIT, COMFORT, MIDDLE;
        // 6: MIDDLE -> 4 buckets, +placebo; 7 and 8 unchanged.
        assert_eq!(sizes, vec![3, 4, 10, 12, 16, 20, 20, 20]);
    }

    #[test]
    fn bucket_boundaries() {
        assert_eq!(AdvBucket::of_days(0.0), AdvBucket::Week1);
        assert_eq!(AdvBucket::of_days(7.0), AdvBucket::Week1);
        assert_eq!(AdvBucket::of_days(8.0), AdvBucket::Week2);
        assert_eq!(AdvBucket::of_days(14.0), AdvBucket::Week2);
        assert_eq!(AdvBucket::of_days(15.0), AdvBucket::Week3);
        assert_eq!(AdvBucket::of_days(21.0), AdvBucket::Week3);
        assert_eq!(AdvBucket::of_days(22.0), AdvBucket::Beyond3);
        assert_eq!(AdvBucket::of_days(60.0), AdvBucket::Beyond3);
    }

    #[test]
    fn middle_enters_plain_only_in_the_fifth() {
        for &id in &SpecId::ALL {
            let spec = EstimationSpec::for_id(id);
            let has_plain = spec.interests.contains(&InterestVar::Middle);
            let has_buckets = spec
                .interests
                .iter()
                .any(|v| matches!(v, InterestVar::MiddleByBucket(_)));
            match id.number() {
                1..=4 => assert!(!has_plain && !has_buckets),
                5 => assert!(has_plain && !has_buckets),
                _ => assert!(!has_plain && has_buckets),
            }
        }
    }

    #[test]
    fn density_term_swaps_to_pitch_in_the_eighth() {
        for &id in &SpecId::ALL {
            let spec = EstimationSpec::for_id(id);
            let row = spec.interests.contains(&InterestVar::LnRowDensity);
            let pitch = spec.interests.contains(&InterestVar::LnPitch);
            if id == SpecId::S8 {
                assert!(!row && pitch);
            } else {
                assert!(row && !pitch);
            }
        }
    }

    #[test]
    fn wide_control_set_starts_at_the_seventh() {
        for &id in &SpecId::ALL {
            let spec = EstimationSpec::for_id(id);
            let wide = spec.control_blocks.contains(&ControlBlock::Airport);
            assert_eq!(wide, id.number() >= 7, "{id}");
            assert!(spec.control_blocks.contains(&ControlBlock::Date));
            assert!(spec.control_blocks.contains(&ControlBlock::Hour));
        }
    }

    #[test]
    fn spec_numbers_round_trip() {
        for &id in &SpecId::ALL {
            assert_eq!(SpecId::from_number(id.number()).unwrap(), id);
        }
        assert!(SpecId::from_number(0).is_err());
        assert!(SpecId::from_number(9).is_err());
    }

    #[test]
    fn names_are_stable() {
        assert_eq!(InterestVar::Adv.name(), "ADV");
        assert_eq!(InterestVar::LnDist.name(), "ln(DIST)");
        assert_eq!(InterestVar::MiddleByBucket(AdvBucket::Week2).name(), "MIDDLE:week2");
        assert_eq!(InterestVar::LnPitch.name(), "ln(IPITCH)");
    }
}
