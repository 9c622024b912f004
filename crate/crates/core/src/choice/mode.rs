//! Mode choice multinomial logit.
//!
//! Utility of mode `m` for a trip with road distance `d`:
//!
//! ```text
//! V_m = asc_m + b_dist_m * d + b_time * time_m / d + b_cost * cost_m / d
//!     + b_intra_m * intrazonal + person, purpose and day terms of m
//! ```
//!
//! Time and cost enter per kilometer with the same generic coefficient for
//! all modes. Pairs closer than 1 km count as intrazonal. Walking is the
//! reference alternative: its alternative-specific terms are zero unless the
//! table lists a row for it. Carsharing modes use the car-driver rows unless
//! the table carries their own.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;

use super::logit::Distribution;
use crate::categories::{AgeGroup, DayType, Employment, Mode, ModeSet, Purpose, Sex};
use crate::params::{employment_levels, index_rows, CoefficientRow, RowKey};
use crate::population::PersonAttributes;
use crate::world::{World, ZoneIdx};
use crate::{Error, Result};

/// Distances below this floor (km) are clamped before per-km division.
pub const MIN_DISTANCE_KM: f64 = 0.1;
/// Trips shorter than this (km) count as intrazonal.
pub const INTRAZONAL_KM: f64 = 1.0;

const REF_EMPLOYMENT: Employment = Employment::FullTime;
const REF_PURPOSE: Purpose = Purpose::Work;
const REF_AGE: AgeGroup = AgeGroup::Age36To50;
const REF_DAY: DayType = DayType::Workday;

const KNOWN: &[&str] = &[
    "asc",
    "time_per_km",
    "cost_per_km",
    "distance",
    "intrazonal",
    "transit_pass",
    "no_license",
    "female",
    "day",
    "employment",
    "purpose",
    "age",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeCoefficients {
    pub asc: f64,
    pub distance: f64,
    pub intrazonal: f64,
    pub transit_pass: f64,
    pub no_license: f64,
    pub female: f64,
    pub day: BTreeMap<DayType, f64>,
    pub employment: BTreeMap<Employment, f64>,
    pub purpose: BTreeMap<Purpose, f64>,
    pub age: BTreeMap<AgeGroup, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeChoiceParams {
    pub time_per_km: f64,
    pub cost_per_km: f64,
    alternatives: BTreeMap<Mode, ModeCoefficients>,
    rows: BTreeMap<RowKey, CoefficientRow>,
}

/// Per-trip inputs of the mode utility.
#[derive(Copy, Clone, Debug)]
pub struct ModeChoiceInput<'a> {
    pub person: &'a PersonAttributes,
    pub has_transit_pass: bool,
    pub purpose: Purpose,
    pub day: DayType,
}

impl ModeChoiceParams {
    pub fn from_rows(rows: &[CoefficientRow]) -> Result<ModeChoiceParams> {
        let index = index_rows(rows, KNOWN)?;
        let generic = |name: &str| {
            index
                .get(&(name.to_string(), "".to_string(), "".to_string()))
                .map(CoefficientRow::value)
                .ok_or_else(|| Error::MissingCoefficient {
                    model: "mode choice",
                    coefficient: name.into(),
                    category: "".into(),
                })
        };
        let time_per_km = generic("time_per_km")?;
        let cost_per_km = generic("cost_per_km")?;

        let mut alternatives: BTreeMap<Mode, ModeCoefficients> = BTreeMap::new();
        for row in index.values() {
            let scalar = |c: &mut ModeCoefficients, v| match row.coefficient.as_str() {
                "asc" => c.asc = v,
                "distance" => c.distance = v,
                "intrazonal" => c.intrazonal = v,
                "transit_pass" => c.transit_pass = v,
                "no_license" => c.no_license = v,
                "female" => c.female = v,
                _ => unreachable!(),
            };
            match row.coefficient.as_str() {
                "time_per_km" | "cost_per_km" => {}
                "asc" | "distance" | "intrazonal" | "transit_pass" | "no_license" | "female" => {
                    let mode: Mode = row.category.parse()?;
                    scalar(alternatives.entry(mode).or_default(), row.value());
                }
                level => {
                    let mode: Mode = row.subcategory.parse()?;
                    let c = alternatives.entry(mode).or_default();
                    let v = row.value();
                    match level {
                        "day" => {
                            c.day.insert(row.category.parse()?, v);
                        }
                        "employment" => {
                            for e in employment_levels(&row.category)? {
                                c.employment.insert(e, v);
                            }
                        }
                        "purpose" => {
                            c.purpose.insert(row.category.parse()?, v);
                        }
                        "age" => {
                            c.age.insert(row.category.parse()?, v);
                        }
                        _ => unreachable!(),
                    }
                }
            }
        }
        let params = ModeChoiceParams {
            time_per_km,
            cost_per_km,
            alternatives,
            rows: index,
        };
        params.check_complete()?;
        Ok(params)
    }

    /// Every non-walking base mode needs a row for every non-reference level.
    fn check_complete(&self) -> Result<()> {
        for mode in Mode::BASE.iter().copied().filter(|m| *m != Mode::Walking) {
            if !self.alternatives.contains_key(&mode) {
                return Err(self.missing("asc", mode.as_str()));
            }
            let c = &self.alternatives[&mode];
            for day in [DayType::Saturday, DayType::Sunday] {
                lookup(&c.day, day, REF_DAY, mode, "day")?;
            }
            for e in Employment::ALL {
                lookup(&c.employment, *e, REF_EMPLOYMENT, mode, "employment")?;
            }
            for p in Purpose::ALL {
                lookup(&c.purpose, *p, REF_PURPOSE, mode, "purpose")?;
            }
            for a in AgeGroup::ALL {
                lookup(&c.age, *a, REF_AGE, mode, "age")?;
            }
        }
        Ok(())
    }

    fn missing(&self, coefficient: &str, category: &str) -> Error {
        Error::MissingCoefficient {
            model: "mode choice",
            coefficient: coefficient.into(),
            category: category.into(),
        }
    }

    /// Raw table row, calibration column included.
    pub fn row(&self, coefficient: &str, category: &str, subcategory: &str) -> Option<&CoefficientRow> {
        self.rows
            .get(&(coefficient.into(), category.into(), subcategory.into()))
    }

    fn coefficients_for(&self, mode: Mode) -> Option<&ModeCoefficients> {
        self.alternatives.get(&mode).or(match mode {
            Mode::CarsharingStation | Mode::CarsharingFreefloat => self.alternatives.get(&Mode::CarDriver),
            _ => None,
        })
    }

    /// Utility of `mode` for the trip `origin -> destination`.
    pub fn utility(
        &self,
        mode: Mode,
        input: &ModeChoiceInput<'_>,
        world: &World,
        origin: ZoneIdx,
        destination: ZoneIdx,
    ) -> Result<f64> {
        let travel = world.travel(mode, origin, destination)?;
        let per_km = travel.distance.max(MIN_DISTANCE_KM);
        let mut v = self.time_per_km * travel.time / per_km + self.cost_per_km * travel.cost / per_km;

        let empty = ModeCoefficients::default();
        let c = match self.coefficients_for(mode) {
            Some(c) => c,
            None if mode == Mode::Walking => &empty,
            None => return Err(self.missing("asc", mode.as_str())),
        };
        // Walking misses most rows by construction; treat missing as zero.
        fn level<K: Ord + Copy + core::fmt::Display>(
            map: &BTreeMap<K, f64>,
            key: K,
            reference: K,
            mode: Mode,
            name: &str,
        ) -> Result<f64> {
            let v = lookup(map, key, reference, mode, name);
            if mode == Mode::Walking {
                Ok(v.unwrap_or(0.0))
            } else {
                v
            }
        }
        let intrazonal = origin == destination || travel.distance < INTRAZONAL_KM;
        let p = input.person;
        v += c.asc + c.distance * travel.distance;
        if intrazonal {
            v += c.intrazonal;
        }
        if input.has_transit_pass {
            v += c.transit_pass;
        }
        if !p.has_license {
            v += c.no_license;
        }
        if p.sex == Sex::Female {
            v += c.female;
        }
        v += level(&c.employment, p.employment, REF_EMPLOYMENT, mode, "employment")?;
        v += level(&c.age, p.age, REF_AGE, mode, "age")?;
        v += level(&c.purpose, input.purpose, REF_PURPOSE, mode, "purpose")?;
        v += level(&c.day, input.day, REF_DAY, mode, "day")?;
        Ok(v)
    }

    /// Logit distribution over `available`, in mode declaration order.
    pub fn probabilities(
        &self,
        available: ModeSet,
        input: &ModeChoiceInput<'_>,
        world: &World,
        origin: ZoneIdx,
        destination: ZoneIdx,
    ) -> Result<Distribution<Mode>> {
        if available.is_empty() {
            return Err(Error::Invalid("empty mode choice set".into()));
        }
        let modes: alloc::vec::Vec<Mode> = available.iter().collect();
        let utilities = modes
            .iter()
            .map(|&m| self.utility(m, input, world, origin, destination))
            .collect::<Result<alloc::vec::Vec<_>>>()?;
        Ok(Distribution::from_utilities(modes, &utilities, 1.0))
    }
}

fn lookup<K: Ord + Copy + core::fmt::Display>(
    map: &BTreeMap<K, f64>,
    key: K,
    reference: K,
    mode: Mode,
    name: &str,
) -> Result<f64> {
    match map.get(&key) {
        Some(v) => Ok(*v),
        None if key == reference => Ok(0.0),
        None => Err(Error::MissingCoefficient {
            model: "mode choice",
            coefficient: format!("{name}/{mode}"),
            category: key.to_string(),
        }),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use alloc::vec::Vec;

    /// Complete table with small round numbers; not estimated values.
    pub fn simple_rows() -> Vec<CoefficientRow> {
        let mut rows = alloc::vec![
            CoefficientRow::new("time_per_km", "", "", -0.03),
            CoefficientRow::new("cost_per_km", "", "", -0.4),
        ];
        for (k, mode) in [
            Mode::Cycling,
            Mode::PublicTransport,
            Mode::CarDriver,
            Mode::CarPassenger,
        ]
        .into_iter()
        .enumerate()
        {
            let m = mode.as_str();
            let f = k as f64 + 1.0;
            rows.push(CoefficientRow::new("asc", m, "", -0.5 * f));
            rows.push(CoefficientRow::new("distance", m, "", 0.1 * f));
            rows.push(CoefficientRow::new("intrazonal", m, "", -0.2 * f));
            rows.push(CoefficientRow::new(
                "transit_pass",
                m,
                "",
                if mode == Mode::PublicTransport { 2.0 } else { -0.3 },
            ));
            rows.push(CoefficientRow::new(
                "no_license",
                m,
                "",
                if mode == Mode::CarDriver { -4.0 } else { 0.0 },
            ));
            rows.push(CoefficientRow::new("female", m, "", 0.05 * f));
            for d in ["saturday", "sunday"] {
                rows.push(CoefficientRow::new("day", d, m, 0.01 * f));
            }
            for e in Employment::ALL.iter().filter(|e| **e != Employment::FullTime) {
                rows.push(CoefficientRow::new("employment", e.as_str(), m, 0.02 * f));
            }
            for p in Purpose::ALL.iter().filter(|p| **p != Purpose::Work) {
                rows.push(CoefficientRow::new("purpose", p.as_str(), m, -0.03 * f));
            }
            for a in AgeGroup::ALL.iter().filter(|a| **a != AgeGroup::Age36To50) {
                rows.push(CoefficientRow::new("age", a.as_str(), m, 0.04 * f));
            }
        }
        rows.push(CoefficientRow::new("day", "sunday", "walking", 0.0).calibrated(-0.3));
        rows
    }

    pub fn simple() -> ModeChoiceParams {
        ModeChoiceParams::from_rows(&simple_rows()).unwrap()
    }
}
