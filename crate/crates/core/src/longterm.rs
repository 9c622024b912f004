//! Long-term decisions fixed before the week is simulated: workplace and
//! school zones, household cars and transit passes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use rand::Rng;

use crate::categories::{CarAvailability, Employment, Sex};
use crate::params::{index_rows, CoefficientRow, RowKey};
use crate::population::{HouseholdId, PersonAttributes, PersonId, Population};
use crate::rng::{stream, Stream};
use crate::world::{CommutingKind, World, ZoneId, ZoneIdx};
use crate::{Error, Result};

/// Integer split of `total` proportional to `weights` (largest remainder).
///
/// Remainder ties go to the lower index. Returns all zeros for `total == 0`.
pub fn apportion(weights: &[f64], total: u32) -> Result<Vec<u32>> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Invalid(
            "apportion weights must be finite and non-negative".into(),
        ));
    }
    let sum: f64 = weights.iter().sum();
    if total == 0 {
        return Ok(alloc::vec![0; weights.len()]);
    }
    if !(sum > 0.0) {
        return Err(Error::Invalid("apportion weights sum to zero".into()));
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * f64::from(total)).collect();
    let mut counts: Vec<u32> = quotas.iter().map(|q| libm::floor(*q) as u32).collect();
    let assigned: u32 = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).filter(|&k| weights[k] > 0.0).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - f64::from(counts[a]);
        let rb = quotas[b] - f64::from(counts[b]);
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &k in order.iter().cycle().take(total.saturating_sub(assigned) as usize) {
        counts[k] += 1;
    }
    Ok(counts)
}

/// Pairs the k-th shortest reported commute with the k-th closest slot.
///
/// Persons are `(id, reported km)`, slots `(zone, km)`; both lists must have
/// the same length. Ties are broken by person id and zone index.
pub fn rank_match(persons: &[(PersonId, f64)], slots: &[(ZoneIdx, f64)]) -> Result<Vec<(PersonId, ZoneIdx)>> {
    if persons.len() != slots.len() {
        return Err(Error::Invalid(format!(
            "{} persons for {} slots",
            persons.len(),
            slots.len()
        )));
    }
    let mut persons = persons.to_vec();
    persons.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut slots = slots.to_vec();
    slots.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    Ok(persons.iter().zip(&slots).map(|(p, s)| (p.0, s.0)).collect())
}

/// Assigns a zone to every person whose program contains the purpose of
/// `kind`, by rank matching within each home zone.
pub fn assign_fixed_places(
    world: &World,
    population: &Population,
    kind: CommutingKind,
) -> Result<BTreeMap<PersonId, ZoneId>> {
    let purpose = kind.purpose();
    let mut by_home: BTreeMap<ZoneIdx, Vec<(PersonId, f64)>> = BTreeMap::new();
    for p in population.persons() {
        if p.program.contains(purpose) {
            let home = world.index_of(population.household_of(p).home_zone)?;
            by_home.entry(home).or_default().push((p.id, p.commute_km));
        }
    }
    let mut out = BTreeMap::new();
    if by_home.is_empty() {
        return Ok(out);
    }
    let matrix = world
        .commuting(kind)
        .ok_or_else(|| Error::Invalid(format!("no {} commuting matrix", kind.as_str())))?;
    for (home, persons) in by_home {
        let row = matrix.counts.row(home.0);
        if !row.iter().any(|&c| c > 0.0) {
            return Err(Error::EmptyCommutingRow {
                zone: world.id_of(home),
                persons: persons.len(),
                kind: kind.as_str(),
            });
        }
        let counts = apportion(row, persons.len() as u32)?;
        let slots: Vec<(ZoneIdx, f64)> = counts
            .iter()
            .enumerate()
            .flat_map(|(j, &c)| {
                let d = world.distance(home, ZoneIdx(j));
                core::iter::repeat_n((ZoneIdx(j), d), c as usize)
            })
            .collect();
        for (person, zone) in rank_match(&persons, &slots)? {
            out.insert(person, world.id_of(zone));
        }
    }
    Ok(out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CarEngine {
    Combustion,
    Electric,
}

impl CarEngine {
    pub fn as_str(self) -> &'static str {
        match self {
            CarEngine::Combustion => "combustion",
            CarEngine::Electric => "electric",
        }
    }
}

impl FromStr for CarEngine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combustion" => Ok(CarEngine::Combustion),
            "electric" => Ok(CarEngine::Electric),
            _ => Err(Error::UnknownCategory {
                kind: "car engine",
                value: s.into(),
            }),
        }
    }
}

pub const MIDSIZE: &str = "midsize";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Car {
    pub segment: String,
    pub engine: CarEngine,
}

/// `n_cars` midsize cars, each electric with probability `electric_share`.
pub fn assign_cars<R: Rng + ?Sized>(n_cars: u32, rng: &mut R, electric_share: f64) -> Result<Vec<Car>> {
    if !(0.0..=1.0).contains(&electric_share) {
        return Err(Error::Invalid(format!(
            "electric share {electric_share} outside [0, 1]"
        )));
    }
    Ok((0..n_cars)
        .map(|_| Car {
            segment: MIDSIZE.to_string(),
            engine: if rng.gen::<f64>() < electric_share {
                CarEngine::Electric
            } else {
                CarEngine::Combustion
            },
        })
        .collect())
}

const TRANSIT_KNOWN: &[&str] = &[
    "intercept",
    "female",
    "cars_per_household_size",
    "car_availability",
    "employment",
    "district",
];

/// Binary logit of transit pass ownership.
///
/// Every category a person can take needs a row; reference categories carry
/// an explicit zero row. Persons in zones without a district use the
/// reference district, which adds nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitPassModel {
    rows: BTreeMap<RowKey, CoefficientRow>,
    intercept: f64,
    female: f64,
    cars_per_size: f64,
    car_availability: BTreeMap<CarAvailability, f64>,
    employment: BTreeMap<Employment, f64>,
    district: BTreeMap<String, f64>,
}

impl TransitPassModel {
    pub fn from_rows(rows: &[CoefficientRow]) -> Result<Self> {
        let index = index_rows(rows, TRANSIT_KNOWN)?;
        let scalar = |name: &str| {
            index
                .get(&(name.to_string(), String::new(), String::new()))
                .map(CoefficientRow::value)
                .ok_or_else(|| missing(name, ""))
        };
        let mut model = TransitPassModel {
            intercept: scalar("intercept")?,
            female: scalar("female")?,
            cars_per_size: scalar("cars_per_household_size")?,
            car_availability: BTreeMap::new(),
            employment: BTreeMap::new(),
            district: BTreeMap::new(),
            rows: BTreeMap::new(),
        };
        for row in index.values() {
            match row.coefficient.as_str() {
                "car_availability" => {
                    model.car_availability.insert(row.category.parse()?, row.value());
                }
                "employment" => {
                    for e in crate::params::employment_levels(&row.category)? {
                        model.employment.insert(e, row.value());
                    }
                }
                "district" => {
                    model.district.insert(row.category.clone(), row.value());
                }
                _ => {}
            }
        }
        model.rows = index;
        Ok(model)
    }

    /// Raw table row, calibration column included.
    pub fn row(&self, coefficient: &str, category: &str) -> Option<&CoefficientRow> {
        self.rows.get(&(coefficient.into(), category.into(), String::new()))
    }

    pub fn linear_predictor(
        &self,
        person: &PersonAttributes,
        household_size: usize,
        n_cars: u32,
        district: Option<&str>,
    ) -> Result<f64> {
        if household_size == 0 {
            return Err(Error::Invalid("household without members".into()));
        }
        let mut u = self.intercept + self.cars_per_size * f64::from(n_cars) / household_size as f64;
        if person.sex == Sex::Female {
            u += self.female;
        }
        u += *self
            .car_availability
            .get(&person.car_availability)
            .ok_or_else(|| missing("car_availability", person.car_availability.as_str()))?;
        u += *self
            .employment
            .get(&person.employment)
            .ok_or_else(|| missing("employment", person.employment.as_str()))?;
        if let Some(d) = district {
            u += *self.district.get(d).ok_or_else(|| missing("district", d))?;
        }
        Ok(u)
    }

    pub fn probability(
        &self,
        person: &PersonAttributes,
        household_size: usize,
        n_cars: u32,
        district: Option<&str>,
    ) -> Result<f64> {
        Ok(sigmoid(self.linear_predictor(
            person,
            household_size,
            n_cars,
            district,
        )?))
    }
}

fn missing(coefficient: &str, category: &str) -> Error {
    Error::MissingCoefficient {
        model: "transit pass",
        coefficient: coefficient.into(),
        category: category.into(),
    }
}

pub fn sigmoid(u: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-u))
}

/// Bernoulli draw per person; each person has its own stream.
pub fn assign_transit_passes(
    world: &World,
    population: &Population,
    model: &TransitPassModel,
    seed: u64,
) -> Result<BTreeMap<PersonId, bool>> {
    population
        .persons()
        .iter()
        .map(|p| {
            let h = population.household_of(p);
            let district = world.zone(world.index_of(h.home_zone)?).district.as_deref();
            let prob = model.probability(&p.attributes, h.members.len(), h.n_cars, district)?;
            let mut rng = stream(seed, Stream::TransitPass, u64::from(p.id.0));
            Ok((p.id, rng.gen::<f64>() < prob))
        })
        .collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PersonAssignment {
    pub work_zone: Option<ZoneId>,
    pub school_zone: Option<ZoneId>,
    pub transit_pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LongTermAssignment {
    pub persons: BTreeMap<PersonId, PersonAssignment>,
    pub cars: BTreeMap<HouseholdId, Vec<Car>>,
}

impl LongTermAssignment {
    pub fn person(&self, id: PersonId) -> Option<&PersonAssignment> {
        self.persons.get(&id)
    }

    pub fn cars_of(&self, id: HouseholdId) -> &[Car] {
        self.cars.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks that fixed places match the programs of `population`.
    pub fn validate(&self, world: &World, population: &Population) -> Result<()> {
        for p in population.persons() {
            let a = self
                .persons
                .get(&p.id)
                .ok_or_else(|| Error::Invalid(format!("no long-term assignment for person {}", p.id)))?;
            for (zone, purpose) in [
                (a.work_zone, crate::categories::Purpose::Work),
                (a.school_zone, crate::categories::Purpose::Education),
            ] {
                if zone.is_some() != p.program.contains(purpose) {
                    return Err(Error::Invalid(format!(
                        "person {}: {} zone set iff the program has {} activities",
                        p.id, purpose, purpose
                    )));
                }
                if let Some(z) = zone {
                    world.index_of(z)?;
                }
            }
        }
        for h in population.households() {
            let n = self.cars_of(h.id).len();
            if n != h.n_cars as usize {
                return Err(Error::Invalid(format!(
                    "household {}: {} cars assigned, {} owned",
                    h.id, n, h.n_cars
                )));
            }
        }
        Ok(())
    }
}

/// Runs all long-term models.
pub fn assign_long_term(
    world: &World,
    population: &Population,
    model: &TransitPassModel,
    electric_share: f64,
    seed: u64,
) -> Result<LongTermAssignment> {
    let work = assign_fixed_places(world, population, CommutingKind::Work)?;
    let school = assign_fixed_places(world, population, CommutingKind::Education)?;
    let passes = assign_transit_passes(world, population, model, seed)?;
    let mut out = LongTermAssignment::default();
    for p in population.persons() {
        out.persons.insert(
            p.id,
            PersonAssignment {
                work_zone: work.get(&p.id).copied(),
                school_zone: school.get(&p.id).copied(),
                transit_pass: passes[&p.id],
            },
        );
    }
    for h in population.households() {
        let mut rng = stream(seed, Stream::Cars, u64::from(h.id.0));
        out.cars.insert(h.id, assign_cars(h.n_cars, &mut rng, electric_share)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::AgeGroup;
    use proptest::prelude::*;

    #[test]
    fn apportion_largest_remainder() {
        assert_eq!(apportion(&[1.0, 1.0, 1.0], 2).unwrap(), alloc::vec![1, 1, 0]);
        assert_eq!(apportion(&[0.2, 0.5, 0.3], 10).unwrap(), alloc::vec![2, 5, 3]);
        assert_eq!(apportion(&[0.0, 3.0], 4).unwrap(), alloc::vec![0, 4]);
        assert_eq!(apportion(&[0.0, 0.0], 0).unwrap(), alloc::vec![0, 0]);
        assert!(apportion(&[0.0, 0.0], 1).is_err());
    }

    #[test]
    fn rank_matching_pairs_in_order() {
        let persons = [(PersonId(1), 20.0), (PersonId(2), 1.0), (PersonId(3), 5.0)];
        let slots = [(ZoneIdx(7), 6.0), (ZoneIdx(8), 25.0), (ZoneIdx(9), 2.0)];
        let m = rank_match(&persons, &slots).unwrap();
        assert_eq!(
            m,
            alloc::vec![
                (PersonId(2), ZoneIdx(9)),
                (PersonId(3), ZoneIdx(7)),
                (PersonId(1), ZoneIdx(8))
            ]
        );
    }

    #[test]
    fn car_assignment() {
        let mut rng = stream(1, Stream::Cars, 0);
        assert!(assign_cars(0, &mut rng, 0.5).unwrap().is_empty());
        assert!(assign_cars(50, &mut rng, 0.0)
            .unwrap()
            .iter()
            .all(|c| c.engine == CarEngine::Combustion));
        let cars = assign_cars(1000, &mut rng, 0.3).unwrap();
        assert!(cars.iter().all(|c| c.segment == MIDSIZE));
        let share = cars.iter().filter(|c| c.engine == CarEngine::Electric).count() as f64 / 1000.0;
        assert!((share - 0.3).abs() < 0.05, "{share}");
        assert!(assign_cars(1, &mut rng, 1.5).is_err());
    }

    fn toy_rows() -> Vec<CoefficientRow> {
        alloc::vec![
            CoefficientRow::new("intercept", "", "", 1.0).calibrated(-0.5),
            CoefficientRow::new("female", "", "", 0.2),
            CoefficientRow::new("cars_per_household_size", "", "", -1.0),
            CoefficientRow::new("car_availability", "none", "", 0.0),
            CoefficientRow::new("employment", "fulltime", "", 0.0),
            CoefficientRow::new("employment", "student", "", 1.5),
            CoefficientRow::new("district", "A", "", 0.0),
            CoefficientRow::new("district", "B", "", -1.0),
        ]
    }

    fn person(sex: Sex, employment: Employment) -> PersonAttributes {
        PersonAttributes {
            sex,
            age: AgeGroup::Age36To50,
            employment,
            has_license: true,
            car_availability: CarAvailability::None,
        }
    }

    #[test]
    fn transit_pass_predictor() {
        let m = TransitPassModel::from_rows(&toy_rows()).unwrap();
        let u = m
            .linear_predictor(&person(Sex::Female, Employment::FullTime), 2, 1, Some("B"))
            .unwrap();
        assert!((u - (0.5 + 0.2 - 0.5 - 1.0)).abs() < 1e-15);
        assert_eq!(
            m.linear_predictor(&person(Sex::Male, Employment::StudentPrimary), 1, 0, None)
                .unwrap(),
            2.0
        );
        assert!(m
            .linear_predictor(&person(Sex::Male, Employment::Retired), 1, 0, None)
            .is_err());
        assert!(m
            .linear_predictor(&person(Sex::Male, Employment::FullTime), 1, 0, Some("C"))
            .is_err());
        assert!(m
            .linear_predictor(&person(Sex::Male, Employment::FullTime), 0, 0, None)
            .is_err());
    }

    proptest! {
        #[test]
        fn apportion_sums_exactly(weights in proptest::collection::vec(0.0f64..100.0, 1..12), total in 0u32..500) {
            prop_assume!(weights.iter().any(|&w| w > 0.0));
            let c = apportion(&weights, total).unwrap();
            prop_assert_eq!(c.iter().sum::<u32>(), total);
            for (k, &w) in weights.iter().enumerate() {
                if w == 0.0 { prop_assert_eq!(c[k], 0); }
            }
        }

        #[test]
        fn probability_in_open_interval(size in 1usize..8, cars in 0u32..4, female: bool) {
            let m = TransitPassModel::from_rows(&toy_rows()).unwrap();
            let sex = if female { Sex::Female } else { Sex::Male };
            let p = m.probability(&person(sex, Employment::FullTime), size, cars, None).unwrap();
            prop_assert!(p > 0.0 && p < 1.0);
        }
    }
}
