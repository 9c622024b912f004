//! Two-stage population synthesis.
//!
//! Stage one reweights the survey households of a zone by iterative
//! proportional fitting until the weighted household types and the weighted
//! person attributes match the zone's marginals. Stage two draws, for every
//! household type, the target number of households with replacement and
//! probability proportional to weight. Every drawn household and its persons
//! are copies of the survey prototype, activity program included.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::activity::ActivityProgram;
use crate::categories::{AgeGroup, CarAvailability, Employment, Sex};
use crate::choice::logit::sample_weighted;
use crate::rng::{stream, Stream};
use crate::world::ZoneId;
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PersonId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HouseholdId(pub u32);

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for HouseholdId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sociodemographics read by the choice models.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PersonAttributes {
    pub sex: Sex,
    pub age: AgeGroup,
    pub employment: Employment,
    pub has_license: bool,
    pub car_availability: CarAvailability,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyPerson {
    pub id: u32,
    pub attributes: PersonAttributes,
    /// Reported commuting distance in km, 0 if not commuting.
    pub commute_km: f64,
    pub program: ActivityProgram,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyHousehold {
    pub id: u32,
    pub household_type: String,
    pub n_cars: u32,
    pub members: Vec<SurveyPerson>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Survey {
    pub households: Vec<SurveyHousehold>,
}

impl Survey {
    pub fn new(households: Vec<SurveyHousehold>) -> Result<Survey> {
        for h in &households {
            if h.members.is_empty() {
                return Err(Error::Invalid(format!("survey household {} has no members", h.id)));
            }
        }
        Ok(Survey { households })
    }
}

/// A person-level marginal category, written `attribute:value` in files.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PersonCategory {
    Sex(Sex),
    Age(AgeGroup),
    Employment(Employment),
}

impl PersonCategory {
    pub fn matches(self, a: &PersonAttributes) -> bool {
        match self {
            PersonCategory::Sex(s) => a.sex == s,
            PersonCategory::Age(g) => a.age == g,
            PersonCategory::Employment(e) => a.employment == e,
        }
    }
}

impl fmt::Display for PersonCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PersonCategory::Sex(s) => write!(f, "sex:{s}"),
            PersonCategory::Age(g) => write!(f, "age:{g}"),
            PersonCategory::Employment(e) => write!(f, "employment:{e}"),
        }
    }
}

impl FromStr for PersonCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownCategory {
            kind: "person marginal",
            value: s.to_string(),
        };
        let (attr, value) = s.split_once(':').ok_or_else(unknown)?;
        match attr.trim() {
            "sex" => Ok(PersonCategory::Sex(value.parse()?)),
            "age" => Ok(PersonCategory::Age(value.parse()?)),
            "employment" => Ok(PersonCategory::Employment(value.parse()?)),
            _ => Err(unknown()),
        }
    }
}

/// Target totals of one zone.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ZoneMarginals {
    pub zone: ZoneId,
    pub household_types: BTreeMap<String, f64>,
    pub persons: BTreeMap<PersonCategory, f64>,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct IpfOptions {
    /// Maximum relative deviation over all constrained categories.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for IpfOptions {
    fn default() -> Self {
        IpfOptions {
            tolerance: 1e-4,
            max_iterations: 1000,
        }
    }
}

/// One weight per survey household, in survey order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSurvey {
    pub weights: Vec<f64>,
    pub iterations: usize,
    pub max_deviation: f64,
    /// False when `max_iterations` ran out before reaching the tolerance.
    pub converged: bool,
}

struct Constraint {
    label: String,
    target: f64,
    incidence: Vec<f64>,
}

fn constraints(survey: &Survey, marginals: &ZoneMarginals) -> Result<Vec<Constraint>> {
    let mut out = Vec::new();
    for (ty, &target) in &marginals.household_types {
        let incidence = survey
            .households
            .iter()
            .map(|h| if &h.household_type == ty { 1.0 } else { 0.0 })
            .collect();
        out.push(Constraint {
            label: format!("household_type:{ty}"),
            target,
            incidence,
        });
    }
    for (cat, &target) in &marginals.persons {
        let incidence = survey
            .households
            .iter()
            .map(|h| h.members.iter().filter(|p| cat.matches(&p.attributes)).count() as f64)
            .collect();
        out.push(Constraint {
            label: cat.to_string(),
            target,
            incidence,
        });
    }
    for c in &out {
        if !c.target.is_finite() || c.target < 0.0 {
            return Err(Error::Invalid(format!(
                "zone {}: marginal `{}` must be non-negative, got {}",
                marginals.zone, c.label, c.target
            )));
        }
        if c.target > 0.0 && c.incidence.iter().all(|&a| a == 0.0) {
            return Err(Error::Infeasible(c.label.clone()));
        }
    }
    Ok(out)
}

fn totals(c: &Constraint, weights: &[f64]) -> f64 {
    c.incidence.iter().zip(weights).map(|(a, w)| a * w).sum()
}

fn deviation(c: &Constraint, weights: &[f64]) -> f64 {
    let total = totals(c, weights);
    if c.target > 0.0 {
        libm::fabs(total - c.target) / c.target
    } else {
        total
    }
}

/// Reweights the survey to one zone's marginals, starting from equal weights.
pub fn ipf_fit(survey: &Survey, marginals: &ZoneMarginals, options: IpfOptions) -> Result<WeightedSurvey> {
    if !(options.tolerance > 0.0) {
        return Err(Error::Invalid("IPF tolerance must be positive".into()));
    }
    let cons = constraints(survey, marginals)?;
    let mut weights = alloc::vec![1.0; survey.households.len()];
    let max_dev = |w: &[f64]| cons.iter().map(|c| deviation(c, w)).fold(0.0, f64::max);

    let mut iterations = 0;
    let mut dev = max_dev(&weights);
    while dev >= options.tolerance && iterations < options.max_iterations {
        for c in &cons {
            let total = totals(c, &weights);
            if total <= 0.0 {
                continue;
            }
            let factor = c.target / total;
            for (w, &a) in weights.iter_mut().zip(&c.incidence) {
                if a > 0.0 {
                    *w *= factor;
                }
            }
        }
        iterations += 1;
        dev = max_dev(&weights);
    }
    Ok(WeightedSurvey {
        weights,
        iterations,
        max_deviation: dev,
        converged: dev < options.tolerance,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Household {
    pub id: HouseholdId,
    pub home_zone: ZoneId,
    pub household_type: String,
    pub n_cars: u32,
    /// Survey household this one was copied from.
    pub prototype: u32,
    pub members: Vec<PersonId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Person {
    pub id: PersonId,
    pub household: HouseholdId,
    /// Survey person this one was copied from.
    pub prototype: u32,
    pub attributes: PersonAttributes,
    pub commute_km: f64,
    pub program: ActivityProgram,
}

/// Synthetic households and persons, both sorted by id.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Population {
    households: Vec<Household>,
    persons: Vec<Person>,
}

impl Population {
    pub fn new(mut households: Vec<Household>, mut persons: Vec<Person>) -> Result<Population> {
        households.sort_by_key(|h| h.id);
        persons.sort_by_key(|p| p.id);
        if households.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::Invalid("duplicate household id".into()));
        }
        if persons.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::Invalid("duplicate person id".into()));
        }
        let pop = Population { households, persons };
        for p in &pop.persons {
            let h = pop.household(p.household).ok_or_else(|| {
                Error::Invalid(format!("person {} refers to unknown household {}", p.id, p.household))
            })?;
            if !h.members.contains(&p.id) {
                return Err(Error::Invalid(format!(
                    "person {} is not listed as member of household {}",
                    p.id, h.id
                )));
            }
        }
        for h in &pop.households {
            if let Some(m) = h.members.iter().find(|m| pop.person(**m).is_none()) {
                return Err(Error::Invalid(format!("household {} lists unknown person {m}", h.id)));
            }
        }
        Ok(pop)
    }

    pub fn households(&self) -> &[Household] {
        &self.households
    }

    pub fn persons(&self) -> &[Person] {
        &self.persons
    }

    pub fn household(&self, id: HouseholdId) -> Option<&Household> {
        self.households
            .binary_search_by_key(&id, |h| h.id)
            .ok()
            .map(|k| &self.households[k])
    }

    pub fn person(&self, id: PersonId) -> Option<&Person> {
        self.persons
            .binary_search_by_key(&id, |p| p.id)
            .ok()
            .map(|k| &self.persons[k])
    }

    pub fn household_of(&self, person: &Person) -> &Household {
        self.household(person.household)
            .expect("population invariant: every person has a household")
    }
}

/// Draws households for each zone from its fitted weights.
///
/// Each zone uses its own random stream (keyed by its position in `zones`),
/// so zones could be drawn in any order with the same result.
pub fn draw_population(survey: &Survey, zones: &[(ZoneMarginals, WeightedSurvey)], seed: u64) -> Result<Population> {
    let mut households = Vec::new();
    let mut persons = Vec::new();
    let mut next_household = 1;
    let mut next_person = 1;
    for (position, (marginals, fit)) in zones.iter().enumerate() {
        if fit.weights.len() != survey.households.len() {
            return Err(Error::Invalid(format!(
                "zone {}: {} weights for {} survey households",
                marginals.zone,
                fit.weights.len(),
                survey.households.len()
            )));
        }
        let mut rng = stream(seed, Stream::Synthesis, position as u64);
        for (ty, &target) in &marginals.household_types {
            let count = libm::round(target) as usize;
            if count == 0 {
                continue;
            }
            let candidates: Vec<usize> = (0..survey.households.len())
                .filter(|&k| &survey.households[k].household_type == ty)
                .collect();
            let weights: Vec<f64> = candidates.iter().map(|&k| fit.weights[k]).collect();
            if !weights.iter().any(|&w| w > 0.0) {
                return Err(Error::Infeasible(format!("household_type:{ty}")));
            }
            for _ in 0..count {
                let proto = &survey.households[candidates[sample_weighted(&weights, &mut rng)]];
                let hid = HouseholdId(next_household);
                next_household += 1;
                let mut members = Vec::with_capacity(proto.members.len());
                for sp in &proto.members {
                    let pid = PersonId(next_person);
                    next_person += 1;
                    members.push(pid);
                    persons.push(Person {
                        id: pid,
                        household: hid,
                        prototype: sp.id,
                        attributes: sp.attributes,
                        commute_km: sp.commute_km,
                        program: sp.program.clone(),
                    });
                }
                households.push(Household {
                    id: hid,
                    home_zone: marginals.zone,
                    household_type: proto.household_type.clone(),
                    n_cars: proto.n_cars,
                    prototype: proto.id,
                    members,
                });
            }
        }
    }
    Population::new(households, persons)
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub population: Population,
    pub fits: Vec<(ZoneId, WeightedSurvey)>,
}

/// Fits and draws every zone.
pub fn synthesize(survey: &Survey, marginals: &[ZoneMarginals], options: IpfOptions, seed: u64) -> Result<Synthesis> {
    let zones = marginals
        .iter()
        .map(|m| Ok((m.clone(), ipf_fit(survey, m, options)?)))
        .collect::<Result<Vec<_>>>()?;
    let population = draw_population(survey, &zones, seed)?;
    Ok(Synthesis {
        population,
        fits: zones.into_iter().map(|(m, w)| (m.zone, w)).collect(),
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::activity::Activity;
    use crate::categories::Purpose;
    use alloc::vec;

    pub fn attrs(sex: Sex) -> PersonAttributes {
        PersonAttributes {
            sex,
            age: AgeGroup::Age36To50,
            employment: Employment::FullTime,
            has_license: true,
            car_availability: CarAvailability::Personal,
        }
    }

    pub fn home_program(id: u32) -> ActivityProgram {
        ActivityProgram::new(id, vec![Activity::new(Purpose::Home, 0, 10080)]).unwrap()
    }

    fn person(id: u32, sex: Sex) -> SurveyPerson {
        SurveyPerson {
            id,
            attributes: attrs(sex),
            commute_km: 0.0,
            program: home_program(id),
        }
    }

    /// Four households: A{m,f}, A{f}, B{m,m,f}, B{m}.
    pub fn four_households() -> Survey {
        use Sex::*;
        let hh = |id, ty: &str, members| SurveyHousehold {
            id,
            household_type: ty.into(),
            n_cars: 1,
            members,
        };
        Survey::new(vec![
            hh(1, "A", vec![person(11, Male), person(12, Female)]),
            hh(2, "A", vec![person(21, Female)]),
            hh(3, "B", vec![person(31, Male), person(32, Male), person(33, Female)]),
            hh(4, "B", vec![person(41, Male)]),
        ])
        .unwrap()
    }

    pub fn marginals(a: f64, b: f64, male: f64, female: f64) -> ZoneMarginals {
        ZoneMarginals {
            zone: ZoneId(1),
            household_types: [("A".into(), a), ("B".into(), b)].into_iter().collect(),
            persons: [
                (PersonCategory::Sex(Sex::Male), male),
                (PersonCategory::Sex(Sex::Female), female),
            ]
            .into_iter()
            .collect(),
        }
    }
}
