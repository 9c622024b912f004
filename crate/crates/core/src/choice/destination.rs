//! Destination choice for flexible-location activities.
//!
//! A candidate zone `j` is judged on the detour from the current zone `i`
//! through `j` to the next fixed location `n`:
//!
//! ```text
//! V_ij = (b_time[p] + b_time[e]) * (t_ij + t_jn) + b_cost[p] * (c_ij + c_jn)
//!      + b_opp[p] * ln(1 + A_jp)
//! P_ij ∝ exp(g[p] * g[e] * V_ij)
//! ```
//!
//! `p` is the activity purpose, `e` the employment status, `A_jp` the
//! attractivity of `j` for `p`. Times and costs come from one skim mode.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::logit::Distribution;
use crate::categories::{Employment, Mode, Purpose};
use crate::params::{employment_levels, index_rows, CoefficientRow};
use crate::world::{World, ZoneIdx};
use crate::{Error, Result};

const DEST_KNOWN: &[&str] = &["time", "cost", "opportunities", "time_employment"];
const SCALING_KNOWN: &[&str] = &["gamma_purpose", "gamma_employment"];

#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct PurposeCoefficients {
    pub time: f64,
    pub cost: f64,
    pub opportunities: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DestinationChoiceParams {
    purposes: BTreeMap<Purpose, PurposeCoefficients>,
    /// Additional time coefficient; full-time employment is the reference.
    time_employment: BTreeMap<Employment, f64>,
    gamma_purpose: BTreeMap<Purpose, f64>,
    gamma_employment: BTreeMap<Employment, f64>,
    skim_mode: Mode,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DestinationInput {
    pub origin: ZoneIdx,
    pub next_fixed: ZoneIdx,
    pub purpose: Purpose,
    pub employment: Employment,
}

fn missing(coefficient: &str, category: &str) -> Error {
    Error::MissingCoefficient {
        model: "destination choice",
        coefficient: coefficient.into(),
        category: category.into(),
    }
}

impl DestinationChoiceParams {
    pub fn from_rows(dest: &[CoefficientRow], scaling: &[CoefficientRow]) -> Result<Self> {
        let dest = index_rows(dest, DEST_KNOWN)?;
        let scaling = index_rows(scaling, SCALING_KNOWN)?;
        let mut purposes: BTreeMap<Purpose, PurposeCoefficients> = BTreeMap::new();
        let mut seen: BTreeMap<(Purpose, &str), ()> = BTreeMap::new();
        let mut time_employment = BTreeMap::new();
        for row in dest.values() {
            if row.coefficient == "time_employment" {
                for e in employment_levels(&row.category)? {
                    time_employment.insert(e, row.value());
                }
                continue;
            }
            let p: Purpose = row.category.parse()?;
            if p.is_fixed_location() {
                return Err(Error::InvalidParams(alloc::format!(
                    "destination coefficients for fixed-location purpose `{p}`"
                )));
            }
            let c = purposes.entry(p).or_default();
            match row.coefficient.as_str() {
                "time" => c.time = row.value(),
                "cost" => c.cost = row.value(),
                _ => c.opportunities = row.value(),
            }
            seen.insert((p, row.coefficient.as_str()), ());
        }
        for p in purposes.keys() {
            for name in ["time", "cost", "opportunities"] {
                if !seen.contains_key(&(*p, name)) {
                    return Err(missing(name, p.as_str()));
                }
            }
        }
        let mut gamma_purpose = BTreeMap::new();
        let mut gamma_employment = BTreeMap::new();
        for row in scaling.values() {
            let v = row.value();
            if !(v > 0.0) {
                return Err(Error::InvalidParams(alloc::format!(
                    "scaling factor for `{}` must be positive",
                    row.category
                )));
            }
            if row.coefficient == "gamma_purpose" {
                gamma_purpose.insert(row.category.parse::<Purpose>()?, v);
            } else {
                for e in employment_levels(&row.category)? {
                    gamma_employment.insert(e, v);
                }
            }
        }
        Ok(DestinationChoiceParams {
            purposes,
            time_employment,
            gamma_purpose,
            gamma_employment,
            skim_mode: Mode::CarDriver,
        })
    }

    /// Mode whose skims feed the utility; car as driver by default.
    pub fn with_skim_mode(mut self, mode: Mode) -> Self {
        self.skim_mode = mode;
        self
    }

    pub fn skim_mode(&self) -> Mode {
        self.skim_mode
    }

    pub fn purposes(&self) -> impl Iterator<Item = Purpose> + '_ {
        self.purposes.keys().copied()
    }

    pub fn purpose_coefficients(&self, purpose: Purpose) -> Result<PurposeCoefficients> {
        self.purposes
            .get(&purpose)
            .copied()
            .ok_or_else(|| missing("time", purpose.as_str()))
    }

    pub fn time_employment(&self, employment: Employment) -> Result<f64> {
        match self.time_employment.get(&employment) {
            Some(v) => Ok(*v),
            None if employment == Employment::FullTime => Ok(0.0),
            None => Err(missing("time_employment", employment.as_str())),
        }
    }

    pub fn gamma_purpose(&self, purpose: Purpose) -> Result<f64> {
        self.gamma_purpose
            .get(&purpose)
            .copied()
            .ok_or_else(|| missing("gamma_purpose", purpose.as_str()))
    }

    pub fn gamma_employment(&self, employment: Employment) -> Result<f64> {
        self.gamma_employment
            .get(&employment)
            .copied()
            .ok_or_else(|| missing("gamma_employment", employment.as_str()))
    }

    /// Product of the purpose and employment scaling factors.
    pub fn scale(&self, purpose: Purpose, employment: Employment) -> Result<f64> {
        Ok(self.gamma_purpose(purpose)? * self.gamma_employment(employment)?)
    }

    pub fn utility(&self, world: &World, input: &DestinationInput, candidate: ZoneIdx) -> Result<f64> {
        let c = self.purpose_coefficients(input.purpose)?;
        let b_time = c.time + self.time_employment(input.employment)?;
        let there = world.travel(self.skim_mode, input.origin, candidate)?;
        let on = world.travel(self.skim_mode, candidate, input.next_fixed)?;
        let a = world.zone(candidate).attractivity(input.purpose);
        Ok(b_time * (there.time + on.time) + c.cost * (there.cost + on.cost) + c.opportunities * libm::log1p(a))
    }

    /// Utilities of every zone, in zone index order.
    pub fn utilities(&self, world: &World, input: &DestinationInput) -> Result<Vec<f64>> {
        world.zone_indices().map(|j| self.utility(world, input, j)).collect()
    }

    /// Calibrated distribution over all zones.
    pub fn probabilities(&self, world: &World, input: &DestinationInput) -> Result<Distribution<ZoneIdx>> {
        let scale = self.scale(input.purpose, input.employment)?;
        self.distribution(world, input, scale)
    }

    /// Distribution without the scaling factors.
    pub fn probabilities_unscaled(&self, world: &World, input: &DestinationInput) -> Result<Distribution<ZoneIdx>> {
        self.distribution(world, input, 1.0)
    }

    fn distribution(&self, world: &World, input: &DestinationInput, scale: f64) -> Result<Distribution<ZoneIdx>> {
        if input.purpose.is_fixed_location() {
            return Err(Error::Invalid(alloc::format!(
                "no destination choice for fixed-location purpose `{}`",
                input.purpose
            )));
        }
        let u = self.utilities(world, input)?;
        Ok(Distribution::from_utilities(world.zone_indices().collect(), &u, scale))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Shopping-daily and leisure-other rows with round numbers.
    pub fn simple() -> DestinationChoiceParams {
        let dest = alloc::vec![
            CoefficientRow::new("time", "shopping_daily", "", -0.1),
            CoefficientRow::new("cost", "shopping_daily", "", -0.5),
            CoefficientRow::new("opportunities", "shopping_daily", "", 0.3),
            CoefficientRow::new("time", "leisure_other", "", -0.05),
            CoefficientRow::new("cost", "leisure_other", "", -0.3),
            CoefficientRow::new("opportunities", "leisure_other", "", 0.5),
            CoefficientRow::new("time_employment", "student", "", -0.01),
        ];
        let scaling = alloc::vec![
            CoefficientRow::new("gamma_purpose", "shopping_daily", "", 0.85),
            CoefficientRow::new("gamma_purpose", "leisure_other", "", 1.05),
            CoefficientRow::new("gamma_employment", "fulltime", "", 1.3),
            CoefficientRow::new("gamma_employment", "student", "", 0.8),
        ];
        DestinationChoiceParams::from_rows(&dest, &scaling).unwrap()
    }
}
