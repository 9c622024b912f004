//! Discrete choice core: availability rules, mode and destination logit
//! models, and seeded sampling.

pub mod availability;
pub mod destination;
pub mod logit;
pub mod mode;

pub use availability::{available_modes, flexible_modes, restrict, AvailabilityContext};
pub use destination::{DestinationChoiceParams, DestinationInput, PurposeCoefficients};
pub use logit::{sample_weighted, softmax, softmax_scaled, Distribution};
pub use mode::{ModeChoiceInput, ModeChoiceParams};

use crate::activity::Activity;
use crate::categories::{DayType, Mode};
use crate::clock::{Minute, Weekday};
use crate::population::PersonAttributes;
use crate::world::ZoneIdx;

/// Everything a destination or mode decision reads.
#[derive(Copy, Clone, Debug)]
pub struct ChoiceContext<'a> {
    pub person: &'a PersonAttributes,
    pub has_transit_pass: bool,
    pub at_home: bool,
    pub current_zone: ZoneIdx,
    pub previous_mode: Option<Mode>,
    pub clock: Minute,
    pub next_activity: &'a Activity,
    /// Zone of the next fixed-location activity; home when none follows.
    pub next_fixed_zone: ZoneIdx,
    pub free_cars: u32,
}

impl<'a> ChoiceContext<'a> {
    pub fn day(&self) -> DayType {
        Weekday::of_minute(self.clock).day_type()
    }

    pub fn mode_input(&self) -> ModeChoiceInput<'a> {
        ModeChoiceInput {
            person: self.person,
            has_transit_pass: self.has_transit_pass,
            purpose: self.next_activity.purpose,
            day: self.day(),
        }
    }

    pub fn destination_input(&self) -> DestinationInput {
        DestinationInput {
            origin: self.current_zone,
            next_fixed: self.next_fixed_zone,
            purpose: self.next_activity.purpose,
            employment: self.person.employment,
        }
    }

    pub fn availability(&self) -> AvailabilityContext {
        AvailabilityContext {
            at_home: self.at_home,
            has_license: self.person.has_license,
            free_cars: self.free_cars,
            previous_mode: self.previous_mode,
            carsharing: None,
        }
    }
}
