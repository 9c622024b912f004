//! Situation-dependent choice sets.
//!
//! At home every mode is open except that driving needs a license and a free
//! household car. Away from home a vehicle-bound mode (car as driver, cycling,
//! station-based carsharing) locks the agent until the next home arrival,
//! while the flexible modes (walking, public transport, car as passenger)
//! stay interchangeable.

use crate::categories::{Mode, ModeSet};
use crate::extensions::carsharing::{carsharing_availability, CarsharingSituation};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AvailabilityContext {
    pub at_home: bool,
    pub has_license: bool,
    /// Free cars in the household pool.
    pub free_cars: u32,
    pub previous_mode: Option<Mode>,
    /// `Some` when the carsharing extension is enabled.
    pub carsharing: Option<CarsharingSituation>,
}

pub fn flexible_modes() -> ModeSet {
    ModeSet::of(&[Mode::Walking, Mode::PublicTransport, Mode::CarPassenger])
}

fn locks_vehicle(mode: Mode) -> bool {
    matches!(mode, Mode::CarDriver | Mode::Cycling | Mode::CarsharingStation)
}

/// Non-empty set of modes the agent may choose from.
pub fn available_modes(ctx: &AvailabilityContext) -> ModeSet {
    if let Some(cs) = &ctx.carsharing {
        if cs.holding_freefloat {
            return ModeSet::of(&[Mode::CarsharingFreefloat]);
        }
    }
    let base = match ctx.previous_mode {
        Some(prev) if !ctx.at_home && locks_vehicle(prev) => return ModeSet::of(&[prev]),
        _ if ctx.at_home => {
            let mut s = ModeSet::of(&[Mode::Walking, Mode::Cycling, Mode::PublicTransport, Mode::CarPassenger]);
            if ctx.has_license && ctx.free_cars > 0 {
                s.insert(Mode::CarDriver);
            }
            s
        }
        _ => flexible_modes(),
    };
    match &ctx.carsharing {
        Some(cs) => base.union(carsharing_availability(ctx, cs)),
        None => base,
    }
}

/// Removes `excluded` from an available set unless that would leave it empty.
pub fn restrict(available: ModeSet, excluded: ModeSet) -> ModeSet {
    let rest = available.difference(excluded);
    if rest.is_empty() {
        available
    } else {
        rest
    }
}
