//! Minute-resolution simulation of one week.
//!
//! Every agent runs a small state machine:
//!
//! ```text
//! Uninitialized -> Activity -> Trip -> Activity -> ... -> Finished
//!                     \-> Wait -> Trip     (ridesharing only)
//! ```
//!
//! At each minute the agents with a due transition are processed in
//! ascending person id, which settles contention for household cars.

pub mod carpool;
pub mod reschedule;
mod simulator;

pub use carpool::CarPool;
pub use reschedule::Rescheduling;
pub use simulator::{simulate_week, simulate_week_with_probe};

use alloc::vec::Vec;

use crate::categories::{Mode, ModeSet, Purpose};
use crate::choice::{DestinationChoiceParams, ModeChoiceParams};
use crate::clock::{Minute, MINUTES_PER_WEEK};
use crate::extensions::carsharing::{CarsharingFleet, FleetStats};
use crate::extensions::ridesharing::{RideStats, RideshareOptions};
use crate::extensions::Extensions;
use crate::population::{HouseholdId, PersonId};
use crate::world::{ZoneId, ZoneIdx};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TripRecord {
    pub person: PersonId,
    pub household: HouseholdId,
    pub origin: ZoneId,
    pub destination: ZoneId,
    pub mode: Mode,
    /// Purpose of the activity the trip leads to.
    pub purpose: Purpose,
    pub depart: Minute,
    pub arrive: Minute,
    pub distance_km: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ActivityRecord {
    pub person: PersonId,
    pub index: usize,
    pub purpose: Purpose,
    pub planned_start: Minute,
    pub actual_start: Minute,
    /// First activity planned on its day.
    pub day_first: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct AgentSummary {
    pub person: PersonId,
    pub car_takes: u32,
    pub car_returns: u32,
    /// In a home activity (or finished at home) when the horizon is reached.
    pub ends_at_home: bool,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SimulationStats {
    /// First activities of Tuesday to Sunday that did not start at their
    /// planned minute, skipped ones included.
    pub late_day_starts: u64,
    pub car_takes: u64,
    pub car_returns: u64,
    /// Trips still under way at the horizon, recorded with their arrival.
    pub unfinished_trips: u64,
    pub ride: RideStats,
    pub fleet: FleetStats,
}

#[derive(Clone, Debug)]
pub struct SimulationOutput {
    /// Sorted by departure, then person id.
    pub trips: Vec<TripRecord>,
    pub activities: Vec<ActivityRecord>,
    /// Agents in the trip state after each minute's transitions.
    pub en_route: Vec<u32>,
    pub agents: Vec<AgentSummary>,
    pub stats: SimulationStats,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationOptions {
    pub rescheduling: Rescheduling,
    pub extensions: Extensions,
    pub rideshare: RideshareOptions,
    /// Free-floating cars per zone at Monday 00:00.
    pub freefloat_fleet: Vec<(ZoneIdx, u32)>,
    /// Modes removed from every choice set (never emptying it).
    pub excluded_modes: ModeSet,
    pub horizon: Minute,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            rescheduling: Rescheduling::default(),
            extensions: Extensions::default(),
            rideshare: RideshareOptions::default(),
            freefloat_fleet: Vec::new(),
            excluded_modes: ModeSet::default(),
            horizon: MINUTES_PER_WEEK,
        }
    }
}

#[derive(Copy, Clone, Debug)]
pub struct Models<'a> {
    pub mode: &'a ModeChoiceParams,
    pub destination: &'a DestinationChoiceParams,
}

/// State visible to a probe after each minute.
pub struct Snapshot<'a> {
    pub minute: Minute,
    /// Car pools in household order.
    pub pools: &'a [CarPool],
    pub en_route: u32,
    pub fleet: Option<&'a CarsharingFleet>,
}

/// Observer called once per simulated minute.
pub trait Probe {
    fn observe(&mut self, snapshot: &Snapshot<'_>);
}

/// Probe that ignores everything.
pub struct NoProbe;

impl Probe for NoProbe {
    fn observe(&mut self, _: &Snapshot<'_>) {}
}

impl<F: FnMut(&Snapshot<'_>)> Probe for F {
    fn observe(&mut self, snapshot: &Snapshot<'_>) {
        self(snapshot)
    }
}
