//! Carsharing availability and fleet bookkeeping.
//!
//! Station-based cars are rented at the home zone station and must come back
//! there, so while away the renter is locked to the mode. Free-floating cars
//! are picked up and dropped anywhere inside the operating area; a renter who
//! parks outside the area keeps the car until coming back inside.

use alloc::format;
use alloc::vec::Vec;

use crate::categories::{Mode, ModeSet};
use crate::choice::AvailabilityContext;
use crate::world::{World, ZoneIdx};
use crate::{Error, Result};

/// Carsharing part of an agent's situation.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct CarsharingSituation {
    /// Free station cars in the home zone.
    pub home_station_cars: u32,
    pub in_operating_area: bool,
    /// Free free-floating cars in the current zone.
    pub freefloat_cars_here: u32,
    pub holding_freefloat: bool,
}

/// Carsharing modes added to the base choice set.
pub fn carsharing_availability(ctx: &AvailabilityContext, cs: &CarsharingSituation) -> ModeSet {
    let mut out = ModeSet::default();
    if !ctx.has_license {
        return out;
    }
    if ctx.at_home && cs.home_station_cars > 0 {
        out.insert(Mode::CarsharingStation);
    }
    if cs.in_operating_area && cs.freefloat_cars_here > 0 {
        out.insert(Mode::CarsharingFreefloat);
    }
    out
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct FleetStats {
    pub station_rentals: u64,
    pub station_returns: u64,
    pub freefloat_pickups: u64,
    pub freefloat_dropoffs: u64,
}

/// Mutable fleet state over the simulated week.
#[derive(Clone, Debug, PartialEq)]
pub struct CarsharingFleet {
    area: Vec<bool>,
    station_cars: Vec<u32>,
    freefloat_cars: Vec<u32>,
    stats: FleetStats,
}

impl CarsharingFleet {
    /// One car per station; free-floating cars from `freefloat` (zone, count).
    pub fn new(world: &World, freefloat: &[(ZoneIdx, u32)]) -> Result<Self> {
        let n = world.zone_count();
        let mut freefloat_cars = alloc::vec![0; n];
        for &(z, count) in freefloat {
            if z.0 >= n {
                return Err(Error::ZoneIndexOutOfRange(z.0));
            }
            if count > 0 && !world.zone(z).freefloating {
                return Err(Error::Invalid(format!(
                    "free-floating cars placed in zone {} outside the operating area",
                    world.id_of(z)
                )));
            }
            freefloat_cars[z.0] += count;
        }
        Ok(CarsharingFleet {
            area: world.zones().iter().map(|z| z.freefloating).collect(),
            station_cars: world.zones().iter().map(|z| z.stations).collect(),
            freefloat_cars,
            stats: FleetStats::default(),
        })
    }

    pub fn situation(&self, home: ZoneIdx, current: ZoneIdx, holding_freefloat: bool) -> CarsharingSituation {
        CarsharingSituation {
            home_station_cars: self.station_cars[home.0],
            in_operating_area: self.area[current.0],
            freefloat_cars_here: self.freefloat_cars[current.0],
            holding_freefloat,
        }
    }

    pub fn in_area(&self, zone: ZoneIdx) -> bool {
        self.area[zone.0]
    }

    pub fn station_cars(&self, zone: ZoneIdx) -> u32 {
        self.station_cars[zone.0]
    }

    pub fn freefloat_cars(&self, zone: ZoneIdx) -> u32 {
        self.freefloat_cars[zone.0]
    }

    pub fn stats(&self) -> FleetStats {
        self.stats
    }

    pub fn rent_station(&mut self, zone: ZoneIdx) -> Result<()> {
        let c = &mut self.station_cars[zone.0];
        if *c == 0 {
            return Err(Error::Invalid(format!("no station car in zone index {}", zone.0)));
        }
        *c -= 1;
        self.stats.station_rentals += 1;
        Ok(())
    }

    pub fn return_station(&mut self, zone: ZoneIdx) {
        self.station_cars[zone.0] += 1;
        self.stats.station_returns += 1;
    }

    pub fn pick_up_freefloat(&mut self, zone: ZoneIdx) -> Result<()> {
        let c = &mut self.freefloat_cars[zone.0];
        if *c == 0 {
            return Err(Error::Invalid(format!("no free-floating car in zone index {}", zone.0)));
        }
        *c -= 1;
        self.stats.freefloat_pickups += 1;
        Ok(())
    }

    /// Parks the car if `zone` is inside the operating area.
    pub fn try_drop_freefloat(&mut self, zone: ZoneIdx) -> bool {
        if !self.area[zone.0] {
            return false;
        }
        self.freefloat_cars[zone.0] += 1;
        self.stats.freefloat_dropoffs += 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::available_modes;
    use crate::world::fixtures::three_zones;

    fn ctx(at_home: bool, cs: CarsharingSituation, prev: Option<Mode>) -> AvailabilityContext {
        AvailabilityContext {
            at_home,
            has_license: true,
            free_cars: 0,
            previous_mode: prev,
            carsharing: Some(cs),
        }
    }

    #[test]
    fn station_needs_home_station() {
        let none = CarsharingSituation::default();
        assert!(!available_modes(&ctx(true, none, None)).contains(Mode::CarsharingStation));
        let one = CarsharingSituation {
            home_station_cars: 1,
            ..none
        };
        assert!(available_modes(&ctx(true, one, None)).contains(Mode::CarsharingStation));
        assert!(!available_modes(&ctx(false, one, Some(Mode::Walking))).contains(Mode::CarsharingStation));
        assert_eq!(
            available_modes(&ctx(false, one, Some(Mode::CarsharingStation))),
            ModeSet::of(&[Mode::CarsharingStation])
        );
    }

    #[test]
    fn freefloat_rules() {
        let here = CarsharingSituation {
            in_operating_area: true,
            freefloat_cars_here: 2,
            ..Default::default()
        };
        assert!(available_modes(&ctx(false, here, Some(Mode::Walking))).contains(Mode::CarsharingFreefloat));
        let empty = CarsharingSituation {
            freefloat_cars_here: 0,
            ..here
        };
        assert!(!available_modes(&ctx(false, empty, Some(Mode::Walking))).contains(Mode::CarsharingFreefloat));
        let outside = CarsharingSituation {
            holding_freefloat: true,
            ..Default::default()
        };
        assert_eq!(
            available_modes(&ctx(false, outside, Some(Mode::CarsharingFreefloat))),
            ModeSet::of(&[Mode::CarsharingFreefloat])
        );
    }

    #[test]
    fn fleet_counts() {
        let w = three_zones();
        assert!(CarsharingFleet::new(&w, &[(ZoneIdx(1), 1)]).is_err());
        let mut f = CarsharingFleet::new(&w, &[(ZoneIdx(0), 1)]).unwrap();
        f.pick_up_freefloat(ZoneIdx(0)).unwrap();
        assert!(f.pick_up_freefloat(ZoneIdx(0)).is_err());
        assert!(!f.try_drop_freefloat(ZoneIdx(2)));
        assert!(f.try_drop_freefloat(ZoneIdx(0)));
        let s = f.stats();
        assert_eq!((s.freefloat_pickups, s.freefloat_dropoffs), (1, 1));
    }
}
