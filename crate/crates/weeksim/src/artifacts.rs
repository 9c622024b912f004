//! Intermediate and final artifacts: synthetic population, long-term
//! assignment, trip file and run summary.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};

use weeksim_core::engine::{Rescheduling, SimulationStats, TripRecord};
use weeksim_core::extensions::Extensions;
use weeksim_core::longterm::{Car, CarEngine, LongTermAssignment, PersonAssignment};
use weeksim_core::population::{Household, HouseholdId, Person, PersonId, Population, WeightedSurvey};
use weeksim_core::world::ZoneId;

use crate::manifest::{extensions_label, parse_extensions};
use crate::scenario::{parse_attributes, read_activities, PERSON_ATTRIBUTE_COLUMNS};
use crate::table::{read_meta, Table, TableWriter};

pub const HOUSEHOLDS: &str = "households.csv";
pub const PERSONS: &str = "persons.csv";
pub const ACTIVITIES: &str = "activities.csv";
pub const IPF_REPORT: &str = "ipf_report.csv";
pub const LONGTERM: &str = "longterm.csv";
pub const CARS: &str = "cars.csv";
pub const TRIPS: &str = "trips.csv";
pub const SUMMARY: &str = "summary.csv";

pub const TRIP_COLUMNS: [&str; 9] = [
    "person_id",
    "household_id",
    "origin",
    "destination",
    "mode",
    "purpose",
    "depart_min",
    "arrive_min",
    "distance_km",
];

/// Run settings written as the first line of every output file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMeta {
    pub population_seed: u64,
    pub seed: u64,
    pub rescheduling: Rescheduling,
    pub extensions: Extensions,
    pub travel_time_scale: f64,
}

impl fmt::Display for RunMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "weeksim population_seed={} seed={} rescheduling={} extensions={} travel_time_scale={}",
            self.population_seed,
            self.seed,
            self.rescheduling,
            extensions_label(self.extensions),
            self.travel_time_scale
        )
    }
}

impl FromStr for RunMeta {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = s.split_whitespace();
        if fields.next() != Some("weeksim") {
            bail!("not a weeksim metadata line: `{s}`");
        }
        let kv: BTreeMap<&str, &str> = fields.filter_map(|f| f.split_once('=')).collect();
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| anyhow!("metadata line lacks `{k}`"));
        let ext: Vec<&str> = get("extensions")?.split(',').collect();
        Ok(RunMeta {
            population_seed: get("population_seed")?.parse()?,
            seed: get("seed")?.parse()?,
            rescheduling: get("rescheduling")?.parse()?,
            extensions: parse_extensions(&ext)?,
            travel_time_scale: get("travel_time_scale")?.parse()?,
        })
    }
}

impl RunMeta {
    /// Metadata line of an existing output file.
    pub fn read(path: &Path) -> Result<RunMeta> {
        match read_meta(path)? {
            Some(line) => line
                .parse()
                .map_err(|e: anyhow::Error| e.context(format!("{}:1", path.display()))),
            None => bail!("{}:1: missing metadata line", path.display()),
        }
    }
}

fn b(v: bool) -> &'static str {
    if v {
        "1"
    } else {
        "0"
    }
}

fn opt_zone(z: Option<ZoneId>) -> String {
    z.map(|z| z.to_string()).unwrap_or_default()
}

pub fn write_population(dir: &Path, meta: &str, population: &Population) -> Result<()> {
    let mut w = TableWriter::create(
        &dir.join(HOUSEHOLDS),
        Some(meta),
        &["household_id", "home_zone", "household_type", "n_cars", "prototype"],
    )?;
    for h in population.households() {
        w.row([
            h.id.to_string(),
            h.home_zone.to_string(),
            h.household_type.clone(),
            h.n_cars.to_string(),
            h.prototype.to_string(),
        ])?;
    }
    w.finish()?;

    let mut header = vec!["person_id", "household_id", "prototype"];
    header.extend(PERSON_ATTRIBUTE_COLUMNS);
    header.push("commute_km");
    let mut w = TableWriter::create(&dir.join(PERSONS), Some(meta), &header)?;
    for p in population.persons() {
        let a = &p.attributes;
        w.row([
            p.id.to_string(),
            p.household.to_string(),
            p.prototype.to_string(),
            a.sex.to_string(),
            a.age.to_string(),
            a.employment.to_string(),
            b(a.has_license).to_string(),
            a.car_availability.to_string(),
            p.commute_km.to_string(),
        ])?;
    }
    w.finish()?;

    let mut w = TableWriter::create(
        &dir.join(ACTIVITIES),
        Some(meta),
        &["person_id", "purpose", "start_min", "duration_min"],
    )?;
    for p in population.persons() {
        for a in p.program.activities() {
            w.row([
                p.id.to_string(),
                a.purpose.to_string(),
                a.planned_start.to_string(),
                a.duration.to_string(),
            ])?;
        }
    }
    w.finish()
}

pub fn write_ipf_report(dir: &Path, meta: &str, fits: &[(ZoneId, WeightedSurvey)]) -> Result<()> {
    let mut w = TableWriter::create(
        &dir.join(IPF_REPORT),
        Some(meta),
        &["zone_id", "iterations", "max_deviation", "converged"],
    )?;
    for (zone, fit) in fits {
        w.row([
            zone.to_string(),
            fit.iterations.to_string(),
            fit.max_deviation.to_string(),
            b(fit.converged).to_string(),
        ])?;
    }
    w.finish()
}

pub fn read_population(dir: &Path) -> Result<Population> {
    let mut programs = read_activities(&dir.join(ACTIVITIES))?;
    let hh = Table::read(&dir.join(HOUSEHOLDS))?;
    hh.require(&["household_id", "home_zone", "household_type", "n_cars", "prototype"])?;
    let mut households = Vec::with_capacity(hh.len());
    let mut index = BTreeMap::new();
    for row in hh.rows() {
        let id = HouseholdId(row.parse("household_id")?);
        index.insert(id, households.len());
        households.push(Household {
            id,
            home_zone: ZoneId(row.parse("home_zone")?),
            household_type: row.str("household_type")?.to_string(),
            n_cars: row.parse("n_cars")?,
            prototype: row.parse("prototype")?,
            members: Vec::new(),
        });
    }
    let t = Table::read(&dir.join(PERSONS))?;
    t.require(&["person_id", "household_id", "prototype", "commute_km"])?;
    t.require(&PERSON_ATTRIBUTE_COLUMNS)?;
    let mut persons = Vec::with_capacity(t.len());
    for row in t.rows() {
        let id: u32 = row.parse("person_id")?;
        let household = HouseholdId(row.parse("household_id")?);
        let k = *index
            .get(&household)
            .ok_or_else(|| anyhow!("{}: unknown household {household}", row.at()))?;
        households[k].members.push(PersonId(id));
        let program = programs
            .remove(&id)
            .ok_or_else(|| anyhow!("{}: person {id} has no activities", row.at()))?;
        persons.push(Person {
            id: PersonId(id),
            household,
            prototype: row.parse("prototype")?,
            attributes: parse_attributes(&row)?,
            commute_km: row.parse("commute_km")?,
            program,
        });
    }
    if let Some(id) = programs.keys().next() {
        bail!("{}: activities for unknown person {id}", dir.join(ACTIVITIES).display());
    }
    Ok(Population::new(households, persons)?)
}

pub fn write_longterm(dir: &Path, meta: &str, a: &LongTermAssignment) -> Result<()> {
    let mut w = TableWriter::create(
        &dir.join(LONGTERM),
        Some(meta),
        &["person_id", "work_zone", "school_zone", "transit_pass"],
    )?;
    for (id, p) in &a.persons {
        w.row([
            id.to_string(),
            opt_zone(p.work_zone),
            opt_zone(p.school_zone),
            b(p.transit_pass).to_string(),
        ])?;
    }
    w.finish()?;
    let mut w = TableWriter::create(
        &dir.join(CARS),
        Some(meta),
        &["household_id", "car", "segment", "engine"],
    )?;
    for (id, cars) in &a.cars {
        for (k, car) in cars.iter().enumerate() {
            w.row([
                id.to_string(),
                k.to_string(),
                car.segment.clone(),
                car.engine.as_str().to_string(),
            ])?;
        }
    }
    w.finish()
}

pub fn read_longterm(dir: &Path, population: &Population) -> Result<LongTermAssignment> {
    let t = Table::read(&dir.join(LONGTERM))?;
    t.require(&["person_id", "work_zone", "school_zone", "transit_pass"])?;
    let mut out = LongTermAssignment::default();
    for row in t.rows() {
        let zone = |col: &str| -> Result<Option<ZoneId>> {
            let raw = row.str(col)?;
            if raw.is_empty() {
                Ok(None)
            } else {
                Ok(Some(ZoneId(row.parse(col)?)))
            }
        };
        let id = PersonId(row.parse("person_id")?);
        let p = PersonAssignment {
            work_zone: zone("work_zone")?,
            school_zone: zone("school_zone")?,
            transit_pass: row.flag("transit_pass")?,
        };
        if out.persons.insert(id, p).is_some() {
            bail!("{}: duplicate person {id}", row.at());
        }
    }
    for h in population.households() {
        out.cars.insert(h.id, Vec::new());
    }
    let t = Table::read(&dir.join(CARS))?;
    t.require(&["household_id", "segment", "engine"])?;
    for row in t.rows() {
        let id = HouseholdId(row.parse("household_id")?);
        let engine: CarEngine = row
            .str("engine")?
            .parse()
            .map_err(|e| anyhow!("{}: column `engine`: {e}", row.at()))?;
        out.cars
            .get_mut(&id)
            .ok_or_else(|| anyhow!("{}: unknown household {id}", row.at()))?
            .push(Car {
                segment: row.str("segment")?.to_string(),
                engine,
            });
    }
    for h in population.households() {
        let n = out.cars_of(h.id).len();
        if n != h.n_cars as usize {
            bail!(
                "{}: household {} owns {} cars but {n} are listed",
                dir.join(CARS).display(),
                h.id,
                h.n_cars
            );
        }
    }
    Ok(out)
}

pub fn write_trips(path: &Path, meta: &str, trips: &[TripRecord]) -> Result<()> {
    let mut w = TableWriter::create(path, Some(meta), &TRIP_COLUMNS)?;
    for t in trips {
        w.row([
            t.person.to_string(),
            t.household.to_string(),
            t.origin.to_string(),
            t.destination.to_string(),
            t.mode.to_string(),
            t.purpose.to_string(),
            t.depart.to_string(),
            t.arrive.to_string(),
            t.distance_km.to_string(),
        ])?;
    }
    w.finish()
}

pub fn read_trips(path: &Path) -> Result<Vec<TripRecord>> {
    let t = Table::read(path)?;
    if t.header() != TRIP_COLUMNS {
        bail!("{}: expected columns {}", path.display(), TRIP_COLUMNS.join(","));
    }
    t.rows()
        .map(|row| {
            let cat = |col: &str| anyhow!("{}: column `{col}`", row.at());
            let trip = TripRecord {
                person: PersonId(row.parse("person_id")?),
                household: HouseholdId(row.parse("household_id")?),
                origin: ZoneId(row.parse("origin")?),
                destination: ZoneId(row.parse("destination")?),
                mode: row.str("mode")?.parse().map_err(|e| cat("mode").context(e))?,
                purpose: row.str("purpose")?.parse().map_err(|e| cat("purpose").context(e))?,
                depart: row.parse("depart_min")?,
                arrive: row.parse("arrive_min")?,
                distance_km: row.parse("distance_km")?,
            };
            if trip.arrive < trip.depart {
                bail!("{}: arrival before departure", row.at());
            }
            Ok(trip)
        })
        .collect()
}

pub fn write_summary(path: &Path, meta: &str, trips: usize, stats: &SimulationStats) -> Result<()> {
    let mut w = TableWriter::create(path, Some(meta), &["key", "value"])?;
    let rows: [(&str, u64); 12] = [
        ("trips", trips as u64),
        ("late_day_starts", stats.late_day_starts),
        ("car_takes", stats.car_takes),
        ("car_returns", stats.car_returns),
        ("unfinished_trips", stats.unfinished_trips),
        ("ride_offers", stats.ride.offers),
        ("ride_matches", stats.ride.matches),
        ("ride_fallbacks", stats.ride.fallbacks),
        ("station_rentals", stats.fleet.station_rentals),
        ("station_returns", stats.fleet.station_returns),
        ("freefloat_pickups", stats.fleet.freefloat_pickups),
        ("freefloat_dropoffs", stats.fleet.freefloat_dropoffs),
    ];
    for (k, v) in rows {
        w.row([k.to_string(), v.to_string()])?;
    }
    w.finish()
}
