use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::{max, min, Reverse};

use super::{
    ActivityRecord, AgentSummary, CarPool, Models, NoProbe, Probe, Rescheduling, SimulationOptions, SimulationOutput,
    SimulationStats, Snapshot, TripRecord,
};
use crate::activity::ActivityProgram;
use crate::categories::{Mode, ModeSet, Purpose};
use crate::choice::{available_modes, restrict, ChoiceContext};
use crate::clock::{travel_minutes, Minute};
use crate::extensions::carsharing::CarsharingFleet;
use crate::extensions::ridesharing::{RideBook, RideOffer, RideRequest};
use crate::longterm::LongTermAssignment;
use crate::population::{HouseholdId, PersonId, Population};
use crate::rng::{stream, Stream, StreamRng};
use crate::world::{World, ZoneIdx};
use crate::{Error, Result};

/// Upper bound on transitions of one agent within one minute.
const MAX_STEPS_PER_MINUTE: usize = 64;

#[derive(Copy, Clone, Debug)]
struct PlannedTrip {
    next: usize,
    destination: ZoneIdx,
    mode: Mode,
    travel: Minute,
    /// Matched ride as (departure, arrival).
    ride: Option<(Minute, Minute)>,
    /// Car passenger without a ride yet.
    needs_ride: bool,
}

#[derive(Copy, Clone, Debug)]
enum Pending {
    Finish,
    /// Next activity is at home and so is the agent: no trip.
    Merge(usize),
    Trip(PlannedTrip),
}

#[derive(Copy, Clone, Debug)]
enum State {
    Uninitialized,
    Activity {
        /// `None` is the implicit home stay before a non-home first activity.
        cursor: Option<usize>,
        started: Minute,
        decide_at: Minute,
        ends_at: Minute,
        /// Last activity of a day, fitted to the next day's first start.
        boundary: bool,
        pending: Option<Pending>,
    },
    Wait {
        cursor: Option<usize>,
        trip: PlannedTrip,
        until: Minute,
        next_check: Minute,
        departure: Option<Minute>,
    },
    Trip {
        trip: PlannedTrip,
        origin: ZoneIdx,
        depart: Minute,
        arrives_at: Minute,
    },
    Finished,
}

struct Agent {
    person: usize,
    id: PersonId,
    household: usize,
    household_id: HouseholdId,
    home: ZoneIdx,
    work: Option<ZoneIdx>,
    school: Option<ZoneIdx>,
    transit_pass: bool,
    zone: ZoneIdx,
    previous_mode: Option<Mode>,
    holds_car: bool,
    station_car: bool,
    freefloat_car: bool,
    car_takes: u32,
    car_returns: u32,
    rng: StreamRng,
    state: State,
}

impl Agent {
    fn event_time(&self) -> Option<Minute> {
        match self.state {
            State::Uninitialized => Some(0),
            State::Activity {
                pending: None,
                decide_at,
                ..
            } => Some(decide_at),
            State::Activity { ends_at, .. } => Some(ends_at),
            State::Wait {
                departure, next_check, ..
            } => Some(departure.unwrap_or(next_check)),
            State::Trip { arrives_at, .. } => Some(arrives_at),
            State::Finished => None,
        }
    }
}

struct Sim<'a> {
    world: &'a World,
    population: &'a Population,
    models: Models<'a>,
    options: &'a SimulationOptions,
    lookahead: Minute,
    agents: Vec<Agent>,
    pools: Vec<CarPool>,
    fleet: Option<CarsharingFleet>,
    book: RideBook,
    trips: Vec<TripRecord>,
    activities: Vec<ActivityRecord>,
    en_route: u32,
    series: Vec<u32>,
}

/// Runs the week and returns trips, activity starts and the en-route series.
pub fn simulate_week(
    world: &World,
    population: &Population,
    assignment: &LongTermAssignment,
    models: Models<'_>,
    options: &SimulationOptions,
    seed: u64,
) -> Result<SimulationOutput> {
    simulate_week_with_probe(world, population, assignment, models, options, seed, &mut NoProbe)
}

/// As [`simulate_week`], calling `probe` after every minute.
pub fn simulate_week_with_probe(
    world: &World,
    population: &Population,
    assignment: &LongTermAssignment,
    models: Models<'_>,
    options: &SimulationOptions,
    seed: u64,
    probe: &mut dyn Probe,
) -> Result<SimulationOutput> {
    let mut sim = Sim::new(world, population, assignment, models, options, seed)?;
    sim.run(probe)?;
    Ok(sim.finish())
}

impl<'a> Sim<'a> {
    fn new(
        world: &'a World,
        population: &'a Population,
        assignment: &LongTermAssignment,
        models: Models<'a>,
        options: &'a SimulationOptions,
        seed: u64,
    ) -> Result<Self> {
        let mut needed: Vec<Mode> = Mode::BASE.to_vec();
        if options.extensions.carsharing {
            needed.extend([Mode::CarsharingStation, Mode::CarsharingFreefloat]);
        }
        needed.push(models.destination.skim_mode());
        if let Some(m) = needed.iter().find(|m| !world.has_mode(**m)) {
            return Err(Error::MissingMode(*m));
        }
        assignment.validate(world, population)?;
        let mut pools = Vec::with_capacity(population.households().len());
        let mut household_index = alloc::collections::BTreeMap::new();
        for (k, h) in population.households().iter().enumerate() {
            pools.push(CarPool::new(assignment.cars_of(h.id).len() as u32));
            household_index.insert(h.id, k);
        }
        let zone = |z: Option<crate::world::ZoneId>| z.map(|z| world.index_of(z)).transpose();
        let mut agents = Vec::with_capacity(population.persons().len());
        for (k, p) in population.persons().iter().enumerate() {
            let h = population.household_of(p);
            let home = world.index_of(h.home_zone)?;
            let a = assignment.person(p.id).expect("validated above");
            agents.push(Agent {
                person: k,
                id: p.id,
                household: household_index[&h.id],
                household_id: h.id,
                home,
                work: zone(a.work_zone)?,
                school: zone(a.school_zone)?,
                transit_pass: a.transit_pass,
                zone: home,
                previous_mode: None,
                holds_car: false,
                station_car: false,
                freefloat_car: false,
                car_takes: 0,
                car_returns: 0,
                rng: stream(seed, Stream::Simulation, u64::from(p.id.0)),
                state: State::Uninitialized,
            });
        }
        let fleet = if options.extensions.carsharing {
            Some(CarsharingFleet::new(world, &options.freefloat_fleet)?)
        } else {
            None
        };
        let lookahead = if options.extensions.ridesharing {
            options.rideshare.lookahead_min
        } else {
            0
        };
        if options.extensions.ridesharing
            && options.rideshare.check_interval_min == 0
            && options.rideshare.max_wait_min > 0
        {
            return Err(Error::Invalid("rideshare check interval must be positive".into()));
        }
        Ok(Sim {
            world,
            population,
            models,
            options,
            lookahead,
            agents,
            pools,
            fleet,
            book: RideBook::new(),
            trips: Vec::new(),
            activities: Vec::new(),
            en_route: 0,
            series: Vec::new(),
        })
    }

    fn program(&self, a: usize) -> &'a ActivityProgram {
        let population: &'a Population = self.population;
        &population.persons()[self.agents[a].person].program
    }

    fn run(&mut self, probe: &mut dyn Probe) -> Result<()> {
        let horizon = self.options.horizon;
        let mut heap: BinaryHeap<Reverse<(Minute, usize)>> = (0..self.agents.len()).map(|a| Reverse((0, a))).collect();
        let mut series = Vec::with_capacity(horizon as usize);
        for now in 0..horizon {
            if self.options.extensions.ridesharing {
                self.book.expire(now);
            }
            while let Some(&Reverse((t, a))) = heap.peek() {
                if t != now {
                    break;
                }
                heap.pop();
                let mut steps = 0;
                while let Some(t) = self.agents[a].event_time() {
                    if t > now {
                        break;
                    }
                    if t < now || steps == MAX_STEPS_PER_MINUTE {
                        return Err(Error::Invalid(format!(
                            "person {}: transition scheduled at minute {t} handled at {now}",
                            self.agents[a].id
                        )));
                    }
                    self.step(a, now)?;
                    steps += 1;
                }
                if let Some(t) = self.agents[a].event_time() {
                    if t < horizon {
                        heap.push(Reverse((t, a)));
                    }
                }
            }
            series.push(self.en_route);
            probe.observe(&Snapshot {
                minute: now,
                pools: &self.pools,
                en_route: self.en_route,
                fleet: self.fleet.as_ref(),
            });
        }
        self.series = series;
        Ok(())
    }
}

impl<'a> Sim<'a> {
    fn set_state(&mut self, a: usize, state: State) {
        self.agents[a].state = state;
    }

    fn step(&mut self, a: usize, now: Minute) -> Result<()> {
        match self.agents[a].state {
            State::Uninitialized => self.initialize(a),
            State::Activity { pending: None, .. } => self.decide(a, now),
            State::Activity {
                pending: Some(pending),
                cursor,
                ..
            } => match pending {
                Pending::Finish => {
                    self.set_state(a, State::Finished);
                    Ok(())
                }
                Pending::Merge(j) => {
                    self.start_activity(a, j, now, false);
                    Ok(())
                }
                Pending::Trip(trip) if trip.needs_ride => self.begin_wait(a, cursor, trip, now),
                Pending::Trip(trip) => {
                    self.depart(a, trip, now);
                    Ok(())
                }
            },
            State::Wait { .. } => self.wait_step(a, now),
            State::Trip { .. } => self.arrive(a, now),
            State::Finished => Ok(()),
        }
    }

    fn initialize(&mut self, a: usize) -> Result<()> {
        let first = self.program(a).activities()[0];
        if first.purpose == Purpose::Home {
            self.start_activity(a, 0, 0, true);
        } else {
            self.set_state(
                a,
                State::Activity {
                    cursor: None,
                    started: 0,
                    decide_at: 0,
                    ends_at: 0,
                    boundary: false,
                    pending: None,
                },
            );
        }
        Ok(())
    }

    fn at_home(&self, a: usize, cursor: Option<usize>) -> bool {
        cursor.is_none_or(|k| self.program(a).activities()[k].purpose == Purpose::Home)
    }

    fn fixed_zone(&self, a: usize, purpose: Purpose) -> Result<Option<ZoneIdx>> {
        let agent = &self.agents[a];
        let missing = |what: &str| Error::Invalid(format!("person {} has no {what} zone", agent.id));
        Ok(match purpose {
            Purpose::Home => Some(agent.home),
            Purpose::Work => Some(agent.work.ok_or_else(|| missing("work"))?),
            Purpose::Education => Some(agent.school.ok_or_else(|| missing("school"))?),
            _ => None,
        })
    }

    /// Zone of the first fixed-location activity after `j`, home if none.
    fn next_fixed_zone(&self, a: usize, j: usize) -> Result<ZoneIdx> {
        for act in &self.program(a).activities()[j + 1..] {
            if let Some(z) = self.fixed_zone(a, act.purpose)? {
                return Ok(z);
            }
        }
        Ok(self.agents[a].home)
    }

    /// Longest travel time over all modes from the current zone to where
    /// activity `j` could take place.
    fn lead_minutes(&self, a: usize, j: usize) -> Result<Minute> {
        let zone = self.agents[a].zone;
        let purpose = self.program(a).activities()[j].purpose;
        let t = match self.fixed_zone(a, purpose)? {
            Some(dest) => self.world.max_time_between(zone, dest),
            None => self.world.max_time_from(zone),
        };
        Ok(travel_minutes(t))
    }

    fn start_activity(&mut self, a: usize, k: usize, now: Minute, initial: bool) {
        let program = self.program(a);
        let act = program.activities()[k];
        self.activities.push(ActivityRecord {
            person: self.agents[a].id,
            index: k,
            purpose: act.purpose,
            planned_start: act.planned_start,
            actual_start: now,
            day_first: program.starts_day(k),
        });
        let la = self.lookahead;
        let boundary = self.options.rescheduling == Rescheduling::SkipKeepLast && program.ends_day(k);
        let (decide_at, ends_at) = if boundary {
            let next = program.activities()[k + 1].planned_start;
            // A fixed next zone is always resolvable: programs were validated
            // against the assignment.
            let lead = self.lead_minutes(a, k + 1).unwrap_or(0);
            (
                max(now, next.saturating_sub(lead + la)),
                max(now + 1, next.saturating_sub(lead)),
            )
        } else {
            let ends = if initial {
                max(act.planned_end(), now + 1)
            } else {
                now + act.duration
            };
            (max(now, ends.saturating_sub(la)), ends)
        };
        self.set_state(
            a,
            State::Activity {
                cursor: Some(k),
                started: now,
                decide_at,
                ends_at,
                boundary,
                pending: None,
            },
        );
    }

    fn decide(&mut self, a: usize, now: Minute) -> Result<()> {
        let State::Activity {
            cursor,
            started,
            decide_at,
            ends_at,
            boundary,
            ..
        } = self.agents[a].state
        else {
            unreachable!("decide outside an activity");
        };
        let program = self.program(a);
        let set_pending = |sim: &mut Self, ends_at: Minute, pending: Pending| {
            sim.set_state(
                a,
                State::Activity {
                    cursor,
                    started,
                    decide_at,
                    ends_at,
                    boundary,
                    pending: Some(pending),
                },
            );
        };
        let Some(j) = self.options.rescheduling.next_index(program, cursor, now) else {
            set_pending(self, ends_at, Pending::Finish);
            return Ok(());
        };
        let next = program.activities()[j];
        let at_home = self.at_home(a, cursor);
        if next.purpose == Purpose::Home && at_home {
            set_pending(self, ends_at, Pending::Merge(j));
            return Ok(());
        }
        let destination = match self.fixed_zone(a, next.purpose)? {
            Some(z) => z,
            None => self.choose_destination(a, cursor, j, now)?,
        };
        let mode = self.choose_mode(a, cursor, j, destination, now, ModeSet::default())?;
        let origin = self.agents[a].zone;
        let travel = travel_minutes(self.world.travel(mode, origin, destination)?.time);
        self.commit_vehicle(a, mode)?;
        let mut ends = if cursor.is_none() {
            max(now, next.planned_start.saturating_sub(travel))
        } else if boundary {
            max(max(started + 1, now), next.planned_start.saturating_sub(travel))
        } else {
            ends_at
        };
        let mut trip = PlannedTrip {
            next: j,
            destination,
            mode,
            travel,
            ride: None,
            needs_ride: false,
        };
        if self.options.extensions.ridesharing {
            match mode {
                Mode::CarDriver => self.post_offer(a, destination, ends, travel),
                Mode::CarPassenger => {
                    let request = RideRequest {
                        passenger: self.agents[a].id,
                        origin,
                        destination,
                        earliest: max(now, ends.saturating_sub(self.lookahead)),
                        latest: ends + self.lookahead,
                    };
                    match self.book.accept(&request) {
                        Some(offer) => {
                            trip.ride = Some((offer.departure, offer.arrival));
                            ends = offer.departure;
                        }
                        None => trip.needs_ride = true,
                    }
                }
                _ => {}
            }
        }
        set_pending(self, ends, Pending::Trip(trip));
        Ok(())
    }

    fn post_offer(&mut self, a: usize, destination: ZoneIdx, departure: Minute, travel: Minute) {
        let agent = &self.agents[a];
        self.book.post(RideOffer {
            driver: agent.id,
            origin: agent.zone,
            destination,
            departure,
            arrival: departure + travel,
            seats: self.options.rideshare.seats,
        });
    }

    fn context(&self, a: usize, cursor: Option<usize>, j: usize, now: Minute) -> Result<ChoiceContext<'a>> {
        let population: &'a Population = self.population;
        let agent = &self.agents[a];
        let person = &population.persons()[agent.person];
        Ok(ChoiceContext {
            person: &person.attributes,
            has_transit_pass: agent.transit_pass,
            at_home: self.at_home(a, cursor),
            current_zone: agent.zone,
            previous_mode: agent.previous_mode,
            clock: now,
            next_activity: &person.program.activities()[j],
            next_fixed_zone: self.next_fixed_zone(a, j)?,
            free_cars: self.pools[agent.household].free(),
        })
    }

    fn choose_destination(&mut self, a: usize, cursor: Option<usize>, j: usize, now: Minute) -> Result<ZoneIdx> {
        let ctx = self.context(a, cursor, j, now)?;
        let dist = self
            .models
            .destination
            .probabilities(self.world, &ctx.destination_input())?;
        Ok(dist.sample(&mut self.agents[a].rng))
    }

    fn choose_mode(
        &mut self,
        a: usize,
        cursor: Option<usize>,
        j: usize,
        destination: ZoneIdx,
        now: Minute,
        excluded: ModeSet,
    ) -> Result<Mode> {
        let ctx = self.context(a, cursor, j, now)?;
        let mut situation = ctx.availability();
        if let Some(fleet) = &self.fleet {
            let agent = &self.agents[a];
            situation.carsharing = Some(fleet.situation(agent.home, agent.zone, agent.freefloat_car));
        }
        let available = restrict(available_modes(&situation), self.options.excluded_modes.union(excluded));
        let dist =
            self.models
                .mode
                .probabilities(available, &ctx.mode_input(), self.world, ctx.current_zone, destination)?;
        Ok(dist.sample(&mut self.agents[a].rng))
    }

    fn commit_vehicle(&mut self, a: usize, mode: Mode) -> Result<()> {
        let agent = &mut self.agents[a];
        match mode {
            Mode::CarDriver if !agent.holds_car => {
                self.pools[agent.household].take(agent.id)?;
                agent.holds_car = true;
                agent.car_takes += 1;
            }
            Mode::CarsharingStation if !agent.station_car => {
                fleet_mut(&mut self.fleet)?.rent_station(agent.home)?;
                agent.station_car = true;
            }
            Mode::CarsharingFreefloat if !agent.freefloat_car => {
                fleet_mut(&mut self.fleet)?.pick_up_freefloat(agent.zone)?;
                agent.freefloat_car = true;
            }
            _ => {}
        }
        Ok(())
    }

    fn depart(&mut self, a: usize, trip: PlannedTrip, now: Minute) {
        let arrives_at = match trip.ride {
            Some((departure, arrival)) => {
                debug_assert_eq!(departure, now);
                arrival
            }
            None => now + trip.travel,
        };
        let origin = self.agents[a].zone;
        self.en_route += 1;
        self.set_state(
            a,
            State::Trip {
                trip,
                origin,
                depart: now,
                arrives_at,
            },
        );
    }

    fn record_trip(&mut self, a: usize, trip: &PlannedTrip, origin: ZoneIdx, depart: Minute, arrive: Minute) {
        let agent = &self.agents[a];
        let purpose = self.program(a).activities()[trip.next].purpose;
        self.trips.push(TripRecord {
            person: agent.id,
            household: agent.household_id,
            origin: self.world.id_of(origin),
            destination: self.world.id_of(trip.destination),
            mode: trip.mode,
            purpose,
            depart,
            arrive,
            distance_km: self.world.distance(origin, trip.destination),
        });
    }

    fn arrive(&mut self, a: usize, now: Minute) -> Result<()> {
        let State::Trip {
            trip, origin, depart, ..
        } = self.agents[a].state
        else {
            unreachable!("arrival outside a trip");
        };
        self.record_trip(a, &trip, origin, depart, now);
        self.en_route -= 1;
        let home_activity = self.program(a).activities()[trip.next].purpose == Purpose::Home;
        let agent = &mut self.agents[a];
        agent.zone = trip.destination;
        agent.previous_mode = Some(trip.mode);
        if home_activity {
            if agent.holds_car && self.pools[agent.household].give_back(agent.id) {
                agent.holds_car = false;
                agent.car_returns += 1;
            }
            if agent.station_car {
                fleet_mut(&mut self.fleet)?.return_station(agent.home);
                agent.station_car = false;
            }
        }
        if agent.freefloat_car && fleet_mut(&mut self.fleet)?.try_drop_freefloat(trip.destination) {
            agent.freefloat_car = false;
        }
        self.start_activity(a, trip.next, now, false);
        Ok(())
    }

    fn wait_window(&self, now: Minute, until: Minute) -> Minute {
        min(now + self.options.rideshare.check_interval_min, until)
    }

    /// Looks for a ride departing in `[now, latest]`; true if one was taken.
    fn try_ride(
        &mut self,
        a: usize,
        cursor: Option<usize>,
        mut trip: PlannedTrip,
        now: Minute,
        latest: Minute,
        until: Minute,
    ) -> bool {
        let request = RideRequest {
            passenger: self.agents[a].id,
            origin: self.agents[a].zone,
            destination: trip.destination,
            earliest: now,
            latest,
        };
        let Some(offer) = self.book.accept(&request) else {
            return false;
        };
        trip.ride = Some((offer.departure, offer.arrival));
        trip.needs_ride = false;
        if offer.departure == now {
            self.depart(a, trip, now);
        } else {
            self.set_state(
                a,
                State::Wait {
                    cursor,
                    trip,
                    until,
                    next_check: offer.departure,
                    departure: Some(offer.departure),
                },
            );
        }
        true
    }

    fn begin_wait(&mut self, a: usize, cursor: Option<usize>, trip: PlannedTrip, now: Minute) -> Result<()> {
        let until = now + self.options.rideshare.max_wait_min;
        if until == now {
            return self.fall_back(a, cursor, trip, now);
        }
        let latest = self.wait_window(now, until);
        if !self.try_ride(a, cursor, trip, now, latest, until) {
            self.set_state(
                a,
                State::Wait {
                    cursor,
                    trip,
                    until,
                    next_check: latest,
                    departure: None,
                },
            );
        }
        Ok(())
    }

    fn wait_step(&mut self, a: usize, now: Minute) -> Result<()> {
        let State::Wait {
            cursor,
            trip,
            until,
            departure,
            ..
        } = self.agents[a].state
        else {
            unreachable!("wait step outside the wait state");
        };
        if departure.is_some() {
            self.depart(a, trip, now);
            return Ok(());
        }
        let latest = self.wait_window(now, until);
        if self.try_ride(a, cursor, trip, now, latest, until) {
            return Ok(());
        }
        if now >= until {
            return self.fall_back(a, cursor, trip, now);
        }
        self.set_state(
            a,
            State::Wait {
                cursor,
                trip,
                until,
                next_check: latest,
                departure: None,
            },
        );
        Ok(())
    }

    /// No ride found: choose again without car as passenger and leave now.
    fn fall_back(&mut self, a: usize, cursor: Option<usize>, trip: PlannedTrip, now: Minute) -> Result<()> {
        self.book.record_fallback();
        let mode = self.choose_mode(
            a,
            cursor,
            trip.next,
            trip.destination,
            now,
            ModeSet::of(&[Mode::CarPassenger]),
        )?;
        let travel = travel_minutes(self.world.travel(mode, self.agents[a].zone, trip.destination)?.time);
        self.commit_vehicle(a, mode)?;
        if mode == Mode::CarDriver {
            self.post_offer(a, trip.destination, now, travel);
        }
        let trip = PlannedTrip {
            mode,
            travel,
            ride: None,
            needs_ride: false,
            ..trip
        };
        self.depart(a, trip, now);
        Ok(())
    }

    fn finish(mut self) -> SimulationOutput {
        let horizon = self.options.horizon;
        let mut unfinished = 0;
        for a in 0..self.agents.len() {
            if let State::Trip {
                trip,
                origin,
                depart,
                arrives_at,
            } = self.agents[a].state
            {
                self.record_trip(a, &trip, origin, depart, arrives_at);
                unfinished += 1;
            }
        }
        self.trips.sort_by_key(|t| (t.depart, t.person));

        let started: BTreeSet<(PersonId, usize, Minute)> = self
            .activities
            .iter()
            .map(|r| (r.person, r.index, r.actual_start))
            .collect();
        let mut late_day_starts = 0;
        let mut agents = Vec::with_capacity(self.agents.len());
        for (a, agent) in self.agents.iter().enumerate() {
            let program = self.program(a);
            for (k, act) in program.activities().iter().enumerate() {
                if act.day() >= 1
                    && act.planned_start < horizon
                    && program.starts_day(k)
                    && !started.contains(&(agent.id, k, act.planned_start))
                {
                    late_day_starts += 1;
                }
            }
            let ends_at_home = agent.zone == agent.home
                && match agent.state {
                    State::Activity { cursor, .. } => self.at_home(a, cursor),
                    State::Finished => true,
                    _ => false,
                };
            agents.push(AgentSummary {
                person: agent.id,
                car_takes: agent.car_takes,
                car_returns: agent.car_returns,
                ends_at_home,
            });
        }
        let stats = SimulationStats {
            late_day_starts,
            car_takes: self.pools.iter().map(CarPool::takes).sum(),
            car_returns: self.pools.iter().map(CarPool::returns).sum(),
            unfinished_trips: unfinished,
            ride: self.book.stats(),
            fleet: self.fleet.as_ref().map(CarsharingFleet::stats).unwrap_or_default(),
        };
        SimulationOutput {
            trips: self.trips,
            activities: self.activities,
            en_route: self.series,
            agents,
            stats,
        }
    }
}

fn fleet_mut(fleet: &mut Option<CarsharingFleet>) -> Result<&mut CarsharingFleet> {
    fleet
        .as_mut()
        .ok_or_else(|| Error::Invalid("carsharing mode chosen with the extension disabled".into()))
}
