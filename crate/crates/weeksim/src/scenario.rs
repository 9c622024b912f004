//! Readers for scenario inputs: zones, matrices, parameter tables, survey,
//! marginals and the carsharing fleet.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use weeksim_core::activity::{Activity, ActivityProgram};
use weeksim_core::categories::{Mode, Purpose};
use weeksim_core::choice::{DestinationChoiceParams, ModeChoiceParams};
use weeksim_core::longterm::TransitPassModel;
use weeksim_core::params::CoefficientRow;
use weeksim_core::population::{
    PersonAttributes, PersonCategory, Survey, SurveyHousehold, SurveyPerson, ZoneMarginals,
};
use weeksim_core::world::{CommutingKind, CommutingMatrix, Matrix, SkimMatrixSet, World, Zone, ZoneId, ZoneIdx};

use crate::manifest::Manifest;
use crate::table::{Row, Table};

pub const ATTR_PREFIX: &str = "attr_";
pub const HOUSEHOLD_PREFIX: &str = "household:";

pub fn read_zones(path: &Path, purposes: &[Purpose]) -> Result<Vec<Zone>> {
    let t = Table::read(path)?;
    t.require(&["zone_id", "freefloating", "stations"])?;
    for col in t.header() {
        if let Some(p) = col.strip_prefix(ATTR_PREFIX) {
            p.parse::<Purpose>()
                .with_context(|| format!("{}: column `{col}`", path.display()))?;
        }
    }
    for p in purposes {
        if !t.has(&format!("{ATTR_PREFIX}{p}")) && !p.is_fixed_location() {
            bail!("{}: no column `{ATTR_PREFIX}{p}` for listed purpose", path.display());
        }
    }
    let mut zones = Vec::with_capacity(t.len());
    for row in t.rows() {
        let mut zone = Zone::new(ZoneId(row.parse("zone_id")?));
        zone.freefloating = row.flag("freefloating")?;
        zone.stations = row.parse("stations")?;
        if t.has("district") {
            let d = row.str("district")?;
            if !d.is_empty() {
                zone.district = Some(d.to_string());
            }
        }
        for col in t.header() {
            if let Some(p) = col.strip_prefix(ATTR_PREFIX) {
                let a: f64 = row.parse(col)?;
                if !(a.is_finite() && a >= 0.0) {
                    bail!(
                        "{}: column `{col}`: attractivity must be non-negative, got {a}",
                        row.at()
                    );
                }
                zone.attractivity.insert(p.parse()?, a);
            }
        }
        zones.push(zone);
    }
    Ok(zones)
}

/// Square matrix whose first row and column hold zone ids, reordered to the
/// order of `zones`.
pub fn read_matrix(path: &Path, zones: &[ZoneId]) -> Result<Matrix> {
    let t = Table::read(path)?;
    let n = zones.len();
    let position: BTreeMap<ZoneId, usize> = zones.iter().enumerate().map(|(k, z)| (*z, k)).collect();
    let cols = t.header()[1..]
        .iter()
        .map(|h| {
            let id = ZoneId(
                h.parse()
                    .map_err(|_| anyhow!("{}: header cell `{h}` is not a zone id", path.display()))?,
            );
            position
                .get(&id)
                .copied()
                .ok_or_else(|| anyhow!("{}: header names unknown zone {id}", path.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    if cols.len() != n || t.len() != n {
        bail!(
            "{}: expected a {n}x{n} matrix, got {} rows with {} columns",
            path.display(),
            t.len(),
            cols.len()
        );
    }
    if cols.iter().collect::<BTreeSet<_>>().len() != n {
        bail!("{}: header repeats a zone id", path.display());
    }
    let mut m = Matrix::zeros(n);
    let mut seen = vec![false; n];
    for row in t.rows() {
        if row.width() != n + 1 {
            bail!("{}: expected {} fields, got {}", row.at(), n + 1, row.width());
        }
        let raw = row.cell(0)?;
        let id = ZoneId(
            raw.parse()
                .map_err(|_| anyhow!("{}: `{raw}` is not a zone id", row.at()))?,
        );
        let i = *position
            .get(&id)
            .ok_or_else(|| anyhow!("{}: unknown zone {id}", row.at()))?;
        if std::mem::replace(&mut seen[i], true) {
            bail!("{}: zone {id} appears twice", row.at());
        }
        for (k, &j) in cols.iter().enumerate() {
            let cell = row.cell(k + 1)?;
            let v: f64 = cell
                .parse()
                .map_err(|_| anyhow!("{}: column {}: `{cell}` is not a number", row.at(), k + 2))?;
            if !(v.is_finite() && v >= 0.0) {
                bail!("{}: column {}: entry must be non-negative, got {v}", row.at(), k + 2);
            }
            m.set(i, j, v);
        }
    }
    Ok(m)
}

pub fn load_world(manifest: &Manifest) -> Result<World> {
    let w = &manifest.world;
    let purposes = purposes(manifest)?;
    let zones = read_zones(&manifest.path(&w.zones), &purposes)?;
    let ids: Vec<ZoneId> = zones.iter().map(|z| z.id).collect();
    let mut skims = SkimMatrixSet::new(read_matrix(&manifest.path(&w.distance), &ids)?);
    for mode in manifest.modes()? {
        let time = read_matrix(&manifest.path(&w.time[mode.as_str()]), &ids)?;
        let cost = read_matrix(&manifest.path(&w.cost[mode.as_str()]), &ids)?;
        skims.insert(mode, time, cost);
    }
    let mut world = World::new(zones, skims).context("invalid world")?;
    for (kind, file) in [
        (CommutingKind::Work, &w.commuting_work),
        (CommutingKind::Education, &w.commuting_education),
    ] {
        if let Some(file) = file {
            let counts = read_matrix(&manifest.path(file), &ids)?;
            world = world.with_commuting(CommutingMatrix { kind, counts })?;
        }
    }
    if w.travel_time_scale != 1.0 {
        world = world.with_time_scale(w.travel_time_scale);
    }
    Ok(world)
}

pub fn purposes(manifest: &Manifest) -> Result<Vec<Purpose>> {
    manifest
        .world
        .purposes
        .iter()
        .map(|p| p.parse::<Purpose>().map_err(Into::into))
        .collect()
}

/// Rows with columns (coefficient, category, subcategory, estimate, calibration).
pub fn read_params(path: &Path) -> Result<Vec<CoefficientRow>> {
    let t = Table::read(path)?;
    t.require(&["coefficient", "category", "estimate"])?;
    t.rows()
        .map(|row| {
            let estimate: f64 = row.parse("estimate")?;
            let calibration: f64 = row.parse_or("calibration", 0.0)?;
            if !estimate.is_finite() || !calibration.is_finite() {
                bail!("{}: non-finite coefficient", row.at());
            }
            let sub = if t.has("subcategory") {
                row.str("subcategory")?
            } else {
                ""
            };
            Ok(
                CoefficientRow::new(row.str("coefficient")?, row.str("category")?, sub, estimate)
                    .calibrated(calibration),
            )
        })
        .collect()
}

pub struct ChoiceModels {
    pub mode: ModeChoiceParams,
    pub destination: DestinationChoiceParams,
    pub transit_pass: TransitPassModel,
}

pub fn load_models(manifest: &Manifest) -> Result<ChoiceModels> {
    let c = &manifest.choice;
    let load = |p: &Path| -> Result<(std::path::PathBuf, Vec<CoefficientRow>)> {
        let path = manifest.path(p);
        let rows = read_params(&path)?;
        Ok((path, rows))
    };
    let (mp, mode_rows) = load(&c.mode_choice)?;
    let mode = ModeChoiceParams::from_rows(&mode_rows).with_context(|| format!("{}", mp.display()))?;
    let (dp, dest_rows) = load(&c.dest_choice)?;
    let (sp, scale_rows) = load(&c.dest_scaling)?;
    let destination = DestinationChoiceParams::from_rows(&dest_rows, &scale_rows)
        .with_context(|| format!("{} / {}", dp.display(), sp.display()))?
        .with_skim_mode(c.destination_skim_mode.parse()?);
    let (tp, transit_rows) = load(&c.transit_pass)?;
    let transit_pass = TransitPassModel::from_rows(&transit_rows).with_context(|| format!("{}", tp.display()))?;
    Ok(ChoiceModels {
        mode,
        destination,
        transit_pass,
    })
}

pub fn parse_attributes(row: &Row<'_>) -> Result<PersonAttributes> {
    let cat = |col: &str| -> Result<String> { Ok(row.str(col)?.to_string()) };
    let wrap = |col: &str, e: weeksim_core::Error| anyhow!("{}: column `{col}`: {e}", row.at());
    Ok(PersonAttributes {
        sex: cat("sex")?.parse().map_err(|e| wrap("sex", e))?,
        age: cat("age_group")?.parse().map_err(|e| wrap("age_group", e))?,
        employment: cat("employment")?.parse().map_err(|e| wrap("employment", e))?,
        has_license: row.flag("license")?,
        car_availability: cat("car_availability")?
            .parse()
            .map_err(|e| wrap("car_availability", e))?,
    })
}

pub const PERSON_ATTRIBUTE_COLUMNS: [&str; 5] = ["sex", "age_group", "employment", "license", "car_availability"];

/// Activities per person id, in file order.
pub fn read_activities(path: &Path) -> Result<BTreeMap<u32, ActivityProgram>> {
    let t = Table::read(path)?;
    t.require(&["person_id", "purpose", "start_min", "duration_min"])?;
    let mut raw: BTreeMap<u32, (u64, Vec<Activity>)> = BTreeMap::new();
    for row in t.rows() {
        let person: u32 = row.parse("person_id")?;
        let purpose: Purpose = row
            .str("purpose")?
            .parse()
            .map_err(|e| anyhow!("{}: column `purpose`: {e}", row.at()))?;
        let a = Activity::new(purpose, row.parse("start_min")?, row.parse("duration_min")?);
        raw.entry(person).or_insert_with(|| (row.line(), Vec::new())).1.push(a);
    }
    raw.into_iter()
        .map(|(person, (line, acts))| {
            let program = ActivityProgram::new(person, acts).map_err(|e| anyhow!("{}:{line}: {e}", path.display()))?;
            Ok((person, program))
        })
        .collect()
}

pub fn load_survey(manifest: &Manifest) -> Result<Survey> {
    let p = &manifest.population;
    let hh_path = manifest.path(&p.survey_households);
    let persons_path = manifest.path(&p.survey_persons);
    let mut programs = read_activities(&manifest.path(&p.survey_activities))?;

    let hh = Table::read(&hh_path)?;
    hh.require(&["household_id", "household_type", "n_cars"])?;
    let mut households: BTreeMap<u32, SurveyHousehold> = BTreeMap::new();
    let mut order = Vec::new();
    for row in hh.rows() {
        let id: u32 = row.parse("household_id")?;
        let h = SurveyHousehold {
            id,
            household_type: row.str("household_type")?.to_string(),
            n_cars: row.parse("n_cars")?,
            members: Vec::new(),
        };
        if households.insert(id, h).is_some() {
            bail!("{}: duplicate household {id}", row.at());
        }
        order.push(id);
    }

    let persons = Table::read(&persons_path)?;
    persons.require(&["person_id", "household_id", "commute_km"])?;
    persons.require(&PERSON_ATTRIBUTE_COLUMNS)?;
    let mut seen = BTreeSet::new();
    for row in persons.rows() {
        let id: u32 = row.parse("person_id")?;
        if !seen.insert(id) {
            bail!("{}: duplicate person {id}", row.at());
        }
        let hid: u32 = row.parse("household_id")?;
        let program = programs
            .remove(&id)
            .ok_or_else(|| anyhow!("{}: person {id} has no activities", row.at()))?;
        let commute_km: f64 = row.parse("commute_km")?;
        if !(commute_km.is_finite() && commute_km >= 0.0) {
            bail!("{}: commute_km must be non-negative", row.at());
        }
        let person = SurveyPerson {
            id,
            attributes: parse_attributes(&row)?,
            commute_km,
            program,
        };
        households
            .get_mut(&hid)
            .ok_or_else(|| anyhow!("{}: unknown household {hid}", row.at()))?
            .members
            .push(person);
    }
    if let Some(id) = programs.keys().next() {
        bail!(
            "{}: activities for unknown person {id}",
            manifest.path(&p.survey_activities).display()
        );
    }
    let list = order.into_iter().map(|id| households.remove(&id).unwrap()).collect();
    Survey::new(list).with_context(|| format!("{}", hh_path.display()))
}

/// One row per zone: `zone_id`, `household:<type>` columns and person
/// columns such as `sex:female`.
pub fn read_marginals(path: &Path) -> Result<Vec<ZoneMarginals>> {
    let t = Table::read(path)?;
    t.require(&["zone_id"])?;
    enum Col {
        Household(String),
        Person(PersonCategory),
    }
    let mut cols = Vec::new();
    for name in t.header().iter().filter(|h| *h != "zone_id") {
        let col = match name.strip_prefix(HOUSEHOLD_PREFIX) {
            Some(ty) => Col::Household(ty.to_string()),
            None => Col::Person(
                name.parse()
                    .with_context(|| format!("{}: column `{name}`", path.display()))?,
            ),
        };
        cols.push((name.clone(), col));
    }
    let mut out = Vec::with_capacity(t.len());
    let mut ids = BTreeSet::new();
    for row in t.rows() {
        let zone = ZoneId(row.parse("zone_id")?);
        if !ids.insert(zone) {
            bail!("{}: duplicate zone {zone}", row.at());
        }
        let mut m = ZoneMarginals {
            zone,
            ..ZoneMarginals::default()
        };
        for (name, col) in &cols {
            let v: f64 = row.parse(name)?;
            if !(v.is_finite() && v >= 0.0) {
                bail!("{}: column `{name}`: count must be non-negative", row.at());
            }
            match col {
                Col::Household(ty) => {
                    m.household_types.insert(ty.clone(), v);
                }
                Col::Person(c) => {
                    m.persons.insert(*c, v);
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// Free-floating cars per zone: columns `zone_id`, `cars`.
pub fn read_fleet(path: &Path, world: &World) -> Result<Vec<(ZoneIdx, u32)>> {
    let t = Table::read(path)?;
    t.require(&["zone_id", "cars"])?;
    t.rows()
        .map(|row| {
            let id = ZoneId(row.parse("zone_id")?);
            let idx = world.index_of(id).map_err(|e| anyhow!("{}: {e}", row.at()))?;
            if !world.zone(idx).freefloating {
                bail!("{}: zone {id} lies outside the free-floating area", row.at());
            }
            Ok((idx, row.parse("cars")?))
        })
        .collect()
}

pub fn load_fleet(manifest: &Manifest, world: &World) -> Result<Vec<(ZoneIdx, u32)>> {
    match &manifest.extensions.carsharing.fleet {
        Some(p) => read_fleet(&manifest.path(p), world),
        None => Ok(Vec::new()),
    }
}

/// Modes the simulation needs skims for under the given extensions.
pub fn required_modes(carsharing: bool) -> Vec<Mode> {
    let mut modes = Mode::BASE.to_vec();
    if carsharing {
        modes.extend([Mode::CarsharingStation, Mode::CarsharingFreefloat]);
    }
    modes
}
