//! Pipeline stages shared by the command-line subcommands. Each stage reads
//! its inputs from the scenario or from the artifacts of the previous stage
//! and writes its own artifacts to the output directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use weeksim_core::categories::{Employment, Purpose};
use weeksim_core::engine::{simulate_week, Models, Rescheduling, SimulationOptions, SimulationOutput};
use weeksim_core::extensions::Extensions;
use weeksim_core::longterm::{assign_long_term, LongTermAssignment};
use weeksim_core::output::DistanceBins;
use weeksim_core::population::{synthesize, IpfOptions, Population, Survey, ZoneMarginals};
use weeksim_core::world::{CommutingKind, World};

use crate::artifacts::{self, RunMeta};
use crate::manifest::Manifest;
use crate::report::{self, ReportTotals};
use crate::scenario::{self, ChoiceModels};

/// Command-line settings that take precedence over the manifest.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub rescheduling: Option<Rescheduling>,
    pub extensions: Option<Extensions>,
    pub travel_time_scale: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

pub struct Pipeline {
    pub manifest: Manifest,
    pub meta: RunMeta,
    out: PathBuf,
}

/// Scenario inputs after validation.
pub struct Inputs {
    pub world: World,
    pub models: ChoiceModels,
    pub survey: Survey,
    pub marginals: Vec<ZoneMarginals>,
    pub fleet: Vec<(weeksim_core::world::ZoneIdx, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub zones: usize,
    pub modes: usize,
    pub survey_households: usize,
    pub survey_persons: usize,
    pub marginal_zones: usize,
}

impl Pipeline {
    pub fn new(manifest_path: &Path, overrides: &Overrides) -> Result<Pipeline> {
        let mut manifest = Manifest::load(manifest_path)?;
        if let Some(scale) = overrides.travel_time_scale {
            if !(scale.is_finite() && scale > 0.0) {
                bail!("travel time scale must be positive, got {scale}");
            }
            manifest.world.travel_time_scale = scale;
        }
        let meta = RunMeta {
            population_seed: manifest.population.seed,
            seed: overrides.seed.unwrap_or(manifest.engine.seed),
            rescheduling: match overrides.rescheduling {
                Some(r) => r,
                None => manifest.rescheduling()?,
            },
            extensions: match overrides.extensions {
                Some(e) => e,
                None => manifest.extensions()?,
            },
            travel_time_scale: manifest.world.travel_time_scale,
        };
        let out = match &overrides.output_dir {
            Some(d) => d.clone(),
            None => manifest.output_dir(),
        };
        Ok(Pipeline { manifest, meta, out })
    }

    pub fn output_dir(&self) -> &Path {
        &self.out
    }

    fn meta_line(&self) -> String {
        self.meta.to_string()
    }

    /// Loads every scenario input and checks cross-references.
    pub fn load_inputs(&self) -> Result<Inputs> {
        let m = &self.manifest;
        let world = scenario::load_world(m)?;
        let models = scenario::load_models(m)?;
        let survey = scenario::load_survey(m)?;
        let marginals_path = m.path(&m.population.marginals);
        let marginals = scenario::read_marginals(&marginals_path)?;
        let fleet = if self.meta.extensions.carsharing {
            scenario::load_fleet(m, &world)?
        } else {
            Vec::new()
        };

        let mut needed = scenario::required_modes(self.meta.extensions.carsharing);
        needed.push(models.destination.skim_mode());
        for mode in needed {
            if !world.has_mode(mode) {
                bail!("no skim matrices for mode `{mode}` (required by the enabled models)");
            }
        }
        for zm in &marginals {
            world
                .index_of(zm.zone)
                .map_err(|e| anyhow!("{}: {e}", marginals_path.display()))?;
        }
        let types: BTreeSet<&str> = survey.households.iter().map(|h| h.household_type.as_str()).collect();
        for zm in &marginals {
            for (ty, &n) in &zm.household_types {
                if n > 0.0 && !types.contains(ty.as_str()) {
                    bail!(
                        "{}: zone {} targets household type `{ty}` absent from the survey",
                        marginals_path.display(),
                        zm.zone
                    );
                }
            }
        }
        check_coverage(m, &world, &models, &survey)?;
        Ok(Inputs {
            world,
            models,
            survey,
            marginals,
            fleet,
        })
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let inputs = self.load_inputs()?;
        Ok(ValidationReport {
            zones: inputs.world.zone_count(),
            modes: inputs.world.skims().modes().count(),
            survey_households: inputs.survey.households.len(),
            survey_persons: inputs.survey.households.iter().map(|h| h.members.len()).sum(),
            marginal_zones: inputs.marginals.len(),
        })
    }

    pub fn synthesize(&self) -> Result<Population> {
        let inputs = self.load_inputs()?;
        let p = &self.manifest.population;
        let options = IpfOptions {
            tolerance: p.ipf_tolerance,
            max_iterations: p.ipf_max_iterations,
        };
        let synthesis =
            synthesize(&inputs.survey, &inputs.marginals, options, p.seed).context("population synthesis failed")?;
        for (zone, fit) in &synthesis.fits {
            if !fit.converged {
                eprintln!(
                    "warning: IPF for zone {zone} stopped after {} iterations with relative deviation {:.3e}",
                    fit.iterations, fit.max_deviation
                );
            }
        }
        let meta = self.meta_line();
        artifacts::write_population(&self.out, &meta, &synthesis.population)?;
        artifacts::write_ipf_report(&self.out, &meta, &synthesis.fits)?;
        Ok(synthesis.population)
    }

    pub fn read_population(&self) -> Result<Population> {
        artifacts::read_population(&self.out).context("cannot read the synthetic population (run `synthesize` first)")
    }

    pub fn longterm(&self) -> Result<LongTermAssignment> {
        let inputs = self.load_inputs()?;
        let population = self.read_population()?;
        let p = &self.manifest.population;
        let assignment = assign_long_term(
            &inputs.world,
            &population,
            &inputs.models.transit_pass,
            p.electric_share,
            p.seed,
        )
        .context("long-term assignment failed")?;
        artifacts::write_longterm(&self.out, &self.meta_line(), &assignment)?;
        Ok(assignment)
    }

    pub fn read_longterm(&self, population: &Population) -> Result<LongTermAssignment> {
        artifacts::read_longterm(&self.out, population)
            .context("cannot read long-term assignments (run `longterm` first)")
    }

    pub fn options(&self, fleet: Vec<(weeksim_core::world::ZoneIdx, u32)>) -> SimulationOptions {
        SimulationOptions {
            rescheduling: self.meta.rescheduling,
            extensions: self.meta.extensions,
            rideshare: self.manifest.rideshare(),
            freefloat_fleet: fleet,
            horizon: self.manifest.engine.horizon_min,
            ..SimulationOptions::default()
        }
    }

    pub fn simulate(&self) -> Result<SimulationOutput> {
        let inputs = self.load_inputs()?;
        let population = self.read_population()?;
        let assignment = self.read_longterm(&population)?;
        let options = self.options(inputs.fleet);
        let models = Models {
            mode: &inputs.models.mode,
            destination: &inputs.models.destination,
        };
        let output = simulate_week(
            &inputs.world,
            &population,
            &assignment,
            models,
            &options,
            self.meta.seed,
        )
        .context("simulation failed")?;
        let meta = self.meta_line();
        artifacts::write_trips(&self.out.join(artifacts::TRIPS), &meta, &output.trips)?;
        artifacts::write_summary(
            &self.out.join(artifacts::SUMMARY),
            &meta,
            output.trips.len(),
            &output.stats,
        )?;
        Ok(output)
    }

    pub fn analyze(&self) -> Result<ReportTotals> {
        let trips_path = self.out.join(artifacts::TRIPS);
        let trips = artifacts::read_trips(&trips_path).context("cannot read the trip file (run `simulate` first)")?;
        let meta = RunMeta::read(&trips_path)?.to_string();
        let world = scenario::load_world(&self.manifest)?;
        let population = self.read_population()?;
        let bins = match &self.manifest.output.distance_bins {
            Some(edges) => DistanceBins::new(edges.clone())?,
            None => DistanceBins::default(),
        };
        report::write_all(
            &self.out,
            &meta,
            &trips,
            &world,
            &population,
            &bins,
            self.manifest.engine.horizon_min,
        )
    }

    pub fn all(&self) -> Result<ReportTotals> {
        self.synthesize()?;
        self.longterm()?;
        self.simulate()?;
        self.analyze()
    }
}

/// Checks that the models cover every category the survey can produce.
fn check_coverage(manifest: &Manifest, world: &World, models: &ChoiceModels, survey: &Survey) -> Result<()> {
    let listed: BTreeSet<Purpose> = scenario::purposes(manifest)?.into_iter().collect();
    let mut districts: BTreeSet<Option<&str>> = world.zones().iter().map(|z| z.district.as_deref()).collect();
    if districts.is_empty() {
        districts.insert(None);
    }
    let mut flexible: BTreeSet<Purpose> = BTreeSet::new();
    let mut choosers: BTreeSet<Employment> = BTreeSet::new();
    let mut needs = BTreeSet::new();
    for h in &survey.households {
        for p in &h.members {
            for a in p.program.activities() {
                if !listed.contains(&a.purpose) {
                    bail!(
                        "survey person {} uses purpose `{}` not listed in world.purposes",
                        p.id,
                        a.purpose
                    );
                }
                if !a.purpose.is_fixed_location() {
                    flexible.insert(a.purpose);
                    choosers.insert(p.attributes.employment);
                }
                match a.purpose {
                    Purpose::Work => needs.insert(CommutingKind::Work),
                    Purpose::Education => needs.insert(CommutingKind::Education),
                    _ => false,
                };
            }
            for d in &districts {
                models
                    .transit_pass
                    .linear_predictor(&p.attributes, h.members.len(), h.n_cars, *d)
                    .with_context(|| format!("transit pass model cannot score survey person {}", p.id))?;
            }
        }
    }
    let dest = &models.destination;
    for &purpose in &flexible {
        dest.purpose_coefficients(purpose)?;
        dest.gamma_purpose(purpose)?;
    }
    for &e in &choosers {
        dest.time_employment(e)?;
        dest.gamma_employment(e)?;
    }
    for kind in needs {
        if world.commuting(kind).is_none() {
            bail!(
                "the survey has {} activities but world.commuting_{} is not set",
                kind.as_str(),
                kind.as_str()
            );
        }
    }
    Ok(())
}
