//! Scenario manifest. Unknown keys are rejected; relative paths resolve
//! against the manifest's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use weeksim_core::categories::Mode;
use weeksim_core::engine::Rescheduling;
use weeksim_core::extensions::{Extensions, RideshareOptions};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub world: WorldSection,
    pub population: PopulationSection,
    pub choice: ChoiceSection,
    #[serde(default)]
    pub engine: EngineSection,
    #[serde(default)]
    pub extensions: ExtensionsSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(skip)]
    pub base: PathBuf,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldSection {
    pub zones: PathBuf,
    pub modes: Vec<String>,
    pub purposes: Vec<String>,
    pub distance: PathBuf,
    /// Travel time matrix per mode id.
    pub time: BTreeMap<String, PathBuf>,
    /// Travel cost matrix per mode id.
    pub cost: BTreeMap<String, PathBuf>,
    pub commuting_work: Option<PathBuf>,
    pub commuting_education: Option<PathBuf>,
    #[serde(default = "one")]
    pub travel_time_scale: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSection {
    pub survey_households: PathBuf,
    pub survey_persons: PathBuf,
    pub survey_activities: PathBuf,
    pub marginals: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub ipf_tolerance: f64,
    #[serde(default = "default_iterations")]
    pub ipf_max_iterations: usize,
    #[serde(default)]
    pub electric_share: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceSection {
    pub mode_choice: PathBuf,
    pub dest_choice: PathBuf,
    pub dest_scaling: PathBuf,
    pub transit_pass: PathBuf,
    #[serde(default = "default_skim_mode")]
    pub destination_skim_mode: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSection {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rescheduling: String,
    #[serde(default = "default_horizon")]
    pub horizon_min: u32,
}

impl Default for EngineSection {
    fn default() -> Self {
        EngineSection {
            seed: 0,
            rescheduling: String::new(),
            horizon_min: default_horizon(),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionsSection {
    #[serde(default)]
    pub enabled: Vec<String>,
    #[serde(default)]
    pub rideshare: RideshareSection,
    #[serde(default)]
    pub carsharing: CarsharingSection,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RideshareSection {
    pub lookahead_min: u32,
    pub max_wait_min: u32,
    pub check_interval_min: u32,
    pub seats: u32,
}

impl Default for RideshareSection {
    fn default() -> Self {
        let d = RideshareOptions::default();
        RideshareSection {
            lookahead_min: d.lookahead_min,
            max_wait_min: d.max_wait_min,
            check_interval_min: d.check_interval_min,
            seats: d.seats,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarsharingSection {
    /// Free-floating cars per zone at the start of the week.
    pub fleet: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_output_dir")]
    pub dir: PathBuf,
    pub distance_bins: Option<Vec<f64>>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: default_output_dir(),
            distance_bins: None,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_tolerance() -> f64 {
    1e-4
}

fn default_iterations() -> usize {
    1000
}

fn default_skim_mode() -> String {
    Mode::CarDriver.as_str().to_string()
}

fn default_horizon() -> u32 {
    weeksim_core::clock::MINUTES_PER_WEEK
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mut manifest: Manifest = toml::from_str(&text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1).unwrap_or(0);
            anyhow::anyhow!("{}:{line}: {}", path.display(), e.message())
        })?;
        manifest.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        manifest
            .check()
            .with_context(|| format!("invalid manifest {}", path.display()))?;
        Ok(manifest)
    }

    /// Resolves a manifest path.
    pub fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.path(&self.output.dir)
    }

    pub fn rescheduling(&self) -> Result<Rescheduling> {
        if self.engine.rescheduling.is_empty() {
            return Ok(Rescheduling::default());
        }
        Ok(self.engine.rescheduling.parse()?)
    }

    pub fn extensions(&self) -> Result<Extensions> {
        parse_extensions(&self.extensions.enabled)
    }

    pub fn rideshare(&self) -> RideshareOptions {
        let r = &self.extensions.rideshare;
        RideshareOptions {
            lookahead_min: r.lookahead_min,
            max_wait_min: r.max_wait_min,
            check_interval_min: r.check_interval_min,
            seats: r.seats,
        }
    }

    pub fn modes(&self) -> Result<Vec<Mode>> {
        self.world
            .modes
            .iter()
            .map(|m| m.parse::<Mode>().map_err(Into::into))
            .collect()
    }

    fn check(&self) -> Result<()> {
        let modes = self.modes()?;
        for m in self.world.time.keys().chain(self.world.cost.keys()) {
            let mode: Mode = m.parse()?;
            if !modes.contains(&mode) {
                bail!("matrix given for mode `{m}` not listed in world.modes");
            }
        }
        for m in &modes {
            if !self.world.time.contains_key(m.as_str()) {
                bail!("world.time has no matrix for mode `{m}`");
            }
            if !self.world.cost.contains_key(m.as_str()) {
                bail!("world.cost has no matrix for mode `{m}`");
            }
        }
        for p in &self.world.purposes {
            p.parse::<weeksim_core::categories::Purpose>()?;
        }
        if !(self.world.travel_time_scale.is_finite() && self.world.travel_time_scale > 0.0) {
            bail!("world.travel_time_scale must be positive");
        }
        if !(0.0..=1.0).contains(&self.population.electric_share) {
            bail!("population.electric_share must lie in [0, 1]");
        }
        if !(self.population.ipf_tolerance > 0.0) {
            bail!("population.ipf_tolerance must be positive");
        }
        self.choice.destination_skim_mode.parse::<Mode>()?;
        self.rescheduling()?;
        self.extensions()?;
        if self.engine.horizon_min == 0 || self.engine.horizon_min > weeksim_core::clock::MINUTES_PER_WEEK {
            bail!("engine.horizon_min must lie in 1..=10080");
        }
        if self.extensions.rideshare.check_interval_min == 0 {
            bail!("extensions.rideshare.check_interval_min must be positive");
        }
        if let Some(edges) = &self.output.distance_bins {
            weeksim_core::output::DistanceBins::new(edges.clone())?;
        }
        Ok(())
    }
}

/// Extension names, `none` for the empty set.
pub fn parse_extensions<S: AsRef<str>>(names: &[S]) -> Result<Extensions> {
    let mut ext = Extensions::default();
    for name in names {
        match name.as_ref().trim() {
            "ridesharing" => ext.ridesharing = true,
            "carsharing" => ext.carsharing = true,
            "none" | "" => {}
            other => bail!("unknown extension `{other}` (expected ridesharing, carsharing or none)"),
        }
    }
    Ok(ext)
}

pub fn extensions_label(ext: Extensions) -> String {
    let mut names = Vec::new();
    if ext.ridesharing {
        names.push("ridesharing");
    }
    if ext.carsharing {
        names.push("carsharing");
    }
    if names.is_empty() {
        "none".into()
    } else {
        names.join(",")
    }
}
