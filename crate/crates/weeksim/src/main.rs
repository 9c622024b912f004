use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use weeksim::manifest::parse_extensions;
use weeksim::{Overrides, Pipeline};
use weeksim_core::engine::Rescheduling;

#[derive(Parser)]
#[command(name = "weeksim", version, about = "Week-long agent-based travel demand simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every scenario file without writing anything.
    Validate(Common),
    /// Fit and draw the synthetic population.
    Synthesize(Common),
    /// Assign workplaces, school places, cars and transit passes.
    Longterm(Common),
    /// Simulate the week and write the trip file.
    Simulate(Common),
    /// Aggregate the trip file.
    Analyze(Common),
    /// Run every stage in order.
    All(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario manifest.
    manifest: PathBuf,
    /// Simulation seed.
    #[arg(long)]
    seed: Option<u64>,
    /// none, truncate_day or skip_keep_last.
    #[arg(long)]
    rescheduling: Option<Rescheduling>,
    /// Comma-separated: ridesharing, carsharing, or none.
    #[arg(long, value_delimiter = ',')]
    extensions: Option<Vec<String>>,
    /// Factor applied to every travel time matrix.
    #[arg(long)]
    travel_time_scale: Option<f64>,
    /// Output directory, instead of the manifest's.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn pipeline(&self) -> Result<Pipeline> {
        let overrides = Overrides {
            seed: self.seed,
            rescheduling: self.rescheduling,
            extensions: self.extensions.as_deref().map(parse_extensions).transpose()?,
            travel_time_scale: self.travel_time_scale,
            output_dir: self.out.clone(),
        };
        Pipeline::new(&self.manifest, &overrides)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate(c) => {
            let r = c.pipeline()?.validate()?;
            println!(
                "ok: {} zones, {} modes, {} survey households, {} survey persons, {} marginal zones",
                r.zones, r.modes, r.survey_households, r.survey_persons, r.marginal_zones
            );
        }
        Command::Synthesize(c) => {
            let p = c.pipeline()?;
            let pop = p.synthesize()?;
            println!(
                "{} households, {} persons -> {}",
                pop.households().len(),
                pop.persons().len(),
                p.output_dir().display()
            );
        }
        Command::Longterm(c) => {
            let p = c.pipeline()?;
            let a = p.longterm()?;
            let passes = a.persons.values().filter(|x| x.transit_pass).count();
            println!(
                "{} persons, {passes} transit passes -> {}",
                a.persons.len(),
                p.output_dir().display()
            );
        }
        Command::Simulate(c) => {
            let p = c.pipeline()?;
            let out = p.simulate()?;
            println!(
                "{} trips, {} late day starts -> {}",
                out.trips.len(),
                out.stats.late_day_starts,
                p.output_dir().display()
            );
        }
        Command::Analyze(c) => {
            let p = c.pipeline()?;
            let t = p.analyze()?;
            println!(
                "{} trips in {} OD matrices -> {}",
                t.od,
                t.od_files,
                p.output_dir().display()
            );
        }
        Command::All(c) => {
            let p = c.pipeline()?;
            let t = p.all()?;
            println!(
                "{} trips in {} OD matrices -> {}",
                t.od,
                t.od_files,
                p.output_dir().display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
