//! Writers for the aggregate outputs.

use std::path::Path;

use anyhow::{Context, Result};

use weeksim_core::categories::Mode;
use weeksim_core::clock::{Minute, Weekday};
use weeksim_core::engine::TripRecord;
use weeksim_core::output::{
    modal_split, od_matrices, persons_en_route, trip_length_distribution, DistanceBins, GroupBy, OdMatrix,
};
use weeksim_core::population::Population;
use weeksim_core::world::{World, ZoneIdx};

use crate::table::TableWriter;

pub const EN_ROUTE: &str = "en_route.csv";
pub const OD_DIR: &str = "od";

pub fn modal_split_file(group: GroupBy) -> String {
    format!("modal_split_{}.csv", group.as_str())
}

pub fn od_file(day: Weekday, hour: u32, mode: Mode) -> String {
    format!("{day}_{hour:02}_{mode}.csv")
}

/// Counts of what was written, for conservation checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportTotals {
    pub modal_split: u64,
    pub histogram: u64,
    pub od: u64,
    pub od_files: usize,
}

pub fn write_all(
    dir: &Path,
    meta: &str,
    trips: &[TripRecord],
    world: &World,
    population: &Population,
    bins: &DistanceBins,
    horizon: Minute,
) -> Result<ReportTotals> {
    let mut totals = ReportTotals::default();

    for &group in GroupBy::ALL {
        let rows = modal_split(trips, group, Some(population))?;
        let mut header = vec!["group", "trips"];
        header.extend(Mode::ALL.iter().map(|m| m.as_str()));
        let mut w = TableWriter::create(&dir.join(modal_split_file(group)), Some(meta), &header)?;
        for r in &rows {
            let mut fields = vec![r.group.clone(), r.total.to_string()];
            fields.extend(Mode::ALL.iter().map(|&m| r.share(m).to_string()));
            w.row(fields)?;
            if group == GroupBy::Purpose {
                totals.modal_split += r.total;
            }
        }
        w.finish()?;
    }

    for (purpose, counts) in trip_length_distribution(trips, bins) {
        let mut w = TableWriter::create(
            &dir.join(format!("tld_{purpose}.csv")),
            Some(meta),
            &["bin", "lower_km", "upper_km", "count"],
        )?;
        let edges = bins.edges();
        for (k, c) in counts.iter().enumerate() {
            let upper = edges.get(k + 1).map(|e| e.to_string()).unwrap_or_default();
            w.row([bins.label(k), edges[k].to_string(), upper, c.to_string()])?;
            totals.histogram += c;
        }
        w.finish()?;
    }

    let series = persons_en_route(trips, horizon);
    let mut w = TableWriter::create(&dir.join(EN_ROUTE), Some(meta), &["minute", "count", "day"])?;
    for (t, c) in series.iter().enumerate() {
        w.row([
            t.to_string(),
            c.to_string(),
            Weekday::of_minute(t as Minute).to_string(),
        ])?;
    }
    w.finish()?;

    let od_dir = dir.join(OD_DIR);
    if od_dir.exists() {
        std::fs::remove_dir_all(&od_dir).with_context(|| format!("cannot clear {}", od_dir.display()))?;
    }
    for ((mode, day, hour), m) in od_matrices(trips, world)? {
        write_od(&od_dir.join(od_file(day, hour, mode)), meta, &m, world)?;
        totals.od += m.total();
        totals.od_files += 1;
    }
    Ok(totals)
}

fn write_od(path: &Path, meta: &str, m: &OdMatrix, world: &World) -> Result<()> {
    let ids: Vec<String> = world.zones().iter().map(|z| z.id.to_string()).collect();
    let mut header = vec!["zone_id"];
    header.extend(ids.iter().map(String::as_str));
    let mut w = TableWriter::create(path, Some(meta), &header)?;
    for (i, id) in ids.iter().enumerate() {
        let mut fields = vec![id.clone()];
        fields.extend(m.row(ZoneIdx(i)).iter().map(u64::to_string));
        w.row(fields)?;
    }
    w.finish()
}
