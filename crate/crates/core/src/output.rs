//! Aggregates computed from a trip list: modal split, trip length
//! distribution, persons en route and hourly OD matrices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::categories::{Employment, Mode, Purpose};
use crate::clock::{day_index, hour_of_day, Minute, Weekday, MINUTES_PER_DAY};
use crate::engine::TripRecord;
use crate::population::{PersonId, Population};
use crate::world::{World, ZoneIdx};
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupBy {
    Purpose,
    Day,
    Employment,
}

impl GroupBy {
    pub const ALL: &'static [GroupBy] = &[GroupBy::Purpose, GroupBy::Day, GroupBy::Employment];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupBy::Purpose => "purpose",
            GroupBy::Day => "day",
            GroupBy::Employment => "employment",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum GroupKey {
    Purpose(Purpose),
    Day(Weekday),
    Employment(Employment),
}

impl GroupKey {
    fn label(self) -> &'static str {
        match self {
            GroupKey::Purpose(p) => p.as_str(),
            GroupKey::Day(d) => d.as_str(),
            GroupKey::Employment(e) => e.as_str(),
        }
    }
}

/// Trip counts per mode within one group.
#[derive(Clone, Debug, PartialEq)]
pub struct ShareRow {
    pub group: String,
    pub counts: BTreeMap<Mode, u64>,
    pub total: u64,
}

impl ShareRow {
    pub fn share(&self, mode: Mode) -> f64 {
        self.counts.get(&mode).copied().unwrap_or(0) as f64 / self.total as f64
    }
}

/// Mode shares per group, groups in calendar or declaration order. Groups
/// without trips are omitted. Grouping by employment needs `population`.
pub fn modal_split(trips: &[TripRecord], group: GroupBy, population: Option<&Population>) -> Result<Vec<ShareRow>> {
    let employment: BTreeMap<PersonId, Employment> = match (group, population) {
        (GroupBy::Employment, Some(p)) => p.persons().iter().map(|p| (p.id, p.attributes.employment)).collect(),
        (GroupBy::Employment, None) => {
            return Err(Error::Invalid("modal split by employment needs the population".into()))
        }
        _ => BTreeMap::new(),
    };
    let mut rows: BTreeMap<GroupKey, BTreeMap<Mode, u64>> = BTreeMap::new();
    for t in trips {
        let key = match group {
            GroupBy::Purpose => GroupKey::Purpose(t.purpose),
            GroupBy::Day => GroupKey::Day(Weekday::of_minute(t.depart)),
            GroupBy::Employment => GroupKey::Employment(
                *employment
                    .get(&t.person)
                    .ok_or_else(|| Error::Invalid(format!("trip of unknown person {}", t.person)))?,
            ),
        };
        *rows.entry(key).or_default().entry(t.mode).or_default() += 1;
    }
    Ok(rows
        .into_iter()
        .map(|(k, counts)| ShareRow {
            group: k.label().to_string(),
            total: counts.values().sum(),
            counts,
        })
        .collect())
}

/// Histogram bin edges in km. Bin `k` is `[edges[k], edges[k + 1])`; the
/// last bin is open-ended.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceBins {
    edges: Vec<f64>,
}

impl DistanceBins {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidBins("no bin edges".into()));
        }
        if edges[0] != 0.0 {
            return Err(Error::InvalidBins(format!("first edge must be 0, got {}", edges[0])));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidBins(
                "edges must be finite and strictly increasing".into(),
            ));
        }
        Ok(DistanceBins { edges })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bin_of(&self, km: f64) -> usize {
        self.edges.partition_point(|&e| e <= km).saturating_sub(1)
    }

    /// Label of bin `k`, e.g. `2-3` or `50+`.
    pub fn label(&self, k: usize) -> String {
        match self.edges.get(k + 1) {
            Some(hi) => format!("{}-{}", self.edges[k], hi),
            None => format!("{}+", self.edges[k]),
        }
    }
}

impl Default for DistanceBins {
    /// 1 km steps to 10 km, then 10-25, 25-50 and above 50.
    fn default() -> Self {
        let mut edges: Vec<f64> = (0..=10).map(f64::from).collect();
        edges.extend([25.0, 50.0]);
        DistanceBins { edges }
    }
}

/// Trip counts per distance bin for every purpose.
pub fn trip_length_distribution(trips: &[TripRecord], bins: &DistanceBins) -> BTreeMap<Purpose, Vec<u64>> {
    let mut out: BTreeMap<Purpose, Vec<u64>> = Purpose::ALL.iter().map(|p| (*p, alloc::vec![0; bins.len()])).collect();
    for t in trips {
        out.get_mut(&t.purpose).expect("all purposes present")[bins.bin_of(t.distance_km)] += 1;
    }
    out
}

/// Number of trips with `depart <= t < arrive` for each minute `t < horizon`.
pub fn persons_en_route(trips: &[TripRecord], horizon: Minute) -> Vec<u32> {
    let mut delta = alloc::vec![0i64; horizon as usize + 1];
    for t in trips {
        if t.depart >= horizon {
            continue;
        }
        delta[t.depart as usize] += 1;
        delta[min_u32(t.arrive, horizon) as usize] -= 1;
    }
    let mut out = Vec::with_capacity(horizon as usize);
    let mut running = 0i64;
    for d in &delta[..horizon as usize] {
        running += d;
        out.push(running as u32);
    }
    out
}

fn min_u32(a: u32, b: u32) -> u32 {
    if a < b {
        a
    } else {
        b
    }
}

/// Splits a week series into one series per day.
pub fn per_day(series: &[u32]) -> Vec<&[u32]> {
    series.chunks(MINUTES_PER_DAY as usize).collect()
}

/// Minute of day with the highest count on `day` within `[from, to)`
/// (minutes of day); the earliest such minute on ties.
pub fn daily_peak(series: &[u32], day: u32, from: Minute, to: Minute) -> Option<Minute> {
    let base = (day * MINUTES_PER_DAY) as usize;
    let window = series.get(base + from as usize..base + to as usize)?;
    let mut best: Option<(u32, Minute)> = None;
    for (k, &c) in window.iter().enumerate() {
        if best.is_none_or(|(b, _)| c > b) {
            best = Some((c, from + k as Minute));
        }
    }
    best.map(|(_, m)| m)
}

/// Trip counts of one (mode, departure day, departure hour).
#[derive(Clone, Debug, PartialEq)]
pub struct OdMatrix {
    pub mode: Mode,
    pub day: Weekday,
    pub hour: u32,
    dim: usize,
    counts: Vec<u64>,
}

impl OdMatrix {
    fn new(mode: Mode, day: Weekday, hour: u32, dim: usize) -> Self {
        OdMatrix {
            mode,
            day,
            hour,
            dim,
            counts: alloc::vec![0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, origin: ZoneIdx, destination: ZoneIdx) -> u64 {
        self.counts[origin.0 * self.dim + destination.0]
    }

    pub fn row(&self, origin: ZoneIdx) -> &[u64] {
        &self.counts[origin.0 * self.dim..(origin.0 + 1) * self.dim]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Hourly OD matrices keyed by (mode, day, hour). Only cells with trips
/// produce a matrix.
pub fn od_matrices(trips: &[TripRecord], world: &World) -> Result<BTreeMap<(Mode, Weekday, u32), OdMatrix>> {
    let n = world.zone_count();
    let mut out: BTreeMap<(Mode, Weekday, u32), OdMatrix> = BTreeMap::new();
    for t in trips {
        if day_index(t.depart) >= 7 {
            return Err(Error::Invalid(format!(
                "trip departs after the week at minute {}",
                t.depart
            )));
        }
        let (day, hour) = (Weekday::of_minute(t.depart), hour_of_day(t.depart));
        let o = world.index_of(t.origin)?;
        let d = world.index_of(t.destination)?;
        let m = out
            .entry((t.mode, day, hour))
            .or_insert_with(|| OdMatrix::new(t.mode, day, hour, n));
        m.counts[o.0 * n + d.0] += 1;
    }
    Ok(out)
}
