//! Static scenario: zones, skim matrices, commuting matrices.
//!
//! Zones are addressed internally by a contiguous [`ZoneIdx`]; the opaque
//! external [`ZoneId`] from the scenario files is mapped once at construction.
//! All matrices are dense and row-major.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::categories::{Mode, Purpose};
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZoneId(pub u32);

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of a zone in the world's zone list.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZoneIdx(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Zone {
    pub id: ZoneId,
    /// Opportunity measure per purpose; purposes without an entry count as 0.
    pub attractivity: BTreeMap<Purpose, f64>,
    pub freefloating: bool,
    pub stations: u32,
    pub district: Option<String>,
}

impl Zone {
    pub fn new(id: ZoneId) -> Self {
        Zone {
            id,
            attractivity: BTreeMap::new(),
            freefloating: false,
            stations: 0,
            district: None,
        }
    }

    pub fn attractivity(&self, purpose: Purpose) -> f64 {
        self.attractivity.get(&purpose).copied().unwrap_or(0.0)
    }
}

/// Dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: alloc::vec![0.0; dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Builds a matrix from rows; every row must have as many entries as
    /// there are rows.
    pub fn from_rows(what: &str, rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: what.into(),
                    expected: dim,
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    fn validate(&self, what: &str, zones: usize) -> Result<()> {
        if self.dim != zones {
            return Err(Error::DimensionMismatch {
                what: what.into(),
                expected: zones,
                rows: self.dim,
                cols: self.dim,
            });
        }
        for (k, &v) in self.data.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidEntry {
                    what: what.into(),
                    row: k / self.dim,
                    col: k % self.dim,
                    value: v,
                });
            }
        }
        Ok(())
    }
}

/// Per-mode time (minutes) and cost matrices plus the mode-independent
/// road distance matrix (km).
#[derive(Clone, Debug, PartialEq)]
pub struct SkimMatrixSet {
    time: BTreeMap<Mode, Matrix>,
    cost: BTreeMap<Mode, Matrix>,
    distance: Matrix,
}

impl SkimMatrixSet {
    pub fn new(distance: Matrix) -> Self {
        SkimMatrixSet {
            time: BTreeMap::new(),
            cost: BTreeMap::new(),
            distance,
        }
    }

    pub fn insert(&mut self, mode: Mode, time: Matrix, cost: Matrix) {
        self.time.insert(mode, time);
        self.cost.insert(mode, cost);
    }

    pub fn with(mut self, mode: Mode, time: Matrix, cost: Matrix) -> Self {
        self.insert(mode, time, cost);
        self
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        self.time.keys().copied()
    }

    pub fn time(&self, mode: Mode) -> Option<&Matrix> {
        self.time.get(&mode)
    }

    pub fn cost(&self, mode: Mode) -> Option<&Matrix> {
        self.cost.get(&mode)
    }

    pub fn distance(&self) -> &Matrix {
        &self.distance
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CommutingKind {
    Work,
    Education,
}

impl CommutingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommutingKind::Work => "work",
            CommutingKind::Education => "education",
        }
    }

    pub fn purpose(self) -> Purpose {
        match self {
            CommutingKind::Work => Purpose::Work,
            CommutingKind::Education => Purpose::Education,
        }
    }
}

/// Home zone (row) to workplace or school zone (column) weights.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutingMatrix {
    pub kind: CommutingKind,
    pub counts: Matrix,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Travel {
    pub time: f64,
    pub cost: f64,
    pub distance: f64,
}

/// Immutable scenario geography.
#[derive(Clone, Debug)]
pub struct World {
    zones: Vec<Zone>,
    index: BTreeMap<ZoneId, ZoneIdx>,
    skims: SkimMatrixSet,
    commuting: BTreeMap<CommutingKind, CommutingMatrix>,
}

impl World {
    pub fn new(zones: Vec<Zone>, skims: SkimMatrixSet) -> Result<World> {
        let mut index = BTreeMap::new();
        for (k, zone) in zones.iter().enumerate() {
            if index.insert(zone.id, ZoneIdx(k)).is_some() {
                return Err(Error::DuplicateZone(zone.id));
            }
            for (purpose, &a) in &zone.attractivity {
                if !a.is_finite() || a < 0.0 {
                    return Err(Error::Invalid(format!(
                        "zone {}: attractivity for {purpose} must be non-negative, got {a}",
                        zone.id
                    )));
                }
            }
        }
        let n = zones.len();
        skims.distance.validate("distance", n)?;
        for (mode, m) in &skims.time {
            m.validate(&format!("time/{mode}"), n)?;
            match skims.cost.get(mode) {
                Some(c) => c.validate(&format!("cost/{mode}"), n)?,
                None => return Err(Error::MissingMode(*mode)),
            }
        }
        if let Some(mode) = skims.cost.keys().find(|m| !skims.time.contains_key(m)) {
            return Err(Error::MissingMode(*mode));
        }
        Ok(World {
            zones,
            index,
            skims,
            commuting: BTreeMap::new(),
        })
    }

    pub fn with_commuting(mut self, commuting: CommutingMatrix) -> Result<World> {
        commuting
            .counts
            .validate(&format!("commuting/{}", commuting.kind.as_str()), self.zones.len())?;
        self.commuting.insert(commuting.kind, commuting);
        Ok(self)
    }

    /// Copy of the world with every travel time multiplied by `factor`.
    pub fn with_time_scale(&self, factor: f64) -> World {
        let mut scaled = self.clone();
        for m in scaled.skims.time.values_mut() {
            *m = m.map(|t| t * factor);
        }
        scaled
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }

    pub fn zone_count(&self) -> usize {
        self.zones.len()
    }

    pub fn zone(&self, idx: ZoneIdx) -> &Zone {
        &self.zones[idx.0]
    }

    pub fn zone_indices(&self) -> impl Iterator<Item = ZoneIdx> {
        (0..self.zones.len()).map(ZoneIdx)
    }

    pub fn index_of(&self, id: ZoneId) -> Result<ZoneIdx> {
        self.index.get(&id).copied().ok_or(Error::UnknownZone(id))
    }

    pub fn id_of(&self, idx: ZoneIdx) -> ZoneId {
        self.zones[idx.0].id
    }

    pub fn skims(&self) -> &SkimMatrixSet {
        &self.skims
    }

    pub fn has_mode(&self, mode: Mode) -> bool {
        self.skims.time.contains_key(&mode)
    }

    pub fn commuting(&self, kind: CommutingKind) -> Option<&CommutingMatrix> {
        self.commuting.get(&kind)
    }

    pub fn travel(&self, mode: Mode, origin: ZoneIdx, destination: ZoneIdx) -> Result<Travel> {
        let n = self.zones.len();
        for z in [origin, destination] {
            if z.0 >= n {
                return Err(Error::ZoneIndexOutOfRange(z.0));
            }
        }
        let time = self.skims.time.get(&mode).ok_or(Error::MissingMode(mode))?;
        let cost = &self.skims.cost[&mode];
        Ok(Travel {
            time: time.get(origin.0, destination.0),
            cost: cost.get(origin.0, destination.0),
            distance: self.skims.distance.get(origin.0, destination.0),
        })
    }

    pub fn travel_by_id(&self, mode: Mode, origin: ZoneId, destination: ZoneId) -> Result<Travel> {
        self.travel(mode, self.index_of(origin)?, self.index_of(destination)?)
    }

    /// Road distance; zones must be valid.
    #[inline]
    pub fn distance(&self, origin: ZoneIdx, destination: ZoneIdx) -> f64 {
        self.skims.distance.get(origin.0, destination.0)
    }

    /// Longest travel time out of `origin` over all modes and destinations.
    pub fn max_time_from(&self, origin: ZoneIdx) -> f64 {
        self.skims
            .time
            .values()
            .flat_map(|m| m.row(origin.0).iter().copied())
            .fold(0.0, f64::max)
    }

    /// Longest travel time between a pair over all modes.
    pub fn max_time_between(&self, origin: ZoneIdx, destination: ZoneIdx) -> f64 {
        self.skims
            .time
            .values()
            .map(|m| m.get(origin.0, destination.0))
            .fold(0.0, f64::max)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lookups() {
        let w = fixtures::three_zones();
        assert_eq!(w.zone_count(), 3);
        assert_eq!(w.skims().modes().count(), 5);
        let intra = w.travel(Mode::Walking, ZoneIdx(1), ZoneIdx(1)).unwrap();
        assert_eq!(intra.distance, 0.7);
        assert_eq!(intra.time, 12.0 * 0.7);
        for mode in Mode::BASE {
            let ab = w.travel(mode, ZoneIdx(0), ZoneIdx(2)).unwrap();
            let ba = w.travel(mode, ZoneIdx(2), ZoneIdx(0)).unwrap();
            assert_eq!(ab.time, ba.time);
        }
        assert_eq!(
            w.travel_by_id(Mode::CarDriver, ZoneId(9), ZoneId(1)),
            Err(Error::UnknownZone(ZoneId(9)))
        );
        assert_eq!(
            w.travel(Mode::CarsharingStation, ZoneIdx(0), ZoneIdx(1)),
            Err(Error::MissingMode(Mode::CarsharingStation))
        );
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let zones: Vec<Zone> = (1..=3).map(|k| Zone::new(ZoneId(k))).collect();
        let skims = SkimMatrixSet::new(Matrix::zeros(4));
        assert!(matches!(
            World::new(zones, skims),
            Err(Error::DimensionMismatch {
                expected: 3,
                rows: 4,
                ..
            })
        ));
        assert!(Matrix::from_rows("m", vec![vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn rejects_negative_and_duplicates() {
        let zones: Vec<Zone> = (1..=2).map(|k| Zone::new(ZoneId(k))).collect();
        let mut d = Matrix::zeros(2);
        d.set(0, 1, -1.0);
        assert!(matches!(
            World::new(zones.clone(), SkimMatrixSet::new(d)),
            Err(Error::InvalidEntry { row: 0, col: 1, .. })
        ));
        let dup = vec![Zone::new(ZoneId(1)), Zone::new(ZoneId(1))];
        assert_eq!(
            World::new(dup, SkimMatrixSet::new(Matrix::zeros(2))).unwrap_err(),
            Error::DuplicateZone(ZoneId(1))
        );
    }

    #[test]
    fn time_scale() {
        let w = fixtures::three_zones();
        let s = w.with_time_scale(2.0);
        let a = w.travel(Mode::CarDriver, ZoneIdx(0), ZoneIdx(1)).unwrap();
        let b = s.travel(Mode::CarDriver, ZoneIdx(0), ZoneIdx(1)).unwrap();
        assert_eq!(b.time, 2.0 * a.time);
        assert_eq!(b.cost, a.cost);
    }
}
