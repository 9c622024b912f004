use alloc::string::String;

use crate::world::ZoneId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown {kind} `{value}`")]
    UnknownCategory { kind: &'static str, value: String },
    #[error("duplicate zone id {0}")]
    DuplicateZone(ZoneId),
    #[error("unknown zone id {0}")]
    UnknownZone(ZoneId),
    #[error("zone index {0} out of range")]
    ZoneIndexOutOfRange(usize),
    #[error("{what}: expected a {expected}x{expected} matrix, got {rows} rows with {cols} columns")]
    DimensionMismatch {
        what: String,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{what}: invalid entry {value} at ({row}, {col})")]
    InvalidEntry {
        what: String,
        row: usize,
        col: usize,
        value: f64,
    },
    #[error("no skim matrices for mode {0}")]
    MissingMode(crate::categories::Mode),
    #[error("{model} model: no coefficient `{coefficient}` for category `{category}`")]
    MissingCoefficient {
        model: &'static str,
        coefficient: String,
        category: String,
    },
    #[error("invalid parameter table: {0}")]
    InvalidParams(String),
    #[error("infeasible fit: category `{0}` has a positive target but no survey support")]
    Infeasible(String),
    #[error("home zone {zone}: {persons} persons need a {kind} place but the commuting row is all zero")]
    EmptyCommutingRow {
        zone: ZoneId,
        persons: usize,
        kind: &'static str,
    },
    #[error("activity program of person {person}: {reason}")]
    InvalidProgram { person: u32, reason: String },
    #[error("invalid distance bins: {0}")]
    InvalidBins(String),
    #[error("{0}")]
    Invalid(String),
}
