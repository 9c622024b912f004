//! Scenario files, intermediate artifacts and the command-line pipeline
//! around [`weeksim_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod table;

pub use weeksim_core as core;

pub use manifest::Manifest;
pub use pipeline::{Overrides, Pipeline};
