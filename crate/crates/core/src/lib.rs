//! Allocation-only core of a week-long agent-based travel demand simulator.
//!
//! The crate is `no_std` (it needs `alloc`) and carries every model of the
//! simulator: population synthesis, long-term assignments, the discrete choice
//! core, the minute-resolution week engine with its extensions, and the
//! post-run analytics. Reading and writing files lives in the `weeksim` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod activity;
pub mod categories;
pub mod choice;
pub mod clock;
pub mod engine;
mod error;
pub mod extensions;
pub mod longterm;
pub mod output;
pub mod params;
pub mod population;
pub mod rng;
pub mod world;

pub use error::{Error, Result};
