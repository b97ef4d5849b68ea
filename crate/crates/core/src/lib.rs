//! Monte Carlo simulator for the impact of an on-demand, drone-relayed
//! emergency spectrum allocation on commercial 5G small-cell traffic.
//!
//! A city square hosts one dense industrial area and up to four residential
//! areas that are rolled out one per year. Base stations are placed in each
//! area by a Poisson point process. Emergency events arrive every day with
//! empirically distributed counts, start hours and durations; when an event
//! lands inside a deployed area the nearest cells hand a fixed share of their
//! bandwidth to the emergency link, and any commercial traffic above the
//! remaining capacity is counted as impact.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: city extent, deployment areas, placement and coverage.
//! * [`spatial`]: Poisson station counts, station placement, nearest cells.
//! * [`traffic`]: hourly commercial traffic profiles.
//! * [`events`]: event-log ingestion, empirical distributions, day sampling.
//! * [`impact`]: severity classes and cell/system impact.
//! * [`engine`]: multi-year, multi-day Monte Carlo runs and summaries.
//! * [`config`], [`manifest`], [`output`]: run configuration and artifacts.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod engine;
pub mod error;
pub mod events;
pub mod geometry;
pub mod impact;
pub mod manifest;
pub mod output;
pub mod rng;
pub mod spatial;
pub mod synthetic;
pub mod traffic;

pub use error::{Error, Result};

/// A point in city coordinates, kilometres from the south-west corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x_km: f64,
    pub y_km: f64,
}

impl Point {
    pub const fn new(x_km: f64, y_km: f64) -> Self {
        Self { x_km, y_km }
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dx = self.x_km - other.x_km;
        let dy = self.y_km - other.y_km;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }
}
