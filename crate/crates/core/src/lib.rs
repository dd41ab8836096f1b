//! Free-space optical satellite network simulator.
//!
//! Builds Walker-delta constellations, routes traffic between two ground
//! stations over time-sliced laser-link graphs, and evaluates the resulting
//! network latency, per-satellite transmission power, and turbulence-induced
//! outage probability of the optical ground links.
//!
//! The modules mirror the processing chain:
//! [`geo`] → [`constellation`] → [`topology`] → [`link_budget`] and
//! [`metrics`], with [`turbulence`] for outage curves and [`scenario`] tying
//! it together behind a JSON scenario format.

// `!(x > 0.0)` is used on purpose: unlike `x <= 0.0` it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constellation;
pub mod error;
pub mod geo;
pub mod link_budget;
pub mod metrics;
pub mod scenario;
pub mod topology;
pub mod turbulence;

pub use error::{Error, Result};
