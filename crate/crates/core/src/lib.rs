//! Causal bandits on linear structural equation models under temporally
//! fluctuating (adversarially deviated) models.
//!
//! The library is organized around a fixed pipeline:
//!
//! * [`graph`] / [`sem`] — the causal DAG, observational/interventional
//!   weight matrices, soft interventions, sampling, and exact expected
//!   rewards.
//! * [`deviation`] — budgeted time-varying model deviations and the
//!   front-loaded optimal-action-flipping adversary.
//! * [`estimation`] — per-node weighted least-squares estimators, weighted
//!   Gram matrices, adaptive weights, and confidence ellipsoids.
//! * [`policy`] — the Robust-LCB decision loop plus the LinSEM-UCB and UCB1
//!   baselines.
//! * [`analysis`] — closed-form regret-bound shape curves for overlays.
//! * [`harness`] / [`output`] — experiment orchestration, regret traces,
//!   aggregation, sweeps, and CSV/SVG/manifest emission.
//!
//! Everything is deterministic given a master seed; repetitions derive
//! independent streams and may run in parallel.

pub mod analysis;
pub mod config;
pub mod deviation;
pub mod error;
pub mod estimation;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod output;
pub mod policy;
pub mod sem;

pub use error::{Error, Result};
