//! Decoherence-free probe construction for distributed scalar-field sensing,
//! and Bayesian precision analysis in terms of the spectral range `Δ` and the
//! number of levels `L` of the effective signal generator.
//!
//! The crate is organised bottom-up:
//!
//! - [`field_geometry`]: sensor arrays, sampled field profiles, the
//!   noise-orthogonal signal component and the decoherence-free condition.
//! - [`dfs_control`]: effective spins realised by timed population flips,
//!   ladder probes, multi-dimensional equalisation and spectrum shaping.
//! - [`placement`]: sensor placements (two-point, linear, exponential and
//!   arbitrary-profile variants) and the summary table of `Δ` and `L`.
//! - [`bayes`]: probe families, evolution, prior-averaged states, quantum
//!   Fisher information, canonical phase measurement and Holevo variance.
//! - [`montecarlo`]: dephasing checks and seeded estimation trials.
//! - [`protocols`]: single-shot, repeated, adaptive and fixed-time protocols.
//! - [`scenario`]: the JSON scenario schema shared with the command line tool.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
pub mod config;
pub mod dfs_control;
pub mod error;
pub mod export;
pub mod field_geometry;
pub mod montecarlo;
pub mod placement;
pub mod protocols;
pub mod scenario;

pub use config::Tolerances;
pub use error::{Error, Result};
