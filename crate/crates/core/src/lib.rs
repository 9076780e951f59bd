//! Synchronization stability of delay-coupled oscillator networks.
//!
//! The crate answers one question in several ways: when `n` identical units
//! are coupled through a network with one common, large delay, for which
//! coupling strengths does the synchronized state attract? The tools are
//!
//! - [`graph`]: network construction, Laplacian spectra, and the spectral
//!   radius that sets the critical coupling;
//! - [`spectrum`]: the characteristic roots of the linearized dynamics —
//!   asymptotic branch curves, exact transcendental roots, stability
//!   verdicts, and transient-time estimates;
//! - [`sl`]: closed-form specializations for Stuart-Landau oscillators,
//!   including the rotating-frame analysis of the periodic orbit and
//!   stability maps over the (σ, τ) plane;
//! - [`dde`]: direct Runge-Kutta simulation of the delay system, used to
//!   cross-check every analytic prediction;
//! - [`sweep`]: batch experiments over random-network ensembles.
//!
//! Heavy loops (stability-map cells, ensemble sweeps) are data-parallel via
//! rayon under the default `parallel` feature; disabling it yields a
//! dependency-light sequential build with identical results.

// Guards are written `!(x > 0.0)` rather than `x <= 0.0` so that NaN fails
// validation instead of slipping past it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv;
pub mod dde;
pub mod error;
pub mod graph;
pub mod numerics;
pub mod par;
pub mod sl;
pub mod spectrum;
pub mod sweep;

pub use error::{Error, Result};
