//! Spectra of the transverse variational equation around a synchronized
//! equilibrium, and the stability quantities built from them.
//!
//! For a network of identical units with one coupling delay τ, the
//! linearization block-diagonalizes along the Laplacian eigenvalues μ_j.
//! Each transverse block is ξ̇ = Jξ + σHξ(t−τ) with σ = −κμ_j. This module
//! computes, per block:
//!
//! - the instantaneous spectrum (eigenvalues of J) and its strongly unstable
//!   part,
//! - the asymptotic continuous spectrum γ_l(ω) = −ln|g_l(ω)| + ln|σ|, where
//!   the g_l(ω) solve det[−iωI + J + gH] = 0,
//! - the exact transcendental roots of det[−λI + J + σe^{−λτ}H] = 0,
//! - r0 = min_l inf_ω |g_l(ω)|, the critical coupling κ_c = r0/ρ_L, stability
//!   verdicts, and the transient-time law.

mod branches;
mod exact;
mod model;
mod verdict;

pub use branches::{
    asymptotic_spectrum, compute_r0, critical_coupling, g_branches, SpectrumBranch, SyncWindow,
};
pub(crate) use exact::newton_root_set;
pub use exact::{
    characteristic_fn, exact_spectrum_equilibrium, ExactSpectrum, LabeledRoot, RootFamily,
};
pub use model::{Dynamics, LocalModel};
pub use verdict::{
    instantaneous_spectrum, spectrum_result, transient_time, transverse_stability,
    InstantaneousSpectrum, SpectrumResult, StabilityAssessment, Verdict,
};
