//! Stuart-Landau specialization: closed forms for the oscillator
//! z' = (α+iβ)z − |z|²z under delayed diffusive coupling.
//!
//! Two regimes share the machinery. For α < 0 the synchronized state is the
//! equilibrium z = 0 and the general equilibrium analysis applies directly.
//! For α > 0 the synchronized state is the rotating limit cycle of radius
//! √α; a co-rotating frame makes the variational Jacobian constant again,
//! with J₀ = diag(−2α, 0) and a delay matrix rotated by the phase βτ, and
//! this module carries that reduction: the characteristic function, its
//! branches g_±(ω), the destabilization coefficient α_P = cos(βτ), exact
//! spectra, σ×τ stability maps, and κ_c(τ) for the periodic state.

mod periodic;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use periodic::{
    sl_char_h, sl_g_pm, sl_kappa_c_periodic, sl_periodic_exact_spectrum, sl_stability_map, MapCell,
    SLStabilityMap,
};

use crate::error::{Error, Result};
use crate::numerics::CMatrix;
use crate::spectrum::{Dynamics, LocalModel};

/// Degeneracy guard: τ within this band of (π + 2Mπ)/(2β), detected via
/// |cos(βτ)|, has no usable destabilization direction.
pub const DEGENERACY_GUARD: f64 = 1e-6;

/// Stuart-Landau parameters: linear growth rate α and rotation frequency β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SLParams {
    pub alpha: f64,
    pub beta: f64,
}

impl SLParams {
    /// Requires β > 0 and α ≠ 0 (α < 0: stable equilibrium; α > 0: stable
    /// periodic orbit of radius √α).
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::invalid("SL parameters must be finite"));
        }
        if !(beta > 0.0) {
            return Err(Error::invalid(format!(
                "SL rotation frequency must satisfy beta > 0, got {beta}"
            )));
        }
        if alpha == 0.0 {
            return Err(Error::invalid(
                "SL growth rate alpha = 0 sits on the bifurcation; use alpha < 0 \
                 (equilibrium) or alpha > 0 (periodic orbit)",
            ));
        }
        Ok(Self { alpha, beta })
    }
}

/// The equilibrium instance: J = [[α, −β], [β, α]], H = I, with the full
/// nonlinear right-hand sides attached for simulation.
pub fn sl_equilibrium_model(p: &SLParams) -> Result<LocalModel> {
    let j = DMatrix::from_row_slice(2, 2, &[p.alpha, -p.beta, p.beta, p.alpha]);
    let h = DMatrix::identity(2, 2);
    LocalModel::build(
        j,
        h,
        Dynamics::StuartLandau {
            alpha: p.alpha,
            beta: p.beta,
        },
    )
}

/// The rotating-frame reduction of the periodic orbit's variational
/// equation.
#[derive(Debug, Clone)]
pub struct PeriodicSLAnalysis {
    /// Constant rotating-frame Jacobian diag(−2α, 0); the zero row is the
    /// phase direction carrying the trivial Floquet exponent.
    pub j0: CMatrix,
    /// Delay coupling matrix: rotation by the phase βτ accumulated over one
    /// delay.
    pub t_mat: DMatrix<f64>,
    /// Destabilization coefficient α_P = −Re(∂₂H/∂₁H) = cos(βτ): its sign
    /// picks which sign of σ (hence κ) stabilizes.
    pub alpha_p: f64,
    /// ∂₁H(0,0) = 2α.
    pub d1h: Complex64,
    /// ∂₂H(0,0) = −2α cos(βτ).
    pub d2h: Complex64,
    /// τ within the guard band of the excluded set (π + 2Mπ)/(2β).
    pub degenerate: bool,
}

/// Build the rotating-frame data at delay τ. Degeneracy is data, not an
/// error.
pub fn sl_periodic_frame(p: &SLParams, tau: f64) -> Result<PeriodicSLAnalysis> {
    require_periodic_regime(p)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!(
            "delay must be finite and nonnegative, got {tau}"
        )));
    }
    let (alpha, c, s) = (p.alpha, (p.beta * tau).cos(), (p.beta * tau).sin());
    Ok(PeriodicSLAnalysis {
        j0: CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(-2.0 * alpha, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        ),
        t_mat: DMatrix::from_row_slice(2, 2, &[c, s, -s, c]),
        alpha_p: c,
        d1h: Complex64::new(2.0 * alpha, 0.0),
        d2h: Complex64::new(-2.0 * alpha * c, 0.0),
        degenerate: c.abs() < DEGENERACY_GUARD,
    })
}

/// Sign of the coupling that synchronizes the periodic orbit: +1 when
/// cos(βτ) > 0, −1 when cos(βτ) < 0.
pub fn sl_sync_direction(p: &SLParams, tau: f64) -> Result<i32> {
    require_periodic_regime(p)?;
    let c = (p.beta * tau).cos();
    if c.abs() < DEGENERACY_GUARD {
        return Err(Error::precondition(format!(
            "tau = {tau} lies in the degenerate set (pi + 2*M*pi)/(2*beta) where \
             cos(beta*tau) = 0 and neither coupling sign stabilizes"
        )));
    }
    Ok(if c > 0.0 { 1 } else { -1 })
}

pub(crate) fn require_periodic_regime(p: &SLParams) -> Result<()> {
    if p.alpha <= 0.0 {
        return Err(Error::precondition(format!(
            "periodic-orbit analysis needs alpha > 0 (got alpha = {}); for \
             alpha < 0 the synchronized state is the equilibrium",
            p.alpha
        )));
    }
    Ok(())
}
