use num_complex::Complex64;

use super::branches::{asymptotic_spectrum, critical_coupling, SpectrumBranch, SyncWindow};
use super::exact::{exact_spectrum_equilibrium, ExactSpectrum};
use super::model::LocalModel;
use crate::error::{Error, Result};
use crate::graph::LaplacianSpectrum;
use crate::numerics::eig_complex;
use crate::par::par_map;

/// Stability verdict for the synchronized state. `Boundary` marks exact
/// criticality, where the theory is silent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
    Boundary,
}

impl Verdict {
    fn from_signed(value: f64, zero_band: f64) -> Self {
        if value.abs() <= zero_band {
            Verdict::Boundary
        } else if value > 0.0 {
            Verdict::Stable
        } else {
            Verdict::Unstable
        }
    }
}

/// Eigenvalues of the delay-free linearization J, with the strongly unstable
/// subset (Re > 0) split out.
#[derive(Debug, Clone)]
pub struct InstantaneousSpectrum {
    pub all: Vec<Complex64>,
    pub strongly_unstable: Vec<Complex64>,
}

pub fn instantaneous_spectrum(model: &LocalModel) -> Result<InstantaneousSpectrum> {
    let all = eig_complex(model.j())?;
    let strongly_unstable = all.iter().copied().filter(|e| e.re > 0.0).collect();
    Ok(InstantaneousSpectrum {
        all,
        strongly_unstable,
    })
}

/// Instantaneous, strongly unstable, asymptotic, and exact spectra of one
/// transverse block, bundled for output.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub instantaneous: Vec<Complex64>,
    pub strongly_unstable: Vec<Complex64>,
    pub asymptotic: Vec<SpectrumBranch>,
    pub exact: ExactSpectrum,
}

pub fn spectrum_result(
    model: &LocalModel,
    sigma: Complex64,
    tau: f64,
    omega_window: (f64, f64),
    samples: usize,
) -> Result<SpectrumResult> {
    let inst = instantaneous_spectrum(model)?;
    let asymptotic = asymptotic_spectrum(model, sigma, omega_window, samples)?;
    let exact = exact_spectrum_equilibrium(model, sigma, tau, omega_window)?;
    Ok(SpectrumResult {
        instantaneous: inst.all,
        strongly_unstable: inst.strongly_unstable,
        asymptotic,
        exact,
    })
}

/// Transverse stability of the synchronized equilibrium at coupling κ.
#[derive(Debug, Clone)]
pub struct StabilityAssessment {
    pub window: SyncWindow,
    /// min over transverse blocks, branches, and ω of |g_l(ω)| − |κμ_j|,
    /// which collapses to r0 − |κ|ρ_L. Positive means stable with room.
    pub margin: f64,
    /// Verdict from the large-delay criterion |κ| vs κ_c.
    pub asymptotic: Verdict,
    /// Verdict from the exact characteristic roots at this finite τ.
    pub exact: Verdict,
    /// max Re λ over every transverse block's exact spectrum.
    pub max_re_exact: f64,
    /// Exact spectrum per distinct transverse eigenvalue μ_j (j ≥ 2).
    pub block_spectra: Vec<(Complex64, ExactSpectrum)>,
}

/// Combine the asymptotic criterion with exact root-finding across all
/// transverse blocks σ_j = −κμ_j, j ≥ 2 (the zero eigenvalue's longitudinal
/// block is excluded).
pub fn transverse_stability(
    model: &LocalModel,
    net_spectrum: &LaplacianSpectrum,
    kappa: f64,
    tau: f64,
    omega_window: Option<(f64, f64)>,
) -> Result<StabilityAssessment> {
    if kappa == 0.0 {
        return Err(Error::invalid(
            "transverse stability needs kappa != 0 (uncoupled nodes never synchronize)",
        ));
    }
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("delay must be positive, got {tau}")));
    }
    let window = critical_coupling(model, net_spectrum, omega_window)?;
    let margin = window.r0 - kappa.abs() * window.rho_l;
    let zero_band = 1e-12 * window.r0.max(1.0);
    let asymptotic = Verdict::from_signed(margin, zero_band);

    // Distinct transverse eigenvalues (skip the structural zero, dedup ties).
    let mut mus: Vec<Complex64> = Vec::new();
    for &mu in &net_spectrum.eigenvalues[1..] {
        if !mus.iter().any(|m| (m - mu).norm() < 1e-12) {
            mus.push(mu);
        }
    }

    let exact_window = match omega_window {
        Some(w) => w,
        None => {
            let hw = default_exact_halfwidth(model);
            (-hw, hw)
        }
    };
    let spectra = par_map(&mus, |&mu| {
        exact_spectrum_equilibrium(model, -kappa * mu, tau, exact_window)
    });
    let mut block_spectra = Vec::with_capacity(mus.len());
    let mut max_re_exact = f64::NEG_INFINITY;
    for (mu, spec) in mus.into_iter().zip(spectra) {
        let spec = spec?;
        max_re_exact = max_re_exact.max(spec.max_re());
        block_spectra.push((mu, spec));
    }
    let exact = Verdict::from_signed(-max_re_exact, 0.0);

    Ok(StabilityAssessment {
        window,
        margin,
        asymptotic,
        exact,
        max_re_exact,
        block_spectra,
    })
}

/// Imaginary-axis reach for exact-spectrum seeding when the caller gives no
/// window: generous multiple of the model scales so the dominant chain and
/// any strongly unstable roots fall inside.
fn default_exact_halfwidth(model: &LocalModel) -> f64 {
    use crate::numerics::frobenius_norm;
    4.0 * (frobenius_norm(model.j()) + frobenius_norm(model.h())).max(1.0)
}

/// Characteristic time t_tr = −τ/ln(κ/κ_c) of the synchronization transient.
pub fn transient_time(kappa: f64, kappa_c: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("delay must be positive, got {tau}")));
    }
    if !(kappa_c > 0.0) {
        return Err(Error::invalid(format!(
            "critical coupling must be positive, got {kappa_c}"
        )));
    }
    if kappa <= 0.0 {
        return Err(Error::invalid(format!(
            "transient time needs kappa > 0, got {kappa}"
        )));
    }
    if kappa >= kappa_c {
        return Err(Error::invalid(format!(
            "transient time is defined only inside the window: kappa = {kappa} \
             does not satisfy 0 < kappa < kappa_c = {kappa_c}"
        )));
    }
    Ok(-tau / (kappa / kappa_c).ln())
}
