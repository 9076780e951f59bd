use num_complex::Complex64;

use super::model::LocalModel;
use crate::error::{Error, Result};
use crate::graph::LaplacianSpectrum;
use crate::numerics::{det_complex, eig_complex, frobenius_norm, minimize_1d, CMatrix};

/// Below this modulus a g value is treated as an exact zero of the branch
/// polynomial and its γ sample becomes the +∞ sentinel.
const G_SINGULAR: f64 = 1e-14;

/// One branch γ_l(ω, σ) = −ln|g_l(ω)| + ln|σ| of the asymptotic continuous
/// spectrum, sampled on an ascending ω grid. A γ value of +∞ marks a grid
/// point where |g_l| vanished.
#[derive(Debug, Clone)]
pub struct SpectrumBranch {
    pub branch: usize,
    pub omega: Vec<f64>,
    pub gamma: Vec<f64>,
    pub g: Vec<Complex64>,
}

/// The synchronization window (0, κ_c) with its two ingredients:
/// r0 = min_l inf_ω |g_l(ω)| from the local model and the network's spectral
/// radius ρ_L.
#[derive(Debug, Clone, Copy)]
pub struct SyncWindow {
    pub r0: f64,
    pub rho_l: f64,
    pub kappa_c: f64,
}

/// The q complex roots g of det[−iωI + J + gH] = 0 at one frequency,
/// computed as the negatives of the eigenvalues of H⁻¹(J − iωI), sorted by
/// (re, im).
pub fn g_branches(model: &LocalModel, omega: f64) -> Result<Vec<Complex64>> {
    let q = model.q();
    let h_inv = model
        .h()
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::invalid("coupling Jacobian H is numerically singular"))?;
    let shifted = model.j() - CMatrix::identity(q, q) * Complex64::new(0.0, omega);
    let eigs = eig_complex(&(h_inv * &shifted))?;
    let mut gs: Vec<Complex64> = eigs.into_iter().map(|e| -e).collect();
    gs.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite branch roots always compare")
    });

    let scale = frobenius_norm(model.j()) + frobenius_norm(model.h()) + omega.abs();
    for &g in &gs {
        let m = &shifted + model.h() * g;
        let residual = det_complex(&m).norm();
        // det scales like scale^q; normalize before comparing to the 1e-8 bar.
        if residual > 1e-8 * scale.max(1.0).powi(q as i32) {
            return Err(Error::numerical(format!(
                "branch root residual {residual:.3e} too large at omega = {omega}"
            )));
        }
    }
    Ok(gs)
}

/// Sample the asymptotic continuous spectrum on `samples` points across
/// `omega_window`, tracking branches continuously in ω by nearest-neighbor
/// matching of consecutive g values.
pub fn asymptotic_spectrum(
    model: &LocalModel,
    sigma: Complex64,
    omega_window: (f64, f64),
    samples: usize,
) -> Result<Vec<SpectrumBranch>> {
    if sigma.norm() == 0.0 {
        return Err(Error::precondition(
            "asymptotic spectrum needs sigma != 0 (log |sigma| enters every branch)",
        ));
    }
    let (lo, hi) = omega_window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!(
            "omega window must be a finite interval, got [{lo}, {hi}]"
        )));
    }
    if samples < 2 {
        return Err(Error::invalid("asymptotic spectrum needs >= 2 samples"));
    }

    let q = model.q();
    let ln_sigma = sigma.norm().ln();
    let step = (hi - lo) / (samples - 1) as f64;
    let mut branches: Vec<SpectrumBranch> = (0..q)
        .map(|l| SpectrumBranch {
            branch: l,
            omega: Vec::with_capacity(samples),
            gamma: Vec::with_capacity(samples),
            g: Vec::with_capacity(samples),
        })
        .collect();

    let mut previous: Vec<Complex64> = Vec::new();
    for i in 0..samples {
        let omega = if i + 1 == samples {
            hi
        } else {
            lo + step * i as f64
        };
        let gs = g_branches(model, omega)?;
        let ordered = if i == 0 {
            gs
        } else {
            match_branches(&previous, gs)
        };
        for (l, &g) in ordered.iter().enumerate() {
            let gamma = if g.norm() < G_SINGULAR {
                f64::INFINITY
            } else {
                -g.norm().ln() + ln_sigma
            };
            branches[l].omega.push(omega);
            branches[l].gamma.push(gamma);
            branches[l].g.push(g);
        }
        previous = ordered;
    }
    Ok(branches)
}

/// Assign each previous branch value the nearest unclaimed new g value.
fn match_branches(previous: &[Complex64], new: Vec<Complex64>) -> Vec<Complex64> {
    let mut taken = vec![false; new.len()];
    let mut ordered = vec![Complex64::new(0.0, 0.0); new.len()];
    for (l, &p) in previous.iter().enumerate() {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (k, &g) in new.iter().enumerate() {
            if !taken[k] {
                let d = (g - p).norm();
                if d < best_d {
                    best_d = d;
                    best = k;
                }
            }
        }
        taken[best] = true;
        ordered[l] = new[best];
    }
    ordered
}

/// Default half-width of the ω search window, from the norms of J and H and
/// the conditioning of H. |g_l(ω)| grows without bound as |ω| → ∞, so the
/// infimum lies inside a window of this scale; an outward-growth check at the
/// boundary (with doubling) covers the remainder.
fn default_omega_halfwidth(model: &LocalModel) -> Result<f64> {
    let h_inv = model
        .h_real()
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::invalid("coupling Jacobian H is numerically singular"))?;
    let norm_h = frobenius_norm(model.h());
    let cond_h = norm_h * h_inv.norm();
    Ok(4.0 * (frobenius_norm(model.j()) + norm_h * cond_h))
}

/// r0 = min_l inf_ω |g_l(ω)|: the distance of the branch polynomial's roots
/// from the origin, minimized over frequency.
///
/// Defined only when J is strictly stable — a strongly unstable spectrum
/// makes the synchronization window empty before r0 ever enters. The window
/// defaults to |ω| ≤ 4(‖J‖ + ‖H‖·cond H) and is doubled (up to 3 times)
/// whenever min_l |g_l| fails to grow outward over the last 5% of the window.
pub fn compute_r0(model: &LocalModel, omega_window: Option<(f64, f64)>) -> Result<f64> {
    let unstable: Vec<Complex64> = eig_complex(model.j())?
        .into_iter()
        .filter(|e| e.re >= 0.0)
        .collect();
    if !unstable.is_empty() {
        let listed: Vec<String> = unstable
            .iter()
            .map(|e| format!("{:.6}{:+.6}i", e.re, e.im))
            .collect();
        return Err(Error::precondition(format!(
            "r0 is undefined: the strongly unstable spectrum is nonempty \
             (eigenvalues of J with Re >= 0: {})",
            listed.join(", ")
        )));
    }

    let (mut lo, mut hi) = match omega_window {
        Some((lo, hi)) => {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::invalid(format!(
                    "omega window must be a finite interval, got [{lo}, {hi}]"
                )));
            }
            (lo, hi)
        }
        None => {
            let w = default_omega_halfwidth(model)?;
            (-w, w)
        }
    };

    let min_g = |omega: f64| -> f64 {
        g_branches(model, omega)
            .map(|gs| gs.iter().map(|g| g.norm()).fold(f64::INFINITY, f64::min))
            .unwrap_or(f64::INFINITY)
    };

    for attempt in 0..=3 {
        if outward_growing(&min_g, lo, hi) {
            let (_, r0) = minimize_1d(&min_g, lo, hi, 1e-9)?;
            if !(r0 > 0.0) || !r0.is_finite() {
                return Err(Error::numerical(format!(
                    "branch minimum collapsed to {r0}; |g| should stay bounded away from zero"
                )));
            }
            return Ok(r0);
        }
        if attempt < 3 {
            let mid = 0.5 * (lo + hi);
            let half = (hi - lo) * 0.5;
            lo = mid - 2.0 * half;
            hi = mid + 2.0 * half;
        }
    }
    Err(Error::numerical(format!(
        "min_l |g_l(omega)| keeps decreasing at the window boundary even after \
         doubling the window 3 times (final window [{lo}, {hi}])"
    )))
}

/// True iff min_l |g_l| increases outward over the last 5% of the window on
/// both sides, evidence that the infimum is interior.
fn outward_growing(min_g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> bool {
    const CHECK_SAMPLES: usize = 8;
    let width = hi - lo;
    let band = 0.05 * width;
    let step = band / (CHECK_SAMPLES - 1) as f64;
    // Right edge: moving from hi − band to hi must be nondecreasing.
    let mut prev = min_g(hi - band);
    for k in 1..CHECK_SAMPLES {
        let v = min_g(hi - band + step * k as f64);
        if v < prev {
            return false;
        }
        prev = v;
    }
    // Left edge: moving from lo + band to lo must be nondecreasing.
    let mut prev = min_g(lo + band);
    for k in 1..CHECK_SAMPLES {
        let v = min_g(lo + band - step * k as f64);
        if v < prev {
            return false;
        }
        prev = v;
    }
    true
}

/// κ_c = r0/ρ_L and the open synchronization window (0, κ_c).
///
/// Refuses disconnected or non-diagonalizable networks: the block reduction
/// behind the criterion needs an eigenvector basis of L, and a second zero
/// eigenvalue would freeze a transverse direction.
pub fn critical_coupling(
    model: &LocalModel,
    net_spectrum: &LaplacianSpectrum,
    omega_window: Option<(f64, f64)>,
) -> Result<SyncWindow> {
    if !net_spectrum.diagonalizable {
        return Err(Error::numerical(
            "network Laplacian is not certified diagonalizable (no eigenvector \
             basis with condition number < 1e8); the transverse block reduction \
             does not apply",
        ));
    }
    let zero_tol = 1e-9 * net_spectrum.rho_l.max(1.0);
    if net_spectrum.eigenvalues.len() < 2 || net_spectrum.eigenvalues[1].norm() <= zero_tol {
        return Err(Error::precondition(
            "network must be connected: found a second Laplacian eigenvalue at zero",
        ));
    }
    if net_spectrum.rho_l <= 0.0 {
        return Err(Error::precondition(
            "network spectral radius must be positive",
        ));
    }
    let r0 = compute_r0(model, omega_window)?;
    Ok(SyncWindow {
        r0,
        rho_l: net_spectrum.rho_l,
        kappa_c: r0 / net_spectrum.rho_l,
    })
}
