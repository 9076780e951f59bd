use num_complex::Complex64;

use super::model::LocalModel;
use crate::error::{Error, Result};
use crate::numerics::{det_complex, eig_complex, newton_complex, CMatrix, RootResult};

/// Which seed family produced an exact root: the pseudo-continuous chain
/// (seeded from the asymptotic branches) or the strongly unstable set
/// (seeded from unstable eigenvalues of J).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFamily {
    Pseudo,
    Strong,
}

impl RootFamily {
    pub fn label(self) -> &'static str {
        match self {
            RootFamily::Pseudo => "pseudo",
            RootFamily::Strong => "strong",
        }
    }
}

/// An exact characteristic root λ with its seed family.
#[derive(Debug, Clone, Copy)]
pub struct LabeledRoot {
    pub result: RootResult,
    pub family: RootFamily,
}

/// Exact transcendental spectrum of one transverse block, with seed
/// accounting (non-converged seeds are dropped, not errors).
#[derive(Debug, Clone)]
pub struct ExactSpectrum {
    /// Deduplicated converged roots, sorted by (Re λ, Im λ); every residual
    /// is ≤ 1e-8.
    pub roots: Vec<LabeledRoot>,
    pub seeds_attempted: usize,
    pub seeds_dropped: usize,
}

impl ExactSpectrum {
    pub fn max_re(&self) -> f64 {
        self.roots
            .iter()
            .fold(f64::NEG_INFINITY, |m, r| m.max(r.result.root.re))
    }
}

const DEDUP_TOL: f64 = 1e-6;
const RESIDUAL_ACCEPT: f64 = 1e-8;
const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 80;

/// The characteristic function F(λ) = det[−λI + J + σe^{−λτ}H] and its
/// analytic derivative, as closures over the model.
///
/// The derivative uses the column-replacement form of the determinant's
/// differential: dF = Σ_k det(M with column k replaced by M′ column k),
/// M′(λ) = −I − τσe^{−λτ}H. Exact for every q, no adjugate needed.
pub fn characteristic_fn(
    model: &LocalModel,
    sigma: Complex64,
    tau: f64,
) -> (
    impl Fn(Complex64) -> Complex64 + '_,
    impl Fn(Complex64) -> Complex64 + '_,
) {
    let q = model.q();
    let ident = CMatrix::identity(q, q);
    let assemble = {
        let ident = ident.clone();
        move |lambda: Complex64| -> CMatrix {
            model.j() - &ident * lambda + model.h() * (sigma * (-lambda * tau).exp())
        }
    };
    let f = {
        let assemble = assemble.clone();
        move |lambda: Complex64| det_complex(&assemble(lambda))
    };
    let df = move |lambda: Complex64| -> Complex64 {
        let m = assemble(lambda);
        let mprime = -&ident - model.h() * (sigma * tau * (-lambda * tau).exp());
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..q {
            let mut mk = m.clone();
            mk.set_column(k, &mprime.column(k));
            total += det_complex(&mk);
        }
        total
    };
    (f, df)
}

/// Exact roots of det[−λI + J + σe^{−λτ}H] = 0 inside the frequency window.
///
/// Newton runs start from two seed families: pseudo-continuous seeds
/// λ₀ = γ_l(ω_m)/τ + iω_m on the comb ω_m = 2πm/τ, and strongly unstable
/// seeds at each eigenvalue of J with Re > 0. Converged roots are
/// deduplicated at 1e-6 and kept only if an independent residual evaluation
/// stays below 1e-8. σ = 0 collapses to the eigenvalues of J.
pub fn exact_spectrum_equilibrium(
    model: &LocalModel,
    sigma: Complex64,
    tau: f64,
    omega_window: (f64, f64),
) -> Result<ExactSpectrum> {
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("delay must be positive, got {tau}")));
    }
    let (lo, hi) = omega_window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!(
            "omega window must be a finite interval, got [{lo}, {hi}]"
        )));
    }

    if sigma.norm() == 0.0 {
        // No delay term: the spectrum is exactly eig(J).
        let roots = eig_complex(model.j())?
            .into_iter()
            .map(|e| LabeledRoot {
                result: RootResult {
                    root: e,
                    residual: 0.0,
                    iterations: 0,
                    converged: true,
                },
                family: if e.re > 0.0 {
                    RootFamily::Strong
                } else {
                    RootFamily::Pseudo
                },
            })
            .collect();
        return Ok(ExactSpectrum {
            roots,
            seeds_attempted: 0,
            seeds_dropped: 0,
        });
    }

    let seeds = build_seeds(model, sigma, tau, omega_window)?;
    let (f, df) = characteristic_fn(model, sigma, tau);
    Ok(newton_root_set(&f, &df, seeds))
}

/// Seed list for the Newton runs, in a canonical order.
fn build_seeds(
    model: &LocalModel,
    sigma: Complex64,
    tau: f64,
    omega_window: (f64, f64),
) -> Result<Vec<(Complex64, RootFamily)>> {
    let (lo, hi) = omega_window;
    let ln_sigma = sigma.norm().ln();
    let mut seeds = Vec::new();

    let spacing = 2.0 * std::f64::consts::PI / tau;
    let m_lo = (lo / spacing).floor() as i64;
    let m_hi = (hi / spacing).ceil() as i64;
    for m in m_lo..=m_hi {
        let omega = spacing * m as f64;
        if omega < lo || omega > hi {
            continue;
        }
        for g in super::branches::g_branches(model, omega)? {
            if g.norm() < 1e-14 {
                continue; // singular sample: no finite γ seed here
            }
            let gamma = -g.norm().ln() + ln_sigma;
            seeds.push((Complex64::new(gamma / tau, omega), RootFamily::Pseudo));
        }
    }

    for e in eig_complex(model.j())? {
        if e.re > 0.0 {
            seeds.push((e, RootFamily::Strong));
        }
    }
    Ok(seeds)
}

/// Run Newton from every seed, then canonicalize: sort, deduplicate at 1e-6
/// (keeping the smallest residual in each cluster), re-check residuals.
/// Shared by every transcendental-spectrum computation in the crate.
pub(crate) fn newton_root_set<F, D>(
    f: F,
    df: D,
    seeds: Vec<(Complex64, RootFamily)>,
) -> ExactSpectrum
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let seeds_attempted = seeds.len();

    let mut seeds_dropped = 0usize;
    let mut converged: Vec<LabeledRoot> = Vec::with_capacity(seeds_attempted);
    for (z0, family) in seeds {
        let result = newton_complex(&f, Some(&df), z0, NEWTON_TOL, NEWTON_MAX_ITER);
        if result.converged && result.residual <= RESIDUAL_ACCEPT {
            converged.push(LabeledRoot { result, family });
        } else {
            seeds_dropped += 1;
        }
    }

    // Canonical order before deduplication keeps the outcome independent of
    // seed completion order.
    converged.sort_by(|a, b| {
        let ka = (a.result.root.re, a.result.root.im, a.result.residual);
        let kb = (b.result.root.re, b.result.root.im, b.result.residual);
        ka.partial_cmp(&kb).expect("finite roots always compare")
    });

    let mut kept: Vec<LabeledRoot> = Vec::new();
    for cand in converged {
        match kept
            .iter_mut()
            .find(|k| (k.result.root - cand.result.root).norm() < DEDUP_TOL)
        {
            Some(existing) => {
                if cand.result.residual < existing.result.residual {
                    existing.result = cand.result;
                }
                // A cluster touched by a strongly unstable seed is the
                // continuation of an unstable eigenvalue of J, whatever
                // other seeds also landed on it.
                if cand.family == RootFamily::Strong {
                    existing.family = RootFamily::Strong;
                }
            }
            None => kept.push(cand),
        }
    }
    kept.sort_by(|a, b| {
        (a.result.root.re, a.result.root.im)
            .partial_cmp(&(b.result.root.re, b.result.root.im))
            .expect("finite roots always compare")
    });

    ExactSpectrum {
        roots: kept,
        seeds_attempted,
        seeds_dropped,
    }
}
