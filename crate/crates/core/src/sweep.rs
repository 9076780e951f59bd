//! Critical-coupling scaling sweeps over random-graph ensembles: how the
//! synchronization threshold κ_c shrinks as networks grow, for
//! preferential-attachment trees (κ_c ~ 1/√n) and sparse Erdős–Rényi
//! graphs (κ_c ~ 1/ln n).

use crate::error::{Error, Result};
use crate::graph::{gen_ba, gen_er, is_connected, laplacian_spectrum, rho_l_lanczos, Network};
use crate::par::par_map;
use crate::spectrum::{compute_r0, LocalModel};

/// Ensemble kind for a scaling sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleKind {
    /// Preferential-attachment tree (one new edge per node); the natural
    /// normalization is κ_c·√n.
    BarabasiAlbert,
    /// Erdős–Rényi with p = p0·ln(n)/n; the natural normalization is
    /// κ_c·ln n.
    ErdosRenyi {
        /// Multiplier on the connectivity threshold ln(n)/n.
        p0: f64,
    },
}

/// One (n, seed) sample of a scaling sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub n: usize,
    pub seed: u64,
    pub g_max: usize,
    pub rho_l: f64,
    pub kappa_c: f64,
    /// κ_c·√n for preferential-attachment trees, κ_c·ln n for Erdős–Rényi.
    pub normalized: f64,
}

/// Median / quartile summary of the normalized threshold at one size.
#[derive(Debug, Clone, Copy)]
pub struct SweepSummary {
    pub n: usize,
    pub samples: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

/// A completed sweep: per-sample rows, per-size summaries, and any
/// (n, seed) pairs skipped because no connected graph was found.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub kind: EnsembleKind,
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<SweepSummary>,
    pub skipped: Vec<(usize, u64)>,
}

/// Attempts per (n, seed) slot before a disconnected Erdős–Rényi sample is
/// skipped; each retry perturbs the seed deterministically.
pub const MAX_RESAMPLE_ATTEMPTS: u32 = 20;

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

fn connected_sample(kind: EnsembleKind, n: usize, seed: u64) -> Result<Option<Network>> {
    match kind {
        EnsembleKind::BarabasiAlbert => {
            // A preferential-attachment tree is connected by construction.
            Ok(Some(gen_ba(n, seed)?))
        }
        EnsembleKind::ErdosRenyi { p0 } => {
            let p = p0 * (n as f64).ln() / n as f64;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::invalid(format!(
                    "edge probability p = p0·ln(n)/n = {p} falls outside (0, 1) \
                     for n = {n}, p0 = {p0}"
                )));
            }
            for attempt in 0..MAX_RESAMPLE_ATTEMPTS {
                let s = seed.wrapping_add(u64::from(attempt).wrapping_mul(SEED_STRIDE));
                let net = gen_er(n, p, s)?;
                if is_connected(&net) {
                    return Ok(Some(net));
                }
            }
            Ok(None)
        }
    }
}

fn rho_l_of(net: &Network) -> Result<f64> {
    // Iterative extreme-eigenvalue estimate first; exact dense fallback for
    // sizes where an O(n³) solve is still cheap.
    match rho_l_lanczos(net, 1e-7) {
        Ok(rho) => Ok(rho),
        Err(e) => {
            if net.n() <= 3000 {
                Ok(laplacian_spectrum(net)?.rho_l)
            } else {
                Err(e)
            }
        }
    }
}

/// Run a scaling sweep: for each size in `sizes` and each seed in `seeds`,
/// generate a connected sample, compute κ_c = r0/ρ_L for `model`, and
/// summarize the normalized thresholds per size.
pub fn scaling_sweep(
    kind: EnsembleKind,
    sizes: &[usize],
    seeds: &[u64],
    model: &LocalModel,
) -> Result<SweepResult> {
    if sizes.is_empty() || seeds.is_empty() {
        return Err(Error::invalid("sweep needs at least one size and one seed"));
    }
    let r0 = compute_r0(model, None)?;

    let mut jobs = Vec::with_capacity(sizes.len() * seeds.len());
    for &n in sizes {
        for &seed in seeds {
            jobs.push((n, seed));
        }
    }

    let outcomes = par_map(&jobs, |&(n, seed)| -> Result<Option<SweepRow>> {
        let Some(net) = connected_sample(kind, n, seed)? else {
            return Ok(None);
        };
        let rho_l = rho_l_of(&net)?;
        if !(rho_l > 0.0) {
            return Err(Error::numerical(format!(
                "spectral radius estimate {rho_l} is not positive for n = {n}, \
                 seed = {seed}"
            )));
        }
        let kappa_c = r0 / rho_l;
        let normalized = match kind {
            EnsembleKind::BarabasiAlbert => kappa_c * (n as f64).sqrt(),
            EnsembleKind::ErdosRenyi { .. } => kappa_c * (n as f64).ln(),
        };
        Ok(Some(SweepRow {
            n,
            seed,
            g_max: net.g_max(),
            rho_l,
            kappa_c,
            normalized,
        }))
    });

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (job, outcome) in jobs.iter().zip(outcomes) {
        match outcome? {
            Some(row) => rows.push(row),
            None => skipped.push(*job),
        }
    }

    let mut summaries = Vec::new();
    for &n in sizes {
        let mut vals: Vec<f64> = rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.normalized)
            .collect();
        if vals.is_empty() {
            continue;
        }
        vals.sort_by(|a, b| a.total_cmp(b));
        summaries.push(SweepSummary {
            n,
            samples: vals.len(),
            median: quantile(&vals, 0.5),
            q25: quantile(&vals, 0.25),
            q75: quantile(&vals, 0.75),
        });
    }

    Ok(SweepResult {
        kind,
        rows,
        summaries,
        skipped,
    })
}

/// Linear-interpolation quantile of an ascending-sorted slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let m = sorted.len();
    if m == 1 {
        return sorted[0];
    }
    let pos = q * (m - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}
