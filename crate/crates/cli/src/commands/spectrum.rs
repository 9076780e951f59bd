//! `spectrum`: asymptotic branch curves and exact characteristic roots for
//! every transverse network block.
//!
//! The linearization around the synchronized state block-diagonalizes along
//! the Laplacian eigenvalues μ_j; each transverse block (j ≥ 2) sees the
//! feedback strength σ_j = −κ·μ_j. For every distinct σ_j the command writes
//! `branches_block<k>.csv` (the large-delay continuous-spectrum curves) and
//! `roots_block<k>.csv` (exact roots at the configured finite delay), plus a
//! `blocks.csv` index. With `[model] regime = "periodic"` the Stuart-Landau
//! limit cycle's rotating-frame reduction replaces the equilibrium
//! characteristic function.

use std::fmt::Write as _;

use num_complex::Complex64;

use delay_sync_core::csv::{branches_csv, roots_csv, write_csv};
use delay_sync_core::graph::laplacian_spectrum;
use delay_sync_core::par::par_map;
use delay_sync_core::sl::{sl_g_pm, sl_periodic_exact_spectrum, SLParams};
use delay_sync_core::spectrum::{
    asymptotic_spectrum, exact_spectrum_equilibrium, ExactSpectrum, RootFamily, SpectrumBranch,
};
use delay_sync_core::{Error, Result};

use super::Ctx;
use crate::config::{Regime, DEFAULT_OMEGA_SAMPLES};

struct BlockOut {
    mu: Complex64,
    sigma: Complex64,
    /// None when σ = 0: the continuous spectrum retreats to −∞ and there are
    /// no branch curves to plot.
    branches: Option<Vec<SpectrumBranch>>,
    exact: ExactSpectrum,
}

pub fn run(ctx: &Ctx) -> Result<()> {
    let built = ctx.cfg.model.build(ctx.base)?;
    let net = ctx.cfg.network()?.build(ctx.base)?;
    let run = &ctx.cfg.run;
    let kappa = run.require_kappa()?;
    let tau = run.require_tau()?;
    let window = run.require_omega_window()?;
    let samples = run.omega_samples.unwrap_or(DEFAULT_OMEGA_SAMPLES);
    if samples < 2 {
        return Err(Error::invalid(format!(
            "[run] omega_samples must be at least 2, got {samples}"
        )));
    }
    if !(window.0 < window.1) {
        return Err(Error::invalid(format!(
            "[run] omega_window must satisfy lo < hi, got [{}, {}]",
            window.0, window.1
        )));
    }

    let spec = laplacian_spectrum(&net)?;
    if !spec.diagonalizable {
        return Err(Error::numerical(
            "network Laplacian is not certified diagonalizable (no eigenvector \
             basis with condition number < 1e8); the transverse block reduction \
             does not apply",
        ));
    }
    let zero_tol = 1e-9 * spec.rho_l.max(1.0);
    if spec.eigenvalues.len() < 2 || spec.eigenvalues[1].norm() <= zero_tol {
        return Err(Error::precondition(
            "network must be connected: found a second Laplacian eigenvalue at zero",
        ));
    }

    // Distinct transverse eigenvalues in canonical (modulus, re, im) order;
    // duplicated μ values share one block.
    let mut mus: Vec<Complex64> = Vec::new();
    for &mu in &spec.eigenvalues[1..] {
        if !mus.iter().any(|m| (m - mu).norm() < 1e-12) {
            mus.push(mu);
        }
    }

    let regime = ctx.cfg.model.regime;
    let sl = built.sl;
    let model = &built.model;
    let blocks: Vec<Result<BlockOut>> = par_map(&mus, |&mu| {
        let sigma = -kappa * mu;
        match regime {
            Regime::Equilibrium => {
                let branches = if sigma.norm() == 0.0 {
                    None
                } else {
                    Some(asymptotic_spectrum(model, sigma, window, samples)?)
                };
                let exact = exact_spectrum_equilibrium(model, sigma, tau, window)?;
                Ok(BlockOut {
                    mu,
                    sigma,
                    branches,
                    exact,
                })
            }
            Regime::Periodic => {
                let p = sl.as_ref().ok_or_else(|| {
                    Error::precondition("periodic-regime spectra need the Stuart-Landau model")
                })?;
                let branches = if sigma.norm() == 0.0 {
                    None
                } else {
                    Some(periodic_branches(p, tau, sigma, window, samples))
                };
                let exact = sl_periodic_exact_spectrum(sigma, p, tau, window)?;
                Ok(BlockOut {
                    mu,
                    sigma,
                    branches,
                    exact,
                })
            }
        }
    });

    let mut index =
        String::from("block,re_mu,im_mu,re_sigma,im_sigma,roots,strong,max_re_lambda\n");
    for (i, block) in blocks.into_iter().enumerate() {
        let block = block?;
        let k = i + 1;
        let strong = block
            .exact
            .roots
            .iter()
            .filter(|r| matches!(r.family, RootFamily::Strong))
            .count();
        let max_re = block.exact.max_re();
        println!(
            "block {k}: mu = ({}, {}), sigma = ({}, {}), roots = {} ({} strong), \
             max Re lambda = {}",
            block.mu.re,
            block.mu.im,
            block.sigma.re,
            block.sigma.im,
            block.exact.roots.len(),
            strong,
            max_re
        );
        if let Some(branches) = &block.branches {
            write_csv(
                &ctx.out.join(format!("branches_block{k}.csv")),
                &branches_csv(branches),
            )?;
        } else {
            println!(
                "block {k}: sigma = 0, no branch curves (roots are the \
                 instantaneous spectrum exactly)"
            );
        }
        write_csv(
            &ctx.out.join(format!("roots_block{k}.csv")),
            &roots_csv(&block.exact),
        )?;
        let _ = writeln!(
            index,
            "{k},{},{},{},{},{},{},{}",
            block.mu.re,
            block.mu.im,
            block.sigma.re,
            block.sigma.im,
            block.exact.roots.len(),
            strong,
            max_re
        );
    }
    write_csv(&ctx.out.join("blocks.csv"), &index)
}

/// Large-delay branch curves of the rotating-frame reduction: branch 0
/// follows g₊, branch 1 follows g₋, with γ(ω) = −ln|g(ω)| + ln|σ| (+∞ where
/// the branch root vanishes).
fn periodic_branches(
    p: &SLParams,
    tau: f64,
    sigma: Complex64,
    window: (f64, f64),
    samples: usize,
) -> Vec<SpectrumBranch> {
    let (lo, hi) = window;
    let ln_sigma = sigma.norm().ln();
    let omega: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let mut plus = SpectrumBranch {
        branch: 0,
        omega: omega.clone(),
        gamma: Vec::with_capacity(samples),
        g: Vec::with_capacity(samples),
    };
    let mut minus = SpectrumBranch {
        branch: 1,
        omega,
        gamma: Vec::with_capacity(samples),
        g: Vec::with_capacity(samples),
    };
    for i in 0..samples {
        let w = plus.omega[i];
        let (gp, gm) = sl_g_pm(w, p, tau);
        for (branch, g) in [(&mut plus, gp), (&mut minus, gm)] {
            branch.gamma.push(-g.norm().ln() + ln_sigma);
            branch.g.push(g);
        }
    }
    vec![plus, minus]
}
