//! `window`: the synchronization window of the equilibrium regime.
//!
//! Computes r0 (the minimum branch-curve modulus), the Laplacian spectral
//! radius ρ_L, and the critical coupling κ_c = r0/ρ_L, then prints them and
//! writes `window.csv`. The reported window is the open interval (0, κ_c):
//! every coupling inside it synchronizes the network for all large delays.

use delay_sync_core::csv::write_csv;
use delay_sync_core::graph::laplacian_spectrum;
use delay_sync_core::spectrum::critical_coupling;
use delay_sync_core::{Error, Result};

use super::Ctx;
use crate::config::Regime;

pub fn run(ctx: &Ctx) -> Result<()> {
    if ctx.cfg.model.regime == Regime::Periodic {
        return Err(Error::precondition(
            "the window command analyzes the equilibrium regime; \
             [model] regime = \"periodic\" does not apply here",
        ));
    }
    let built = ctx.cfg.model.build(ctx.base)?;
    let net = ctx.cfg.network()?.build(ctx.base)?;
    let spec = laplacian_spectrum(&net)?;
    let window = critical_coupling(&built.model, &spec, ctx.cfg.run.omega_window_opt())?;

    println!("r0 = {}", window.r0);
    println!("rho_l = {}", window.rho_l);
    println!("kappa_c = {}", window.kappa_c);
    println!("window = (0, {})", window.kappa_c);

    let csv = format!(
        "r0,rho_l,kappa_c,window_lo,window_hi\n{},{},{},0,{}\n",
        window.r0, window.rho_l, window.kappa_c, window.kappa_c
    );
    write_csv(&ctx.out.join("window.csv"), &csv)
}
