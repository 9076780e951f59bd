//! `scaling`: how the critical coupling shrinks as random networks grow.
//!
//! For each configured size and seed the command generates a connected
//! sample, computes κ_c = r0/ρ_L, and normalizes it by the ensemble's
//! predicted decay (κ_c·√n for preferential-attachment trees, κ_c·ln n for
//! Erdős–Rényi graphs near the connectivity threshold). Outputs:
//! `scaling.csv` (one row per sample), `scaling_summary.csv` (per-size
//! quantiles), and `skipped.csv` (slots where no connected sample appeared
//! within the resample budget).

use delay_sync_core::csv::{scaling_csv, scaling_summary_csv, skipped_csv, write_csv};
use delay_sync_core::sweep::{scaling_sweep, MAX_RESAMPLE_ATTEMPTS};
use delay_sync_core::{Error, Result};

use super::Ctx;
use crate::config::warn_large_n;

pub fn run(ctx: &Ctx) -> Result<()> {
    let built = ctx.cfg.model.build(ctx.base)?;
    let sw =
        ctx.cfg.sweep.as_ref().ok_or_else(|| {
            Error::invalid("a [sweep] section is required for the scaling command")
        })?;
    let kind = sw.kind()?;
    if sw.seeds == 0 {
        return Err(Error::invalid("[sweep] seeds must be at least 1"));
    }
    for &n in &sw.sizes {
        warn_large_n(n);
    }
    let seeds: Vec<u64> = (1..=sw.seeds).collect();

    let result = scaling_sweep(kind, &sw.sizes, &seeds, &built.model)?;

    for s in &result.summaries {
        println!(
            "n = {}: samples = {}, median = {}, q25 = {}, q75 = {}",
            s.n, s.samples, s.median, s.q25, s.q75
        );
    }
    if !result.skipped.is_empty() {
        eprintln!(
            "warning: {} slot(s) produced no connected sample within \
             {MAX_RESAMPLE_ATTEMPTS} attempts each; see skipped.csv",
            result.skipped.len()
        );
    }

    write_csv(&ctx.out.join("scaling.csv"), &scaling_csv(&result))?;
    write_csv(
        &ctx.out.join("scaling_summary.csv"),
        &scaling_summary_csv(&result),
    )?;
    write_csv(&ctx.out.join("skipped.csv"), &skipped_csv(&result.skipped))
}
