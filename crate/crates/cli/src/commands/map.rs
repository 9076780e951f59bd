//! `map`: stability of the Stuart-Landau limit cycle over a (σ, τ) grid.
//!
//! Each cell reports max Re λ of the rotating-frame characteristic roots at
//! feedback strength σ and delay τ, plus a flag marking delays inside the
//! degenerate set cos(βτ) = 0 where neither coupling sign stabilizes.
//! Output: `map.csv` with one row per cell, σ-major.

use delay_sync_core::csv::{map_csv, write_csv};
use delay_sync_core::sl::sl_stability_map;
use delay_sync_core::{Error, Result};

use super::Ctx;

pub fn run(ctx: &Ctx) -> Result<()> {
    let built = ctx.cfg.model.build(ctx.base)?;
    let params = built.sl.as_ref().ok_or_else(|| {
        Error::precondition(
            "the stability map applies to the Stuart-Landau limit cycle; \
             [model] kind must be \"sl\" with alpha > 0",
        )
    })?;
    let m = ctx
        .cfg
        .map
        .as_ref()
        .ok_or_else(|| Error::invalid("a [map] section is required for the map command"))?;

    let map = sl_stability_map(
        (m.sigma[0], m.sigma[1]),
        (m.tau[0], m.tau[1]),
        params,
        (m.grid[0], m.grid[1]),
    )?;

    let stable = map.cells.iter().filter(|c| c.max_re_lambda < 0.0).count();
    let degenerate = map.cells.iter().filter(|c| c.degenerate).count();
    println!("cells = {}", map.cells.len());
    println!("stable = {stable}");
    println!("degenerate = {degenerate}");

    write_csv(&ctx.out.join("map.csv"), &map_csv(&map))
}
