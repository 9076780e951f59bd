//! `simulate`: direct integration of the delay-coupled network.
//!
//! Single mode writes the trajectory (`trajectory.csv`, thinned by
//! `--stride`), the synchronization-error series (`sync.csv`), and an
//! exponential decay fit of the error (`fit.csv`). When the config has a
//! `[transients]` section the command instead sweeps its coupling list and
//! writes `transients.csv` comparing each fitted transient time with the
//! prediction t_tr = −τ/ln(κ/κ_c).

use delay_sync_core::csv::{sync_csv, trajectory_csv, transients_csv, write_csv};
use delay_sync_core::dde::{
    fit_decay, simulate, sync_error, DecayFit, HistorySpec, SimOptions, Trajectory,
};
use delay_sync_core::graph::{laplacian_spectrum, Network};
use delay_sync_core::par::par_map;
use delay_sync_core::spectrum::{critical_coupling, transient_time, LocalModel};
use delay_sync_core::{Error, Result};

use super::Ctx;
use crate::config::{TransientsSection, DEFAULT_HISTORY_SCALE};

pub fn run(ctx: &Ctx) -> Result<()> {
    let built = ctx.cfg.model.build(ctx.base)?;
    let net = ctx.cfg.network()?.build(ctx.base)?;
    let run = &ctx.cfg.run;
    let tau = run.require_tau()?;
    let h_step = run.require_h_step()?;
    let t_end = run.require_t_end()?;
    let history = HistorySpec::Seeded {
        seed: run.history_seed.unwrap_or(0),
        scale: run.history_scale.unwrap_or(DEFAULT_HISTORY_SCALE),
    };
    let fit_window = run
        .fit_window
        .map(|[a, b]| (a, b))
        .unwrap_or((2.0 * tau, t_end));

    if let Some(tr) = &ctx.cfg.transients {
        return transient_sweep(
            ctx,
            &built.model,
            &net,
            tr,
            tau,
            h_step,
            t_end,
            &history,
            fit_window,
        );
    }

    let kappa = run.require_kappa()?;
    let traj = simulate(
        &net,
        &built.model,
        kappa,
        tau,
        h_step,
        t_end,
        &history,
        &SimOptions::default(),
    )?;
    if let Some(t) = traj.blow_up {
        eprintln!(
            "warning: state norm passed the blow-up threshold at t = {t}; \
             the run was truncated there"
        );
    }
    let errors = sync_error(&traj);

    write_csv(
        &ctx.out.join("trajectory.csv"),
        &trajectory_csv(&thin_trajectory(&traj, ctx.stride)),
    )?;
    write_csv(&ctx.out.join("sync.csv"), &sync_csv(&traj.times, &errors))?;
    println!("samples = {}", traj.times.len());
    println!(
        "final_error = {}",
        errors.last().copied().unwrap_or(f64::NAN)
    );

    // The fit is best-effort: an unstable or truncated run has no decaying
    // window to fit, but its trajectory and error series are still the
    // product the command exists for.
    match fit_decay(&traj.times, &errors, fit_window) {
        Ok(fit) => {
            println!("eta = {}", fit.eta);
            println!("t_tr = {}", fit.t_tr);
            println!("r_squared = {}", fit.r_squared);
            if fit.low_confidence {
                println!("low-confidence fit (r_squared < 0.9)");
            }
            write_csv(&ctx.out.join("fit.csv"), &fit_csv(&fit))?;
        }
        Err(e) => eprintln!("decay fit skipped: {e}"),
    }
    Ok(())
}

fn fit_csv(fit: &DecayFit) -> String {
    format!(
        "eta,t_tr,window_lo,window_hi,r_squared,samples,low_confidence\n{},{},{},{},{},{},{}\n",
        fit.eta,
        fit.t_tr,
        fit.fit_window.0,
        fit.fit_window.1,
        fit.r_squared,
        fit.samples,
        u8::from(fit.low_confidence)
    )
}

/// Keep every `stride`-th stored sample plus the final one, so the written
/// series always ends at the last integrated time.
fn thin_trajectory(traj: &Trajectory, stride: usize) -> Trajectory {
    if stride <= 1 {
        return traj.clone();
    }
    let len = traj.times.len();
    let mut idx: Vec<usize> = (0..len).step_by(stride).collect();
    if let Some(&last) = idx.last() {
        if last != len - 1 {
            idx.push(len - 1);
        }
    }
    Trajectory {
        times: idx.iter().map(|&i| traj.times[i]).collect(),
        states: idx.iter().map(|&i| traj.states[i].clone()).collect(),
        keep_stride: traj.keep_stride * stride,
        ..traj.clone()
    }
}

#[allow(clippy::too_many_arguments)]
fn transient_sweep(
    ctx: &Ctx,
    model: &LocalModel,
    net: &Network,
    tr: &TransientsSection,
    tau: f64,
    h_step: f64,
    t_end: f64,
    history: &HistorySpec,
    fit_window: (f64, f64),
) -> Result<()> {
    if tr.kappas.is_empty() {
        return Err(Error::invalid("[transients] kappas must not be empty"));
    }
    let spec = laplacian_spectrum(net)?;
    let window = critical_coupling(model, &spec, ctx.cfg.run.omega_window_opt())?;
    println!("kappa_c = {}", window.kappa_c);

    let results: Vec<Result<(f64, DecayFit, f64, Option<f64>)>> = par_map(&tr.kappas, |&kappa| {
        let traj = simulate(
            net,
            model,
            kappa,
            tau,
            h_step,
            t_end,
            history,
            &SimOptions::default(),
        )?;
        let errors = sync_error(&traj);
        let fit = fit_decay(&traj.times, &errors, fit_window)?;
        let theory = transient_time(kappa, window.kappa_c, tau)?;
        Ok((kappa, fit, theory, traj.blow_up))
    });

    let mut rows = Vec::with_capacity(tr.kappas.len());
    for r in results {
        let (kappa, fit, theory, blow_up) = r?;
        if let Some(t) = blow_up {
            eprintln!("warning: kappa = {kappa} blew up at t = {t}");
        }
        println!(
            "kappa = {kappa}: t_tr = {}, theory = {theory}, r_squared = {}",
            fit.t_tr, fit.r_squared
        );
        rows.push((kappa, fit, theory));
    }
    write_csv(&ctx.out.join("transients.csv"), &transients_csv(&rows))
}
