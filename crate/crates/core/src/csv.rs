//! Plain-text CSV emission for every result type the command-line tool can
//! produce. Values are written with Rust's shortest-roundtrip float
//! formatting, so identical inputs always produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::dde::{DecayFit, Trajectory};
use crate::error::{Error, Result};
use crate::sl::SLStabilityMap;
use crate::spectrum::{ExactSpectrum, SpectrumBranch};
use crate::sweep::SweepResult;

/// Continuous spectrum branches: `branch,omega,gamma,re_g,im_g`.
/// A branch gap (singular reduced coefficient) appears as `gamma = inf`.
pub fn branches_csv(branches: &[SpectrumBranch]) -> String {
    let mut out = String::from("branch,omega,gamma,re_g,im_g\n");
    for b in branches {
        for i in 0..b.omega.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                b.branch, b.omega[i], b.gamma[i], b.g[i].re, b.g[i].im
            );
        }
    }
    out
}

/// Characteristic roots: `re_lambda,im_lambda,residual,family` with family
/// `pseudo` or `strong`.
pub fn roots_csv(spectrum: &ExactSpectrum) -> String {
    let mut out = String::from("re_lambda,im_lambda,residual,family\n");
    for r in &spectrum.roots {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.result.root.re,
            r.result.root.im,
            r.result.residual,
            r.family.label()
        );
    }
    out
}

/// Stability map over (σ, τ): `sigma,tau,max_re_lambda,degenerate_flag`.
pub fn map_csv(map: &SLStabilityMap) -> String {
    let mut out = String::from("sigma,tau,max_re_lambda,degenerate_flag\n");
    for c in &map.cells {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            c.sigma,
            c.tau,
            c.max_re_lambda,
            u8::from(c.degenerate)
        );
    }
    out
}

/// Long-format trajectory: `t,node,component,value`, one row per stored
/// scalar.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,node,component,value\n");
    for (t, row) in traj.times.iter().zip(&traj.states) {
        for node in 0..traj.n {
            for comp in 0..traj.q {
                let _ = writeln!(out, "{},{},{},{}", t, node, comp, row[node * traj.q + comp]);
            }
        }
    }
    out
}

/// Synchronization-error series: `t,error`.
pub fn sync_csv(times: &[f64], errors: &[f64]) -> String {
    let mut out = String::from("t,error\n");
    for (t, e) in times.iter().zip(errors) {
        let _ = writeln!(out, "{t},{e}");
    }
    out
}

/// Scaling-sweep samples: `n,seed,g_max,rho_l,kappa_c,normalized`.
pub fn scaling_csv(result: &SweepResult) -> String {
    let mut out = String::from("n,seed,g_max,rho_l,kappa_c,normalized\n");
    for r in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.seed, r.g_max, r.rho_l, r.kappa_c, r.normalized
        );
    }
    out
}

/// Per-size quantile summaries of a scaling sweep: `n,samples,median,q25,q75`.
pub fn scaling_summary_csv(result: &SweepResult) -> String {
    let mut out = String::from("n,samples,median,q25,q75\n");
    for s in &result.summaries {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.n, s.samples, s.median, s.q25, s.q75
        );
    }
    out
}

/// Sweep slots abandoned after the resample budget: `n,seed`.
pub fn skipped_csv(skipped: &[(usize, u64)]) -> String {
    let mut out = String::from("n,seed\n");
    for (n, seed) in skipped {
        let _ = writeln!(out, "{n},{seed}");
    }
    out
}

/// Measured-vs-predicted transient times over a coupling sweep:
/// `kappa,eta,t_tr,t_tr_theory,r_squared`.
pub fn transients_csv(rows: &[(f64, DecayFit, f64)]) -> String {
    let mut out = String::from("kappa,eta,t_tr,t_tr_theory,r_squared\n");
    for (kappa, fit, theory) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            kappa, fit.eta, fit.t_tr, theory, fit.r_squared
        );
    }
    out
}

/// Write a CSV string to a file, mapping I/O failures to input errors.
pub fn write_csv(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}
