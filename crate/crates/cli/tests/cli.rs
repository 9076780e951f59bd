//! End-to-end tests of the `delay-sync` binary: exit codes, output files
//! and their headers, determinism across reruns and thread counts, and the
//! documented warning/report channels.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_delay-sync")
}

/// Run the binary inside `dir` with a scrubbed environment so an inherited
/// thread-count variable cannot influence the tests.
fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .env_remove("DELAY_SYNC_THREADS")
        .args(args)
        .output()
        .expect("the binary should spawn")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code (killed by signal?)")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).expect("test file should be writable");
    path
}

const SL_STABLE: &str = "[model]\nkind = \"sl\"\nalpha = -1.0\nbeta = 3.141592653589793\n";
const SL_UNSTABLE: &str = "[model]\nkind = \"sl\"\nalpha = 1.0\nbeta = 3.141592653589793\n";
const RING4: &str = "[network]\ngenerator = \"directed-ring\"\nn = 4\n";
const TWO_NODE: &str = "[network]\ngenerator = \"ring\"\nn = 2\n";

/// Parse one named column out of a CSV body into f64s.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().expect("csv has a header").split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("column {name} not in header {header:?}"));
    lines
        .map(|l| {
            l.split(',')
                .nth(idx)
                .unwrap()
                .parse()
                .unwrap_or_else(|_| panic!("column {name} has a non-numeric entry in line {l:?}"))
        })
        .collect()
}

#[test]
fn window_reports_the_ring_threshold_and_the_product_identity_holds() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "cfg.toml", &format!("{SL_STABLE}\n{RING4}"));
    let out = run_in(
        dir.path(),
        &["window", "--config", "cfg.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let csv = fs::read_to_string(dir.path().join("o/window.csv")).unwrap();
    assert!(csv.starts_with("r0,rho_l,kappa_c,window_lo,window_hi\n"));
    let (r0, rho_l, kappa_c) = (
        column(&csv, "r0")[0],
        column(&csv, "rho_l")[0],
        column(&csv, "kappa_c")[0],
    );
    assert!((kappa_c - 0.5).abs() < 1e-6, "kappa_c = {kappa_c}");
    assert!((r0 - 1.0).abs() < 1e-6, "r0 = {r0}");
    assert!(
        (kappa_c * rho_l - r0).abs() <= 1e-12 * r0.abs(),
        "kappa_c * rho_l = {} should reproduce r0 = {r0}",
        kappa_c * rho_l
    );

    let stdout = String::from_utf8_lossy(&out.stdout);
    for needle in ["r0 = ", "rho_l = ", "kappa_c = ", "window = (0, "] {
        assert!(
            stdout.contains(needle),
            "stdout missing {needle:?}: {stdout}"
        );
    }
}

#[test]
fn invalid_configs_and_flags_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(&str, String)> = vec![
        ("not even toml", "this is { not toml".into()),
        (
            "unknown key",
            format!("{SL_STABLE}typo_field = 3\n\n{RING4}"),
        ),
        (
            "both network sources",
            format!("{SL_STABLE}\n[network]\ngenerator = \"ring\"\nn = 2\nedge_list = \"x\"\n"),
        ),
        (
            "er without p",
            format!("{SL_STABLE}\n[network]\ngenerator = \"er\"\nn = 16\nseed = 1\n"),
        ),
        (
            "non-finite numeric field",
            format!("{SL_STABLE}\n{RING4}\n[run]\nkappa = inf\n"),
        ),
        ("missing model section", RING4.into()),
    ];
    for (label, text) in cases {
        write(dir.path(), "bad.toml", &text);
        let out = run_in(
            dir.path(),
            &["window", "--config", "bad.toml", "--out", "o"],
        );
        assert_eq!(code(&out), 2, "case {label:?}: stderr {}", stderr(&out));
    }

    // Commands missing their dedicated section are config errors too.
    write(dir.path(), "nosweep.toml", &format!("{SL_STABLE}\n{RING4}"));
    let out = run_in(dir.path(), &["scaling", "--config", "nosweep.toml"]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
    let out = run_in(dir.path(), &["map", "--config", "nosweep.toml"]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));

    // A config file that does not exist.
    let out = run_in(dir.path(), &["window", "--config", "missing.toml"]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));

    // Zero stride makes no sense.
    write(dir.path(), "ok.toml", &format!("{SL_STABLE}\n{RING4}"));
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "ok.toml", "--stride", "0"],
    );
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));

    // A garbage thread-count variable is rejected, not silently ignored.
    let out = Command::new(bin())
        .current_dir(dir.path())
        .env("DELAY_SYNC_THREADS", "many")
        .args(["window", "--config", "ok.toml", "--out", "o"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("DELAY_SYNC_THREADS"),
        "stderr should name the variable: {}",
        stderr(&out)
    );
}

#[test]
fn regime_preconditions_exit_with_code_three() {
    let dir = tempfile::tempdir().unwrap();

    // An unstable local equilibrium has no synchronization window; the
    // message names the offending eigenvalues.
    write(dir.path(), "up.toml", &format!("{SL_UNSTABLE}\n{RING4}"));
    let out = run_in(dir.path(), &["window", "--config", "up.toml", "--out", "o"]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("Re >= 0"),
        "stderr should name the strongly unstable set: {}",
        stderr(&out)
    );

    // The stability map needs the limit-cycle regime (alpha > 0).
    write(
        dir.path(),
        "mapdown.toml",
        &format!("{SL_STABLE}\n[map]\nsigma = [-1.0, 1.0]\ntau = [1.0, 3.0]\ngrid = [3, 3]\n"),
    );
    let out = run_in(
        dir.path(),
        &["map", "--config", "mapdown.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));

    // The window command analyzes the equilibrium regime only.
    write(
        dir.path(),
        "wper.toml",
        &format!("{SL_UNSTABLE}regime = \"periodic\"\n\n{RING4}"),
    );
    let out = run_in(
        dir.path(),
        &["window", "--config", "wper.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn uncertified_laplacians_exit_with_code_four() {
    let dir = tempfile::tempdir().unwrap();
    // A directed path has a defective Laplacian (the nonzero eigenvalue's
    // geometric multiplicity is too small), so certification fails.
    write(dir.path(), "path3.edges", "n 3 directed 1\n0 1\n1 2\n");
    write(
        dir.path(),
        "cfg.toml",
        &format!("{SL_STABLE}\n[network]\nedge_list = \"path3.edges\"\n"),
    );
    let out = run_in(
        dir.path(),
        &["window", "--config", "cfg.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 4, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("diagonalizable"),
        "stderr should explain the certification failure: {}",
        stderr(&out)
    );
}

#[test]
fn spectrum_emits_per_block_files_and_counts_strong_roots() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "cfg.toml",
        &format!(
            "{SL_UNSTABLE}\n{TWO_NODE}\n[run]\nkappa = 0.7\ntau = 20.0\n\
             omega_window = [-12.5, 12.5]\nomega_samples = 501\n"
        ),
    );
    let out = run_in(
        dir.path(),
        &["spectrum", "--config", "cfg.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let blocks = fs::read_to_string(dir.path().join("o/blocks.csv")).unwrap();
    assert!(blocks.starts_with("block,re_mu,im_mu,re_sigma,im_sigma,roots,strong,max_re_lambda\n"));
    assert_eq!(blocks.lines().count(), 2, "one transverse block: {blocks}");
    assert_eq!(column(&blocks, "strong"), vec![2.0]);
    assert_eq!(column(&blocks, "re_sigma"), vec![-1.4]);

    let roots = fs::read_to_string(dir.path().join("o/roots_block1.csv")).unwrap();
    assert!(roots.starts_with("re_lambda,im_lambda,residual,family\n"));
    let strong_rows: Vec<&str> = roots.lines().filter(|l| l.ends_with(",strong")).collect();
    assert_eq!(strong_rows.len(), 2, "roots: {roots}");

    let branches = fs::read_to_string(dir.path().join("o/branches_block1.csv")).unwrap();
    assert!(branches.starts_with("branch,omega,gamma,re_g,im_g\n"));
    assert!(branches.lines().count() > 501, "both branches sampled");
}

#[test]
fn simulate_writes_trajectory_sync_and_fit_with_documented_schemas() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "cfg.toml",
        &format!(
            "{SL_STABLE}\n{TWO_NODE}\n[run]\nkappa = 0.3\ntau = 2.0\nh_step = 0.03125\n\
             t_end = 40.0\nhistory_seed = 3\nhistory_scale = 1e-3\n"
        ),
    );
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "cfg.toml", "--out", "full"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let traj = fs::read_to_string(dir.path().join("full/trajectory.csv")).unwrap();
    assert!(traj.starts_with("t,node,component,value\n"));
    let sync = fs::read_to_string(dir.path().join("full/sync.csv")).unwrap();
    assert!(sync.starts_with("t,error\n"));
    let fit = fs::read_to_string(dir.path().join("full/fit.csv")).unwrap();
    assert!(fit.starts_with("eta,t_tr,window_lo,window_hi,r_squared,samples,low_confidence\n"));

    // 40/0.03125 = 1280 steps: full resolution keeps all 1281 samples.
    assert_eq!(sync.lines().count(), 1 + 1281);
    assert_eq!(traj.lines().count(), 1 + 1281 * 2 * 2);

    // Striding thins the trajectory but never drops the final sample.
    let out = run_in(
        dir.path(),
        &[
            "simulate", "--config", "cfg.toml", "--out", "thin", "--stride", "7",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let thin = fs::read_to_string(dir.path().join("thin/trajectory.csv")).unwrap();
    // Samples 0, 7, ..., 1274 (183 of them) plus the re-appended final one.
    assert_eq!(thin.lines().count(), 1 + (183 + 1) * 2 * 2);
    let last_full = traj.lines().last().unwrap();
    let last_thin = thin.lines().last().unwrap();
    assert_eq!(
        last_full, last_thin,
        "the final sample must survive striding"
    );
    // The sync series is never strided.
    let thin_sync = fs::read_to_string(dir.path().join("thin/sync.csv")).unwrap();
    assert_eq!(thin_sync, sync);
}

#[test]
fn transient_sweep_mode_tracks_the_predicted_decay_times() {
    let dir = tempfile::tempdir().unwrap();
    // The predicted time -tau/ln(kappa/kappa_c) is a long-delay asymptotic,
    // so the check runs at a delay large against the local time scale.
    write(
        dir.path(),
        "cfg.toml",
        &format!(
            "{SL_STABLE}\n{TWO_NODE}\n[run]\ntau = 20.0\nh_step = 0.078125\nt_end = 400.0\n\
             history_seed = 7\nhistory_scale = 1e-3\n\n[transients]\nkappas = [0.2, 0.3]\n"
        ),
    );
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "cfg.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let csv = fs::read_to_string(dir.path().join("o/transients.csv")).unwrap();
    assert!(csv.starts_with("kappa,eta,t_tr,t_tr_theory,r_squared\n"));
    let measured = column(&csv, "t_tr");
    let theory = column(&csv, "t_tr_theory");
    assert_eq!(measured.len(), 2);
    for (m, th) in measured.iter().zip(&theory) {
        assert!(
            (m - th).abs() < 0.25 * th,
            "fitted t_tr = {m} should track the prediction {th}"
        );
    }
    // The theory column is -tau/ln(kappa/kappa_c) with kappa_c = 0.5 here.
    assert!((theory[0] - (-20.0 / (0.2f64 / 0.5).ln())).abs() < 1e-9);
}

#[test]
fn scaling_writes_rows_summaries_and_an_empty_skip_report() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "cfg.toml",
        &format!(
            "{SL_STABLE}\n[sweep]\nensemble = \"er\"\np0 = 1.5\nsizes = [48, 64]\nseeds = 3\n"
        ),
    );
    let out = run_in(
        dir.path(),
        &["scaling", "--config", "cfg.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let rows = fs::read_to_string(dir.path().join("o/scaling.csv")).unwrap();
    assert!(rows.starts_with("n,seed,g_max,rho_l,kappa_c,normalized\n"));
    let summary = fs::read_to_string(dir.path().join("o/scaling_summary.csv")).unwrap();
    assert!(summary.starts_with("n,samples,median,q25,q75\n"));
    let skipped = fs::read_to_string(dir.path().join("o/skipped.csv")).unwrap();

    let ns = column(&rows, "n");
    let kappa_c = column(&rows, "kappa_c");
    let normalized = column(&rows, "normalized");
    assert_eq!(ns.len() + (skipped.lines().count() - 1), 6);
    assert_eq!(summary.lines().count(), 1 + 2);

    // The normalized column is recomputable from the raw columns of the
    // same file, bit for bit: kappa_c * ln(n) for this ensemble.
    for ((n, k), norm) in ns.iter().zip(&kappa_c).zip(&normalized) {
        assert_eq!(
            (k * n.ln()).to_bits(),
            norm.to_bits(),
            "normalized must equal kappa_c * ln(n) exactly"
        );
    }
}

#[test]
fn reruns_and_thread_counts_give_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "spec.toml",
        &format!(
            "{SL_UNSTABLE}\n{TWO_NODE}\n[run]\nkappa = 0.7\ntau = 20.0\n\
             omega_window = [-6.0, 6.0]\nomega_samples = 301\n"
        ),
    );
    write(
        dir.path(),
        "sweep.toml",
        &format!(
            "{SL_STABLE}\n[sweep]\nensemble = \"er\"\np0 = 1.5\nsizes = [48, 64]\nseeds = 3\n"
        ),
    );

    let jobs: [(&str, &str, Vec<&str>); 2] = [
        (
            "spectrum",
            "spec.toml",
            vec!["roots_block1.csv", "branches_block1.csv", "blocks.csv"],
        ),
        (
            "scaling",
            "sweep.toml",
            vec!["scaling.csv", "scaling_summary.csv", "skipped.csv"],
        ),
    ];
    for (cmd, cfg, files) in jobs {
        for (out_dir, threads) in [("a", "1"), ("b", "1"), ("c", "3")] {
            let out = run_in(
                dir.path(),
                &[
                    cmd,
                    "--config",
                    cfg,
                    "--out",
                    &format!("{cmd}-{out_dir}"),
                    "--threads",
                    threads,
                ],
            );
            assert_eq!(code(&out), 0, "{cmd}: {}", stderr(&out));
        }
        for file in files {
            let a = fs::read(dir.path().join(format!("{cmd}-a")).join(file)).unwrap();
            let b = fs::read(dir.path().join(format!("{cmd}-b")).join(file)).unwrap();
            let c = fs::read(dir.path().join(format!("{cmd}-c")).join(file)).unwrap();
            assert_eq!(a, b, "{cmd}/{file}: rerun changed bytes");
            assert_eq!(a, c, "{cmd}/{file}: thread count changed bytes");
        }
    }
}

#[test]
fn the_environment_variable_supplies_the_default_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "cfg.toml", &format!("{SL_STABLE}\n{RING4}"));
    let out = Command::new(bin())
        .current_dir(dir.path())
        .env("DELAY_SYNC_THREADS", "2")
        .args(["window", "--config", "cfg.toml", "--out", "env"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let flagged = run_in(
        dir.path(),
        &[
            "window",
            "--config",
            "cfg.toml",
            "--out",
            "flag",
            "--threads",
            "1",
        ],
    );
    assert_eq!(code(&flagged), 0);
    assert_eq!(
        fs::read(dir.path().join("env/window.csv")).unwrap(),
        fs::read(dir.path().join("flag/window.csv")).unwrap(),
        "thread plumbing must not affect results"
    );
}

#[test]
fn oversized_networks_warn_but_still_run() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "cfg.toml",
        &format!("{SL_STABLE}\n[sweep]\nensemble = \"ba\"\nsizes = [8193]\nseeds = 1\n"),
    );
    let out = run_in(
        dir.path(),
        &["scaling", "--config", "cfg.toml", "--out", "o"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("8192"),
        "stderr should carry the size warning: {}",
        stderr(&out)
    );
    let rows = fs::read_to_string(dir.path().join("o/scaling.csv")).unwrap();
    assert_eq!(rows.lines().count(), 2, "the sweep still produced its row");
}
