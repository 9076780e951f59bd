//! Experiment configuration: one TOML file with a `[model]` section, an
//! optional `[network]` section, shared `[run]` parameters, and per-command
//! sections (`[map]`, `[sweep]`, `[transients]`).
//!
//! Unknown keys are rejected so typos surface as config errors instead of
//! silently falling back to defaults. Input paths (matrices, edge lists) are
//! resolved relative to the config file's directory, so a config travels
//! with its data files.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::Deserialize;

use delay_sync_core::graph::{
    gen_ba, gen_directed_ring, gen_er, gen_regular, read_edge_list, Network, RegularKind,
};
use delay_sync_core::sl::{sl_equilibrium_model, SLParams};
use delay_sync_core::spectrum::LocalModel;
use delay_sync_core::sweep::EnsembleKind;
use delay_sync_core::{Error, Result};

/// Above this size the dense Laplacian eigensolve (O(n³)) dominates the
/// runtime; the tool still runs but warns on stderr.
pub const DENSE_EIG_WARN_N: usize = 8192;

/// Grid points per asymptotic branch when `run.omega_samples` is absent.
pub const DEFAULT_OMEGA_SAMPLES: usize = 1001;

/// History scale when `run.history_scale` is absent: small enough that the
/// linearized analysis applies from t = 0.
pub const DEFAULT_HISTORY_SCALE: f64 = 1e-3;

pub fn warn_large_n(n: usize) {
    if n > DENSE_EIG_WARN_N {
        eprintln!(
            "warning: network size n = {n} exceeds {DENSE_EIG_WARN_N}; dense \
             eigensolves scale as n^3 and may take very long"
        );
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub network: Option<NetworkSection>,
    #[serde(default)]
    pub run: RunSection,
    pub map: Option<MapSection>,
    pub sweep: Option<SweepSection>,
    pub transients: Option<TransientsSection>,
}

/// Read, parse, and validate a config file. Returns the config plus the
/// directory input paths are resolved against.
pub fn load_config(path: &Path) -> Result<(ExperimentConfig, PathBuf)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: ExperimentConfig = toml::from_str(&text)
        .map_err(|e| Error::invalid(format!("config {}: {e}", path.display())))?;
    cfg.validate()?;
    let base = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((cfg, base))
}

impl ExperimentConfig {
    /// The `[network]` section, required by window/spectrum/simulate.
    pub fn network(&self) -> Result<&NetworkSection> {
        self.network
            .as_ref()
            .ok_or_else(|| Error::invalid("a [network] section is required for this command"))
    }

    /// Every numeric field must be finite (TOML admits `inf` and `nan`
    /// literals, which would otherwise leak into the numerics).
    fn validate(&self) -> Result<()> {
        let mut fields: Vec<(&str, f64)> = Vec::new();
        let optional = [
            ("model.alpha", self.model.alpha),
            ("model.beta", self.model.beta),
            ("network.p", self.network.as_ref().and_then(|n| n.p)),
            ("run.kappa", self.run.kappa),
            ("run.tau", self.run.tau),
            ("run.h_step", self.run.h_step),
            ("run.t_end", self.run.t_end),
            ("run.history_scale", self.run.history_scale),
            ("sweep.p0", self.sweep.as_ref().and_then(|s| s.p0)),
        ];
        for (name, v) in optional {
            if let Some(x) = v {
                fields.push((name, x));
            }
        }
        for (name, pair) in [
            ("run.omega_window", self.run.omega_window),
            ("run.fit_window", self.run.fit_window),
        ] {
            if let Some([a, b]) = pair {
                fields.push((name, a));
                fields.push((name, b));
            }
        }
        if let Some(m) = &self.map {
            for v in m.sigma.into_iter().chain(m.tau) {
                fields.push(("map.sigma/tau", v));
            }
        }
        if let Some(t) = &self.transients {
            for &k in &t.kappas {
                fields.push(("transients.kappas", k));
            }
        }
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Sl,
    CustomMatrices,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Synchronized state is the equilibrium at the origin.
    #[default]
    Equilibrium,
    /// Synchronized state is the Stuart-Landau limit cycle (requires
    /// kind = "sl"; the analysis then needs alpha > 0).
    Periodic,
}

/// Local node dynamics: either the Stuart-Landau oscillator (`kind = "sl"`,
/// fields `alpha`, `beta`) or explicit Jacobian/coupling matrices read from
/// files (`kind = "custom-matrices"`, fields `jacobian`, `coupling`).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub jacobian: Option<PathBuf>,
    pub coupling: Option<PathBuf>,
    #[serde(default)]
    pub regime: Regime,
}

/// A validated model plus, when it is Stuart-Landau, the closed-form
/// parameters the periodic-regime analyses need.
pub struct BuiltModel {
    pub model: LocalModel,
    pub sl: Option<SLParams>,
}

impl ModelSection {
    pub fn build(&self, base: &Path) -> Result<BuiltModel> {
        match self.kind {
            ModelKind::Sl => {
                if self.jacobian.is_some() || self.coupling.is_some() {
                    return Err(Error::invalid(
                        "[model] jacobian/coupling only apply to kind = \"custom-matrices\"",
                    ));
                }
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::invalid("[model] alpha is required for kind = \"sl\""))?;
                let beta = self
                    .beta
                    .ok_or_else(|| Error::invalid("[model] beta is required for kind = \"sl\""))?;
                let params = SLParams::new(alpha, beta)?;
                Ok(BuiltModel {
                    model: sl_equilibrium_model(&params)?,
                    sl: Some(params),
                })
            }
            ModelKind::CustomMatrices => {
                if self.alpha.is_some() || self.beta.is_some() {
                    return Err(Error::invalid(
                        "[model] alpha/beta only apply to kind = \"sl\"",
                    ));
                }
                if self.regime == Regime::Periodic {
                    return Err(Error::invalid(
                        "[model] regime = \"periodic\" requires kind = \"sl\"",
                    ));
                }
                let jp = self.jacobian.as_ref().ok_or_else(|| {
                    Error::invalid("[model] jacobian is required for kind = \"custom-matrices\"")
                })?;
                let hp = self.coupling.as_ref().ok_or_else(|| {
                    Error::invalid("[model] coupling is required for kind = \"custom-matrices\"")
                })?;
                let j = load_matrix(&base.join(jp))?;
                let h = load_matrix(&base.join(hp))?;
                Ok(BuiltModel {
                    model: LocalModel::linear(j, h)?,
                    sl: None,
                })
            }
        }
    }
}

/// Parse a square matrix from a plain text file: one row per line, entries
/// separated by commas.
fn load_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read matrix file {}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split(',') {
            let tok = tok.trim();
            let v: f64 = tok.parse().map_err(|_| {
                Error::invalid(format!(
                    "{}: line {}: bad matrix entry {tok:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    let q = rows.first().map_or(0, Vec::len);
    if q == 0 {
        return Err(Error::invalid(format!(
            "{}: matrix file has no entries",
            path.display()
        )));
    }
    if rows.iter().any(|r| r.len() != q) {
        return Err(Error::invalid(format!(
            "{}: rows have unequal lengths",
            path.display()
        )));
    }
    if rows.len() != q {
        return Err(Error::invalid(format!(
            "{}: matrix must be square, got {} rows of {} entries",
            path.display(),
            rows.len(),
            q
        )));
    }
    Ok(DMatrix::from_fn(q, q, |r, c| rows[r][c]))
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    Complete,
    Ring,
    Star,
    Path,
    DirectedRing,
    Er,
    Ba,
}

/// Network source: exactly one of `generator` (plus its parameters) or
/// `edge_list` (path to an edge-list file with header `n <count> directed
/// <0|1>` and one `src dst` pair per line).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub generator: Option<Generator>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub p: Option<f64>,
    pub edge_list: Option<PathBuf>,
}

impl NetworkSection {
    pub fn build(&self, base: &Path) -> Result<Network> {
        let net = match (self.generator, &self.edge_list) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "[network] needs exactly one source: generator or edge_list, not both",
                ))
            }
            (None, None) => {
                return Err(Error::invalid(
                    "[network] needs a generator or an edge_list path",
                ))
            }
            (None, Some(path)) => {
                if self.n.is_some() || self.seed.is_some() || self.p.is_some() {
                    return Err(Error::invalid(
                        "[network] n/seed/p do not apply to edge_list networks; \
                         the file header carries the size",
                    ));
                }
                let path = base.join(path);
                let file = fs::File::open(&path).map_err(|e| {
                    Error::invalid(format!("cannot open edge list {}: {e}", path.display()))
                })?;
                read_edge_list(std::io::BufReader::new(file))
                    .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?
            }
            (Some(gen), None) => {
                let n = self
                    .n
                    .ok_or_else(|| Error::invalid("[network] n is required with a generator"))?;
                let reject_seed = || -> Result<()> {
                    if self.seed.is_some() {
                        return Err(Error::invalid(format!(
                            "[network] seed does not apply to the {gen:?} generator"
                        )));
                    }
                    Ok(())
                };
                let reject_p = || -> Result<()> {
                    if self.p.is_some() {
                        return Err(Error::invalid(format!(
                            "[network] p only applies to the er generator, not {gen:?}"
                        )));
                    }
                    Ok(())
                };
                match gen {
                    Generator::Complete => {
                        reject_seed()?;
                        reject_p()?;
                        gen_regular(RegularKind::Complete, n)?
                    }
                    Generator::Ring => {
                        reject_seed()?;
                        reject_p()?;
                        gen_regular(RegularKind::UndirectedRing, n)?
                    }
                    Generator::Star => {
                        reject_seed()?;
                        reject_p()?;
                        gen_regular(RegularKind::Star, n)?
                    }
                    Generator::Path => {
                        reject_seed()?;
                        reject_p()?;
                        gen_regular(RegularKind::Path, n)?
                    }
                    Generator::DirectedRing => {
                        reject_seed()?;
                        reject_p()?;
                        gen_directed_ring(n)?
                    }
                    Generator::Er => {
                        let p = self.p.ok_or_else(|| {
                            Error::invalid("[network] p (edge probability) is required for er")
                        })?;
                        let seed = self
                            .seed
                            .ok_or_else(|| Error::invalid("[network] seed is required for er"))?;
                        gen_er(n, p, seed)?
                    }
                    Generator::Ba => {
                        reject_p()?;
                        let seed = self
                            .seed
                            .ok_or_else(|| Error::invalid("[network] seed is required for ba"))?;
                        gen_ba(n, seed)?
                    }
                }
            }
        };
        warn_large_n(net.n());
        Ok(net)
    }
}

/// Run parameters shared by the commands. Each command requires only the
/// fields it uses; `output` can be overridden by `--out`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub kappa: Option<f64>,
    pub tau: Option<f64>,
    pub h_step: Option<f64>,
    pub t_end: Option<f64>,
    pub omega_window: Option<[f64; 2]>,
    pub omega_samples: Option<usize>,
    pub history_seed: Option<u64>,
    pub history_scale: Option<f64>,
    pub fit_window: Option<[f64; 2]>,
    pub output: Option<PathBuf>,
}

impl RunSection {
    pub fn require_kappa(&self) -> Result<f64> {
        self.kappa
            .ok_or_else(|| Error::invalid("[run] kappa is required for this command"))
    }

    pub fn require_tau(&self) -> Result<f64> {
        self.tau
            .ok_or_else(|| Error::invalid("[run] tau is required for this command"))
    }

    pub fn require_h_step(&self) -> Result<f64> {
        self.h_step
            .ok_or_else(|| Error::invalid("[run] h_step is required for this command"))
    }

    pub fn require_t_end(&self) -> Result<f64> {
        self.t_end
            .ok_or_else(|| Error::invalid("[run] t_end is required for this command"))
    }

    pub fn require_omega_window(&self) -> Result<(f64, f64)> {
        let [lo, hi] = self.omega_window.ok_or_else(|| {
            Error::invalid("[run] omega_window = [lo, hi] is required for this command")
        })?;
        Ok((lo, hi))
    }

    pub fn omega_window_opt(&self) -> Option<(f64, f64)> {
        self.omega_window.map(|[lo, hi]| (lo, hi))
    }
}

/// Grid for the stability map over feedback strength σ and delay τ.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    pub sigma: [f64; 2],
    pub tau: [f64; 2],
    pub grid: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    Ba,
    Er,
}

/// Scaling-sweep plan: ensemble, sizes, and the number of seeds per size
/// (seeds 1..=seeds are used). `p0` multiplies the connectivity threshold
/// ln(n)/n for er and defaults to 1.1.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub ensemble: Ensemble,
    pub sizes: Vec<usize>,
    pub seeds: u64,
    pub p0: Option<f64>,
}

impl SweepSection {
    pub fn kind(&self) -> Result<EnsembleKind> {
        match self.ensemble {
            Ensemble::Ba => {
                if self.p0.is_some() {
                    return Err(Error::invalid(
                        "[sweep] p0 only applies to ensemble = \"er\"",
                    ));
                }
                Ok(EnsembleKind::BarabasiAlbert)
            }
            Ensemble::Er => Ok(EnsembleKind::ErdosRenyi {
                p0: self.p0.unwrap_or(1.1),
            }),
        }
    }
}

/// Coupling values for the transient-time sweep mode of `simulate`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransientsSection {
    pub kappas: Vec<f64>,
}
