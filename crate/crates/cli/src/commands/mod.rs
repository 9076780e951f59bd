//! The five experiment commands. Each one reads its parameters from the
//! shared [`ExperimentConfig`], computes with the library, prints a short
//! deterministic report to stdout, and writes CSV files into the output
//! directory. Reruns with the same config produce byte-identical files.

pub mod map;
pub mod scaling;
pub mod simulate;
pub mod spectrum;
pub mod window;

use std::path::Path;

use crate::config::ExperimentConfig;

/// Everything a command needs: the parsed config, the directory input paths
/// resolve against, the output directory (already created), and the
/// trajectory subsampling stride.
pub struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub base: &'a Path,
    pub out: &'a Path,
    pub stride: usize,
}
