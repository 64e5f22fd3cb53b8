use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

/// Effective run configuration, echoed verbatim into every JSON result
/// header. Sources, in increasing precedence: defaults, `--config`
/// file, command-line flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub support_cap: usize,
    pub max_denominator: u64,
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-8,
            max_iter: 200,
            seed: 42,
            support_cap: 25,
            max_denominator: 64,
            verbose: false,
        }
    }
}

/// Partial configuration as read from a `--config` file (same JSON
/// schema as [`RunConfig`], all fields optional).
#[derive(Default, Deserialize)]
pub struct FileConfig {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub support_cap: Option<usize>,
    pub max_denominator: Option<u64>,
    pub verbose: Option<bool>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config file {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config file {}", p.display()))
            }
        }
    }

    pub fn merge(file: FileConfig, flags: &crate::GlobalFlags) -> RunConfig {
        let base = RunConfig::default();
        RunConfig {
            tol: flags.tol.or(file.tol).unwrap_or(base.tol),
            max_iter: flags.max_iter.or(file.max_iter).unwrap_or(base.max_iter),
            seed: flags.seed.or(file.seed).unwrap_or(base.seed),
            support_cap: flags
                .support_cap
                .or(file.support_cap)
                .unwrap_or(base.support_cap),
            max_denominator: flags
                .max_denominator
                .or(file.max_denominator)
                .unwrap_or(base.max_denominator),
            verbose: flags.verbose || file.verbose.unwrap_or(false),
        }
    }

    pub fn solver_options(&self) -> sonc_core::SolverOptions {
        sonc_core::SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            verbose: self.verbose,
        }
    }

    pub fn build_options(&self) -> sonc_core::socrep::BuildOptions {
        sonc_core::socrep::BuildOptions {
            max_weight_denominator: self.max_denominator,
        }
    }
}
