//! Experiment configuration: JSON file values overridden by CLI flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub problem: Option<String>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub solver: Option<String>,
    pub kmax: Option<usize>,
    pub reorth: Option<String>,
    pub outputs: Option<PathBuf>,
    pub format: Option<String>,
    pub k0_threshold: Option<f64>,
    pub breakdown_tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Fully resolved settings for one command invocation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub problem: String,
    pub n: usize,
    pub eps: f64,
    pub seeds: Vec<u64>,
    pub solver: String,
    pub kmax: usize,
    pub reorth: String,
    pub outputs: PathBuf,
    pub format: String,
    pub k0_threshold: f64,
    pub breakdown_tol: f64,
}

pub struct Overrides {
    pub problem: Option<String>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub seeds: Vec<u64>,
    pub solver: Option<String>,
    pub kmax: Option<usize>,
    pub reorth: Option<String>,
    pub outputs: Option<PathBuf>,
    pub format: Option<String>,
    pub k0_threshold: Option<f64>,
    pub breakdown_tol: Option<f64>,
}

pub fn resolve(file: FileConfig, cli: Overrides) -> Resolved {
    Resolved {
        problem: cli.problem.or(file.problem).unwrap_or_default(),
        n: cli.n.or(file.n).unwrap_or(256),
        eps: cli.eps.or(file.eps).unwrap_or(1e-3),
        seeds: if cli.seeds.is_empty() {
            file.seeds.unwrap_or_else(|| vec![1])
        } else {
            cli.seeds
        },
        solver: cli.solver.or(file.solver).unwrap_or_else(|| "lsqr".into()),
        kmax: cli.kmax.or(file.kmax).unwrap_or(40),
        reorth: cli.reorth.or(file.reorth).unwrap_or_else(|| "full".into()),
        outputs: cli.outputs.or(file.outputs).unwrap_or_else(|| PathBuf::from(".")),
        format: cli.format.or(file.format).unwrap_or_else(|| "csv".into()),
        k0_threshold: cli
            .k0_threshold
            .or(file.k0_threshold)
            .unwrap_or(ireg_core::noise::DEFAULT_K0_THRESHOLD),
        breakdown_tol: cli.breakdown_tol.or(file.breakdown_tol).unwrap_or(1e-13),
    }
}
