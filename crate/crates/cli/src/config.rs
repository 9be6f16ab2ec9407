//! JSON configuration file and flag/file/default precedence.

use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::ArgMatches;
use lupus_core::curves::{CurveParams, InertiaScaling};
use lupus_core::dataprep::MissingPolicy;
use serde::Deserialize;

use crate::CliError;

/// Every key is optional; a key applies to whichever subcommand uses it.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    // optimizer
    pub variant: Option<String>,
    pub agents: Option<usize>,
    pub iters: Option<usize>,
    pub inertia: Option<CurveParams<f64>>,
    pub leader: Option<CurveParams<f64>>,
    pub inertia_scaling: Option<InertiaScaling>,
    // bench
    pub functions: Option<Vec<String>>,
    pub dims: Option<Vec<usize>>,
    pub algs: Option<Vec<String>>,
    pub runs: Option<usize>,
    // data and model
    pub data: Option<PathBuf>,
    pub mode: Option<String>,
    pub hidden: Option<Vec<usize>>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub bp_epochs: Option<usize>,
    pub lr: Option<f64>,
    pub threshold: Option<f64>,
    pub train_fraction: Option<f64>,
    pub impute: Option<bool>,
    pub one_hot: Option<bool>,
    pub model: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Resolves a setting: an explicit command-line flag wins, then the config
/// file, then whatever clap filled in (environment or built-in default).
pub struct Resolver<'a> {
    matches: &'a ArgMatches,
}

impl<'a> Resolver<'a> {
    pub fn new(matches: &'a ArgMatches) -> Self {
        Resolver { matches }
    }

    fn explicit(&self, id: &str) -> bool {
        matches!(self.matches.value_source(id), Some(ValueSource::CommandLine))
    }

    pub fn pick<T>(&self, id: &str, flag: T, file: Option<T>) -> T {
        match file {
            Some(v) if !self.explicit(id) => v,
            _ => flag,
        }
    }

    /// Boolean switches can only be turned on from the command line.
    pub fn switch(&self, flag: bool, file: Option<bool>) -> bool {
        flag || file.unwrap_or(false)
    }
}

pub fn parse_curve(s: &str) -> Result<CurveParams<f64>, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    let [a, b, c, d] = parts[..] else {
        return Err(format!("expected four comma-separated numbers a,b,c,d, got '{s}'"));
    };
    CurveParams::new(a, b, c, d).map_err(|e| e.to_string())
}

pub fn missing_policy(impute: bool) -> MissingPolicy {
    if impute {
        MissingPolicy::ImputeMode
    } else {
        MissingPolicy::DropRows
    }
}
