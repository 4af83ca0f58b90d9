//! Configuration ingestion: JSON config file (path from `--config` or the
//! `PERSUASION_CONFIG` environment variable), overridden field by field by
//! command-line flags. Model parameters have no silent defaults.

use std::fs;
use std::path::PathBuf;

use persuasion_core::model::RuleMode;
use persuasion_core::Params;
use serde::Deserialize;

use crate::CliError;

/// Config-file schema. A previously emitted solution document is also
/// accepted: its embedded `config` object is used and the result fields are
/// ignored.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub p: Option<f64>,
    pub c: Option<f64>,
    pub e: Option<f64>,
    pub mu_a: Option<f64>,
    pub mu_b: Option<f64>,
    pub mode: Option<RuleMode>,
    pub grid: Option<usize>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

/// Flag-level overrides (every field beats the file).
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub p: Option<f64>,
    pub c: Option<f64>,
    pub e: Option<f64>,
    pub mu_a: Option<f64>,
    pub mu_b: Option<f64>,
    pub mode: Option<RuleMode>,
    pub grid: Option<usize>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: Params,
    pub mode: RuleMode,
    pub grid: usize,
    pub samples: u64,
    pub seed: u64,
}

pub const DEFAULT_GRID: usize = 201;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

/// Environment variable that may supply the config path.
pub const CONFIG_ENV: &str = "PERSUASION_CONFIG";

fn load_file(path: &PathBuf) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Io(format!("cannot read config {}: {err}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|err| CliError::Config(format!("config {} is not JSON: {err}", path.display())))?;
    // solution documents nest the config under a "config" key
    let config_value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(config_value)
        .map_err(|err| CliError::Config(format!("config {}: {err}", path.display())))
}

/// Resolves file, environment, and flags into a validated [`RunConfig`].
pub fn resolve(config_path: Option<PathBuf>, flags: Overrides) -> Result<RunConfig, CliError> {
    let path = config_path.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let file = match path {
        Some(path) => load_file(&path)?,
        None => FileConfig::default(),
    };

    let mut missing = Vec::new();
    let mut need = |name: &str, flag: Option<f64>, file: Option<f64>| -> f64 {
        match flag.or(file) {
            Some(v) => v,
            None => {
                missing.push(name.to_string());
                f64::NAN
            }
        }
    };
    let p = need("p", flags.p, file.p);
    let c = need("c", flags.c, file.c);
    let e = need("e", flags.e, file.e);
    let mu_a = need("mu_a", flags.mu_a, file.mu_a);
    let mu_b = need("mu_b", flags.mu_b, file.mu_b);
    if !missing.is_empty() {
        return Err(CliError::Config(format!(
            "missing model parameters: {} (set them via flags or a config file)",
            missing.join(", ")
        )));
    }

    let params = Params::new(p, c, e, mu_a, mu_b).map_err(CliError::Model)?;
    let grid = flags.grid.or(file.grid).unwrap_or(DEFAULT_GRID);
    if grid < 2 {
        return Err(CliError::Config(format!(
            "grid must be at least 2 (got {grid})"
        )));
    }
    let samples = flags.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    if samples < 1 {
        return Err(CliError::Config("samples must be at least 1".to_string()));
    }
    Ok(RunConfig {
        params,
        mode: flags.mode.or(file.mode).unwrap_or(RuleMode::Paper),
        grid,
        samples,
        seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
    })
}
