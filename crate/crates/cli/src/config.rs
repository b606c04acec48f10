//! `key=value` experiment configuration for `msp-sim`.

use std::path::Path;

use ome_core::msp::{ExperimentConfig, Family, Mode, Plugin, WeightModel};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("expected key=value, got {0:?}")]
    NotKeyValue(String),
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("missing required key {0}")]
    Missing(&'static str),
    #[error("reading weights file {path}: {source}")]
    WeightsFile { path: String, source: std::io::Error },
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue { key: key.into(), value: value.into() }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| bad(key, value))
}

/// Whitespace-separated weights, `#` comments allowed.
pub fn read_weights(path: &Path) -> Result<Vec<f64>, ConfigError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::WeightsFile { path: shown.clone(), source })?;
    text.lines()
        .flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace())
        .map(|w| w.parse().map_err(|_| bad("weights", w)))
        .collect()
}

/// Builds a configuration from `key=value` tokens. Later keys override
/// earlier ones; `seed` defaults to `default_seed`.
pub fn parse_config<'a, I: IntoIterator<Item = &'a str>>(tokens: I, default_seed: u64) -> Result<ExperimentConfig, ConfigError> {
    let mut family = None;
    let mut n = None;
    let mut epsilon = None;
    let mut rest = Vec::new();
    for tok in tokens {
        let (key, value) = tok.split_once('=').ok_or_else(|| ConfigError::NotKeyValue(tok.into()))?;
        match key {
            "family" => {
                family = Some(match value {
                    "rank1" => Family::Rank1,
                    "binary" => Family::Binary,
                    "free" => Family::Free,
                    _ => return Err(bad(key, value)),
                })
            }
            "n" => n = Some(parse_num::<usize>(key, value)?),
            "epsilon" => epsilon = Some(parse_num::<f64>(key, value)?),
            _ => rest.push((key, value)),
        }
    }
    let mut cfg = ExperimentConfig::new(
        family.ok_or(ConfigError::Missing("family"))?,
        n.ok_or(ConfigError::Missing("n"))?,
        epsilon.ok_or(ConfigError::Missing("epsilon"))?,
    );
    cfg.seed = default_seed;
    for (key, value) in rest {
        match key {
            "trials" => cfg.trials = parse_num(key, value)?,
            "seed" => cfg.seed = parse_num(key, value)?,
            "algorithm" => {
                cfg.plugin = match value {
                    "dynkin" => Plugin::Dynkin,
                    "threshold-greedy" => Plugin::ThresholdGreedy,
                    _ => return Err(bad(key, value)),
                }
            }
            "weights" => {
                cfg.weights = match value {
                    "uniform" => WeightModel::Uniform,
                    "exp" => WeightModel::Exponential,
                    _ => match value.strip_prefix("adversarial-file:") {
                        Some(path) => WeightModel::Fixed(read_weights(Path::new(path))?),
                        None => return Err(bad(key, value)),
                    },
                }
            }
            "k" => cfg.k = Some(parse_num(key, value)?),
            "d" => cfg.d = Some(parse_num(key, value)?),
            "k_cap" => cfg.k_cap = parse_num(key, value)?,
            "mode" => {
                cfg.mode = Some(match value {
                    "full" => Mode::Full,
                    "sparse" => Mode::Sparse,
                    _ => return Err(bad(key, value)),
                })
            }
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
    }
    Ok(cfg)
}

/// Tokens of a config file: whitespace separated, `#` comments.
pub fn file_tokens(text: &str) -> Vec<String> {
    text.lines()
        .flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace())
        .map(str::to_owned)
        .collect()
}
