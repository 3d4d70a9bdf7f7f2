//! Config files: TOML tables whose keys are the long flag names with
//! underscores. Flags override the file, which overrides built-in defaults.

use std::path::Path;

use anyhow::Context;
use serde::de::DeserializeOwned;

use crate::cmd::Failure;

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("--config: cannot read {}", path.display()))
        .map_err(Failure::usage)?;
    toml::from_str(&text)
        .with_context(|| format!("--config: {} is not a valid config", path.display()))
        .map_err(Failure::usage)
}

/// Fills every `None` field of `$flags` from `$file`.
macro_rules! merge {
    ($flags:expr, $file:expr; $($field:ident),+ $(,)?) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field; } )+
    };
}
pub(crate) use merge;

/// Parses a comma-separated list of reals for the flag `flag`.
pub fn parse_grid(flag: &str, raw: &str) -> Result<Vec<f64>, Failure> {
    let values = raw
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| match s {
            "inf" => Ok(f64::INFINITY),
            _ => s.parse::<f64>(),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(anyhow::anyhow!("--{flag}: {e} in {raw:?}")))?;
    if values.is_empty() {
        return Err(Failure::usage(anyhow::anyhow!("--{flag} is empty")));
    }
    Ok(values)
}
