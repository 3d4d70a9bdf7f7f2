pub mod family;
pub mod ising;
pub mod tree;

use std::path::Path;

use anyhow::Context;
use millefeuille::families::FamilyError;
use millefeuille::gibbs::GibbsError;
use millefeuille::tiling::TilingError;
use millefeuille::treestates::TreeError;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A failed command and its exit code: 1 for usage or configuration, 3 for
/// inconsistent data met at run time.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 1, error: error.into() }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 3, error: error.into() }
    }

    pub fn msg(msg: impl std::fmt::Display) -> Self {
        Self::usage(anyhow::anyhow!("{msg}"))
    }
}

/// Completed runs. A violated bound still keeps its outputs and exits 2.
#[derive(Debug)]
pub enum Outcome {
    Ok,
    BoundViolated(String),
}

impl From<TilingError> for Failure {
    fn from(e: TilingError) -> Self {
        match e {
            TilingError::DegenerateIncidence => Self::data(e),
            _ => Self::usage(e),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::ParameterOutOfRange(_) | FamilyError::MalformedSpec(_) => Self::usage(e),
            _ => Self::data(e),
        }
    }
}

impl From<GibbsError> for Failure {
    fn from(e: GibbsError) -> Self {
        match e {
            GibbsError::InvalidConfig(_) | GibbsError::Precondition(_) => Self::usage(e),
            GibbsError::Tiling(t) => t.into(),
            _ => Self::data(e),
        }
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::Gibbs(g) => g.into(),
            _ => Self::usage(e),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(flag: &str, path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("--{flag}: cannot read {}", path.display()))
        .map_err(Failure::usage)?;
    serde_json::from_str(&text)
        .with_context(|| format!("--{flag}: {} is not a valid file of this kind", path.display()))
        .map_err(Failure::usage)
}

/// Pretty JSON with an added `run_id` key tying it to its manifest.
pub fn json_with_run_id(value: &impl Serialize, run_id: &str) -> Vec<u8> {
    let mut map = serde_json::Map::new();
    map.insert("run_id".into(), run_id.into());
    match serde_json::to_value(value).expect("plain data") {
        serde_json::Value::Object(obj) => map.extend(obj),
        other => {
            map.insert("data".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("plain data");
    text.push('\n');
    text.into_bytes()
}

pub fn require<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::msg(format!("--{flag} is required")))
}
