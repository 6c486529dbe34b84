//! Run files and parameter resolution. Command-line flags override the
//! `params` object of a run file; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Missing(String),
    #[error("config {path}: {message}")]
    Schema { path: String, message: String },
}

impl ConfigError {
    fn schema(path: impl Into<String>, message: impl ToString) -> Self {
        ConfigError::Schema {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    Value::Object(Map::new())
}

impl RunFile {
    /// Reads and validates the envelope; relative paths inside `params`
    /// are resolved by the commands against the working directory.
    pub fn load(path: &Path, command: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Missing(format!("cannot read config {}: {e}", path.display())))?;
        let file: RunFile = serde_json::from_str(&text).map_err(|e| ConfigError::schema(path.display().to_string(), e))?;
        if let Some(c) = &file.command {
            if c != command {
                return Err(ConfigError::schema(
                    path.display().to_string(),
                    format!("file is for `{c}` but `{command}` was invoked"),
                ));
            }
        }
        if !file.params.is_object() {
            return Err(ConfigError::schema(path.display().to_string(), "`params` must be an object"));
        }
        Ok(file)
    }
}

/// Overlays the flags that were given onto the file parameters and
/// re-validates the result.
pub fn merge<P: Serialize + DeserializeOwned>(flags: P, params: Option<Value>) -> Result<P, ConfigError> {
    let mut base = match params {
        Some(Value::Object(m)) => m,
        Some(_) => return Err(ConfigError::schema("params", "expected an object")),
        None => Map::new(),
    };
    let given = serde_json::to_value(&flags).map_err(|e| ConfigError::schema("flags", e))?;
    if let Value::Object(m) = given {
        for (k, v) in m {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    parse(Value::Object(base))
}

pub fn parse<P: DeserializeOwned>(params: Value) -> Result<P, ConfigError> {
    serde_json::from_value(params).map_err(|e| ConfigError::schema("params", e))
}
