//! Declarative config file; command-line flags take precedence.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use refcov::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Json,
    Text,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(untagged)]
pub enum StringOrList {
    #[default]
    Empty,
    One(String),
    Many(Vec<String>),
}

impl StringOrList {
    pub fn items(&self) -> Vec<String> {
        match self {
            StringOrList::Empty => Vec::new(),
            StringOrList::One(s) => s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
            StringOrList::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub groups: StringOrList,
    #[serde(default)]
    pub checks: StringOrList,
    pub c_long: Option<String>,
    pub c_short: Option<String>,
    pub seed: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub emit: Option<Emit>,
    pub allow_long: Option<bool>,
    pub timings: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
    }
}
