//! Optional `key = value` configuration file (TOML syntax). Command-line
//! flags take precedence over anything set here.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::admissibility::Prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Starting precision for the analyzer, in bits.
    pub precision: Option<usize>,
    pub max_unity_order: Option<u64>,
    /// Comma-separated, e.g. `"2,3,5,7,generic"`.
    pub p_sweep: Option<String>,
    pub jobs: Option<usize>,
    pub aliases: Option<PathBuf>,
    pub max_g: Option<usize>,
    pub allow_g6: Option<bool>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn primes(&self) -> Result<Option<Vec<Prime>>> {
        self.p_sweep.as_deref().map(parse_prime_list).transpose()
    }
}

/// Parses `"2,3,generic"`.
pub fn parse_prime_list(s: &str) -> Result<Vec<Prime>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(Prime::parse).collect()
}
