//! Optional TOML configuration, located through `TOWERSEQ_CONFIG` or
//! `--config`. Every key is optional:
//!
//! ```toml
//! start_digits = 64            # first working precision, decimal digits
//! precision_cap = 4096         # last working precision, at least 64
//! dedup_policy = "commit-and-flag"   # or "skip-and-flag", "fail"
//! format = "text"              # or "jsonl", "csv"
//! checkpoint = "run.ckpt"      # default checkpoint for `enumerate`
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use towerseq::enumerate::DedupPolicy;
use towerseq::eval::PrecisionPolicy;
use towerseq::EnumConfig;

use crate::Format;

pub const MIN_CAP: u32 = 64;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Raw {
    start_digits: Option<u32>,
    precision_cap: Option<u32>,
    dedup_policy: Option<String>,
    format: Option<String>,
    checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub precision: PrecisionPolicy,
    pub policy: DedupPolicy,
    pub format: Format,
    pub checkpoint: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: PrecisionPolicy::default(),
            policy: DedupPolicy::default(),
            format: Format::Text,
            checkpoint: None,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, String> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Config::parse(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let raw: Raw = toml::from_str(text).map_err(|e| e.to_string())?;
        let mut c = Config::default();
        if let Some(cap) = raw.precision_cap {
            c.precision.cap_digits = cap;
        }
        if let Some(start) = raw.start_digits {
            c.precision.start_digits = start;
        }
        if let Some(p) = raw.dedup_policy {
            c.policy = p.parse()?;
        }
        if let Some(f) = raw.format {
            c.format = f.parse()?;
        }
        c.checkpoint = raw.checkpoint;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.precision.cap_digits < MIN_CAP {
            return Err(format!(
                "precision cap {} is below the minimum of {MIN_CAP} digits",
                self.precision.cap_digits
            ));
        }
        if self.precision.start_digits == 0 || self.precision.start_digits > self.precision.cap_digits {
            return Err(format!(
                "start precision {} must be between 1 and the cap {}",
                self.precision.start_digits, self.precision.cap_digits
            ));
        }
        Ok(())
    }

    pub fn enum_config(&self) -> EnumConfig {
        EnumConfig {
            precision: self.precision,
            policy: self.policy,
        }
    }
}
