//! Checkpoint files.
//!
//! ```text
//! towerseq-checkpoint v1
//! sha256 <hex digest of the body>
//! <body: one line of JSON>
//! ```
//!
//! The body records the cursor position, counters, flags, configuration and
//! the committed expressions in order. Values are not stored; loading
//! re-evaluates the committed expressions to rebuild the ledger.

use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::cursor::{Counters, EnumConfig, EnumCursor, FlagEvent};
use super::ledger::{Candidate, DedupLedger};
use crate::expr::Tower;

const MAGIC: &str = "towerseq-checkpoint";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint version {found} is not supported (expected {VERSION})")]
    VersionMismatch { found: String },
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Serialize, Deserialize)]
struct Body {
    weight: u32,
    position: usize,
    config: EnumConfig,
    counters: Counters,
    flags: Vec<FlagEvent>,
    committed: Vec<String>,
}

impl EnumCursor {
    pub fn to_checkpoint_string(&self) -> String {
        let body = Body {
            weight: self.weight,
            position: self.position,
            config: self.config,
            counters: self.counters,
            flags: self.flags.clone(),
            committed: (0..self.ledger.len())
                .map(|i| self.ledger.expr(i).render())
                .collect(),
        };
        let json = serde_json::to_string(&body).expect("serializable");
        format!("{MAGIC} v{VERSION}\nsha256 {}\n{json}\n", digest(&json))
    }

    pub fn from_checkpoint_str(text: &str) -> Result<Self, CheckpointError> {
        let corrupt = |m: &str| CheckpointError::Corrupt(m.to_string());
        let mut lines = text.splitn(3, '\n');
        let header = lines.next().unwrap_or_default();
        let version = header
            .strip_prefix(MAGIC)
            .and_then(|v| v.strip_prefix(" v"))
            .ok_or_else(|| corrupt("missing header"))?;
        if version != VERSION.to_string() {
            return Err(CheckpointError::VersionMismatch {
                found: version.to_string(),
            });
        }
        let expected = lines
            .next()
            .and_then(|l| l.strip_prefix("sha256 "))
            .ok_or_else(|| corrupt("missing digest"))?;
        let json = lines
            .next()
            .and_then(|b| b.strip_suffix('\n'))
            .ok_or_else(|| corrupt("truncated body"))?;
        if digest(json) != expected {
            return Err(corrupt("digest mismatch"));
        }
        let body: Body = serde_json::from_str(json).map_err(|e| corrupt(&e.to_string()))?;
        let towers = body
            .committed
            .iter()
            .map(|s| Tower::parse(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| corrupt(&e.to_string()))?;
        let mut cursor = EnumCursor::new(body.config);
        let bits = cursor.working_bits();
        let candidates: Vec<Candidate> = towers
            .into_par_iter()
            .map(|t| {
                let w = u32::try_from(t.weight()).unwrap_or(u32::MAX);
                Candidate::evaluate(t, w, bits)
            })
            .collect();
        let mut ledger = DedupLedger::default();
        for c in candidates {
            ledger.commit(c);
        }
        cursor.ledger = ledger;
        cursor.weight = body.weight;
        cursor.position = body.position;
        cursor.counters = body.counters;
        cursor.flags = body.flags;
        Ok(cursor)
    }

    pub fn save_checkpoint(&self, path: &Path) -> Result<(), CheckpointError> {
        // write-then-rename so an interrupted save never leaves half a file
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_checkpoint_string())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load_checkpoint(path: &Path) -> Result<Self, CheckpointError> {
        EnumCursor::from_checkpoint_str(&fs::read_to_string(path)?)
    }
}

fn digest(body: &str) -> String {
    Sha256::digest(body.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
