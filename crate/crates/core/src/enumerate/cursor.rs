use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generate::generate_weight_block;
use super::ledger::{Candidate, DedupLedger, Verdict};
use crate::eval::{PrecisionPolicy, RealBall, ValueClass};
use crate::expr::Tower;

/// What to do with a candidate that cannot be separated from an earlier
/// entry at the precision cap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DedupPolicy {
    #[default]
    CommitAndFlag,
    SkipAndFlag,
    Fail,
}

impl FromStr for DedupPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "commit-and-flag" => Ok(DedupPolicy::CommitAndFlag),
            "skip-and-flag" => Ok(DedupPolicy::SkipAndFlag),
            "fail" => Ok(DedupPolicy::Fail),
            _ => Err(format!(
                "unknown dedup policy {s:?} (expected commit-and-flag, skip-and-flag or fail)"
            )),
        }
    }
}

impl fmt::Display for DedupPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DedupPolicy::CommitAndFlag => "commit-and-flag",
            DedupPolicy::SkipAndFlag => "skip-and-flag",
            DedupPolicy::Fail => "fail",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumConfig {
    pub precision: PrecisionPolicy,
    pub policy: DedupPolicy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub generated: u64,
    pub committed: u64,
    pub skipped_duplicate: u64,
    pub flagged: u64,
}

/// A candidate that overlapped an earlier entry at the precision cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagEvent {
    pub weight: u32,
    pub expr: String,
    /// 1-based index of the entry it could not be separated from.
    pub other_index: usize,
    pub other_expr: String,
    pub cap_digits: u32,
    /// Index assigned when the policy committed it anyway.
    pub committed_index: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("{expr} and entry {other_index} ({other_expr}) are indistinguishable at {cap_digits} digits")]
    IndistinguishablePair {
        expr: String,
        other_index: usize,
        other_expr: String,
        cap_digits: u32,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceEntry {
    pub index: usize,
    pub expr: Tower,
    pub weight: u32,
    pub value: ValueClass,
}

#[derive(Serialize)]
struct Record<'a> {
    index: usize,
    weight: u32,
    expr: &'a str,
    value: &'a str,
    exact: bool,
}

impl SequenceEntry {
    /// One JSONL record: index, weight, expr, 20-digit value, exact flag.
    pub fn to_jsonl(&self) -> String {
        let expr = self.expr.render();
        let value = self.value.to_decimal(20);
        serde_json::to_string(&Record {
            index: self.index,
            weight: self.weight,
            expr: &expr,
            value: &value,
            exact: self.value.is_exact(),
        })
        .expect("plain record")
    }
}

/// Candidates evaluated together; bounds memory on large blocks.
const CHUNK: usize = 4096;

/// Position in the deduplicated stream.
pub struct EnumCursor {
    pub(super) config: EnumConfig,
    pub(super) weight: u32,
    pub(super) position: usize,
    pub(super) block: Option<Vec<Tower>>,
    /// Evaluated candidates starting at `chunk_start` in the block.
    pub(super) chunk: Vec<Candidate>,
    pub(super) chunk_start: usize,
    pub(super) ledger: DedupLedger,
    pub(super) counters: Counters,
    pub(super) flags: Vec<FlagEvent>,
}

impl EnumCursor {
    pub fn new(config: EnumConfig) -> Self {
        EnumCursor {
            config,
            weight: 2,
            position: 0,
            block: None,
            chunk: Vec::new(),
            chunk_start: 0,
            ledger: DedupLedger::default(),
            counters: Counters::default(),
            flags: Vec::new(),
        }
    }

    pub fn config(&self) -> &EnumConfig {
        &self.config
    }

    /// Weight of the block being scanned.
    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Candidates of the current block already consumed.
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn flags(&self) -> &[FlagEvent] {
        &self.flags
    }

    pub fn ledger(&self) -> &DedupLedger {
        &self.ledger
    }

    pub fn next_entry(&mut self) -> Result<SequenceEntry, EnumError> {
        Ok(self.advance(None)?.expect("the stream is infinite"))
    }

    /// Next entry of weight at most `max_weight`, or `None` once the
    /// cursor would have to move past it.
    pub fn next_within(&mut self, max_weight: u32) -> Result<Option<SequenceEntry>, EnumError> {
        self.advance(Some(max_weight))
    }

    pub(super) fn working_bits(&self) -> u32 {
        PrecisionPolicy::bits(self.config.precision.start_digits)
    }

    fn advance(&mut self, limit: Option<u32>) -> Result<Option<SequenceEntry>, EnumError> {
        loop {
            if limit.is_some_and(|w| self.weight > w) {
                return Ok(None);
            }
            let bits = self.working_bits();
            let weight = self.weight;
            let block = self.block.get_or_insert_with(|| generate_weight_block(weight));
            if self.position >= block.len() {
                self.weight += 1;
                self.position = 0;
                self.block = None;
                self.chunk.clear();
                continue;
            }
            let offset = self.position.wrapping_sub(self.chunk_start);
            if offset >= self.chunk.len() {
                let end = (self.position + CHUNK).min(block.len());
                self.chunk = block[self.position..end]
                    .par_iter()
                    .map(|t| Candidate::evaluate(t.clone(), weight, bits))
                    .collect();
                self.chunk_start = self.position;
            }
            let cand = &self.chunk[self.position - self.chunk_start];
            self.position += 1;
            self.counters.generated += 1;
            match self.ledger.judge(cand, &self.config.precision) {
                Verdict::Duplicate { .. } => self.counters.skipped_duplicate += 1,
                Verdict::Novel => {
                    let cand = cand.clone();
                    return Ok(Some(self.commit(cand)));
                }
                Verdict::Indistinguishable { with } => {
                    self.counters.flagged += 1;
                    let event = FlagEvent {
                        weight,
                        expr: cand.tower.render(),
                        other_index: with + 1,
                        other_expr: self.ledger.expr(with).render(),
                        cap_digits: self.config.precision.cap_digits,
                        committed_index: None,
                    };
                    match self.config.policy {
                        DedupPolicy::CommitAndFlag => {
                            let cand = cand.clone();
                            self.flags.push(FlagEvent {
                                committed_index: Some(self.ledger.len() + 1),
                                ..event
                            });
                            return Ok(Some(self.commit(cand)));
                        }
                        DedupPolicy::SkipAndFlag => self.flags.push(event),
                        DedupPolicy::Fail => {
                            self.flags.push(event.clone());
                            return Err(EnumError::IndistinguishablePair {
                                expr: event.expr,
                                other_index: event.other_index,
                                other_expr: event.other_expr,
                                cap_digits: event.cap_digits,
                            });
                        }
                    }
                }
            }
        }
    }

    fn commit(&mut self, cand: Candidate) -> SequenceEntry {
        self.counters.committed += 1;
        let value = match &cand.exact {
            Some(q) => ValueClass::Exact(q.clone()),
            None => ValueClass::Irrational(RealBall::from(&cand.interval)),
        };
        let entry = SequenceEntry {
            index: self.ledger.len() + 1,
            expr: cand.tower.clone(),
            weight: cand.weight,
            value,
        };
        self.ledger.commit(cand);
        entry
    }
}

impl Iterator for EnumCursor {
    type Item = Result<SequenceEntry, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_entry())
    }
}

/// The first `n` entries.
pub fn prefix(n: usize, config: EnumConfig) -> Result<Vec<SequenceEntry>, EnumError> {
    EnumCursor::new(config).take(n).collect()
}

/// All entries of weight at most `max_weight`.
pub fn entries_up_to(max_weight: u32, config: EnumConfig) -> Result<Vec<SequenceEntry>, EnumError> {
    let mut cursor = EnumCursor::new(config);
    let mut out = Vec::new();
    while let Some(e) = cursor.next_within(max_weight)? {
        out.push(e);
    }
    Ok(out)
}
