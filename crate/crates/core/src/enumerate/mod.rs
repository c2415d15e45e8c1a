//! The deduplicated sequence: weight blocks in order, candidates in
//! enumeration order, only value-novel candidates committed.

mod checkpoint;
mod cursor;
mod generate;
mod ledger;
mod prefix;

pub use checkpoint::CheckpointError;
pub use cursor::{
    entries_up_to, prefix, Counters, DedupPolicy, EnumConfig, EnumCursor, EnumError, FlagEvent,
    SequenceEntry,
};
pub use generate::{atoms_of_weight, generate_weight_block};
pub use ledger::DedupLedger;
pub use prefix::{compare_streams, golden_prefix, verify_prefix, Divergence, PrefixReport};
