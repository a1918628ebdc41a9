//! Lower and upper bounds on reachability graphs, computed by streaming
//! composition of event streams.

mod compose;
mod exact;
mod family;
mod reach;

pub use compose::{compose_lower, CompositionStats};
pub use exact::{compose_exact_at_instants, compose_samples, zero_tau_trg, InstantComposition};
pub use family::{
    bootstrap_family, derive_unit_trg, family_add, upper_from_lower, CompositionRecord, LowerFamily,
};
pub use reach::{reach_delays, ReachBounds, ReachOutput};

use crate::arcs::Pair;
use crate::trace::StreamError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("expected a contact stream")]
    NotContact,
    #[error("expected a reachability stream")]
    NotReach,
    #[error("zero traversal time needs the connected-component path")]
    ZeroTau,
    #[error("metadata mismatch: {0}")]
    MetadataMismatch(String),
    #[error("input events are not in canonical order")]
    Unsorted,
    #[error("{0}")]
    Precondition(String),
    #[error("family bases {d} and {m} must be positive multiples of tau = {tau}")]
    BaseNotMultiple { d: u64, m: u64, tau: u64 },
    #[error("arc counter for {pair:?} dropped below zero at step {t}")]
    CounterUnderflow { pair: Pair, t: u64 },
    #[error(transparent)]
    Stream(#[from] StreamError),
}
