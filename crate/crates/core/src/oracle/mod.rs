//! Brute-force ground truth: foremost journeys, exact reachability graphs,
//! and exact minimum dominating sets for small graphs.

mod domset;
mod journey;

pub use domset::{exact_min_dominating_set, EXACT_DOMSET_MAX_VERTICES};
pub use journey::{
    foremost_arrival, oracle_reachability_at, oracle_trg, oracle_tvg, ContactIndex, EarliestArrivalMap,
};

use crate::arcs::Vertex;
use crate::trace::{StreamError, Tick};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the oracle needs a contact stream")]
    NotContact,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("time {0} outside the trace")]
    TimeOutOfRange(Tick),
    #[error("exact dominating set limited to {EXACT_DOMSET_MAX_VERTICES} vertices, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Stream(#[from] StreamError),
}
