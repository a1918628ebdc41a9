//! Temporal reachability graphs over contact traces.

pub mod arcs;
pub mod engine;
pub mod metrics;
pub mod oracle;
pub mod synth;
pub mod trace;

pub use arcs::{ArcSet, Pair, Vertex};
