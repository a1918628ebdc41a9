//! Event-stream representation of time-varying graphs.

mod format;
mod import;
mod ops;
mod presence;
mod stream;
mod time;

pub use format::{parse_stream, serialize_stream, MAGIC};
pub use import::{import_contact_trace, ContactInterval, ImportError};
pub use ops::{
    snapshot_at, stream_intersection, stream_subset, stream_union, subdivide, validate_regularity,
    RegularityReport, Snapshot,
};
pub use presence::{validate_tvg, Span, Tvg};
pub use stream::{
    Convention, Event, EventStream, ParseFault, Rule, StreamError, StreamKind, StreamMeta, Transition,
    Violation,
};
pub use time::{Tick, TickParseError};
