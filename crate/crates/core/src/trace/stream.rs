use std::collections::HashMap;
use std::fmt;

use crate::arcs::Pair;
use crate::trace::presence::{Span, Tvg};
use crate::trace::time::Tick;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StreamKind {
    /// Undirected edges, smaller endpoint first.
    Contact,
    /// Directed arcs of a reachability graph or one of its bounds.
    Reach,
}

impl StreamKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StreamKind::Contact => "contact",
            StreamKind::Reach => "reach",
        }
    }
}

/// How an `UP at a` / `DOWN at b` pair maps onto time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Present on `[a, b)`; requires `b > a`.
    HalfOpen,
    /// Present on `[a, b]`; `a == b` is an ephemeral arc.
    Closed,
}

/// Header of a stream. Times are integers in units of `eta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StreamMeta {
    pub kind: StreamKind,
    pub eta: u64,
    pub tau: u64,
    pub nodes: u32,
    pub horizon: u64,
}

impl StreamMeta {
    pub fn contact(nodes: u32, horizon: u64, tau: u64) -> Self {
        StreamMeta {
            kind: StreamKind::Contact,
            eta: 1,
            tau,
            nodes,
            horizon,
        }
    }

    /// Contact traces are half-open. Reachability graphs with `tau >= 1` are
    /// closed; with `tau == 0` they are constant on every `[k, k+1)` and use
    /// the half-open convention as well.
    pub fn convention(&self) -> Convention {
        match (self.kind, self.tau) {
            (StreamKind::Contact, _) | (StreamKind::Reach, 0) => Convention::HalfOpen,
            (StreamKind::Reach, _) => Convention::Closed,
        }
    }

    /// Same metadata, reinterpreted as a reachability stream.
    pub fn as_reach(&self) -> StreamMeta {
        StreamMeta {
            kind: StreamKind::Reach,
            ..self.clone()
        }
    }

    pub fn last_tick(&self) -> Tick {
        Tick::instant(self.horizon)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transition {
    Up,
    Down,
}

impl Transition {
    pub fn as_str(self) -> &'static str {
        match self {
            Transition::Up => "UP",
            Transition::Down => "DOWN",
        }
    }
}

/// Field order gives the canonical sort: time, then UP before DOWN, then endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub t: u64,
    pub transition: Transition,
    pub pair: Pair,
}

impl Event {
    pub fn up(t: u64, u: u32, v: u32) -> Self {
        Event {
            t,
            transition: Transition::Up,
            pair: (u, v),
        }
    }

    pub fn down(t: u64, u: u32, v: u32) -> Self {
        Event {
            t,
            transition: Transition::Down,
            pair: (u, v),
        }
    }
}

/// Reasons a stream, or a presence function, is not a well-formed regular TVG.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Unsorted,
    DuplicateEvent,
    DownWithoutUp,
    UpWhilePresent,
    Unclosed,
    VertexOutOfRange,
    SelfLoop,
    ContactOrder,
    EphemeralContact,
    BeyondHorizon,
    /// Present on an open epoch but not at its start.
    OpenNotInStart,
    /// Present on an open epoch but not at the start of the next one.
    OpenNotInNextStart,
    /// Present at an epoch start but not on the open epoch that follows,
    /// which a half-open stream cannot express.
    InstantWithoutOpen,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Unsorted => "events out of canonical order",
            Rule::DuplicateEvent => "duplicate event",
            Rule::DownWithoutUp => "DOWN without matching UP",
            Rule::UpWhilePresent => "UP for a pair that is already present",
            Rule::Unclosed => "UP never followed by DOWN",
            Rule::VertexOutOfRange => "vertex id out of range",
            Rule::SelfLoop => "self-loop",
            Rule::ContactOrder => "contact endpoints must be ordered u < v",
            Rule::EphemeralContact => "zero-length contact interval",
            Rule::BeyondHorizon => "event after the horizon",
            Rule::OpenNotInStart => "present on open epoch but not at its start",
            Rule::OpenNotInNextStart => "present on open epoch but not at the next epoch start",
            Rule::InstantWithoutOpen => "present at epoch start but not during the epoch",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index of the offending event, when the violation comes from an event list.
    pub index: Option<usize>,
    pub at: Tick,
    pub pair: Pair,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} ({}, {}): {}", self.at, self.pair.0, self.pair.1, self.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StreamError {
    #[error("event {index}: {rule} at t={t} for ({}, {})", pair.0, pair.1)]
    Invalid {
        index: usize,
        t: u64,
        pair: Pair,
        rule: Rule,
    },
    #[error("line {line}: {fault}")]
    Parse { line: usize, fault: ParseFault },
    #[error("cannot encode ({}, {}) near t={at}: {rule}", pair.0, pair.1)]
    Unrepresentable { pair: Pair, at: Tick, rule: Rule },
    #[error("stream metadata differs: {0}")]
    MetadataMismatch(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseFault {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("malformed event: {0}")]
    Syntax(String),
    #[error("non-integer time {0:?}")]
    NonIntegerTime(String),
    #[error("{0}")]
    Rule(Rule),
}

/// A time-varying graph as a canonically sorted list of UP/DOWN events.
///
/// Values built through [`EventStream::new`] are validated and immutable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventStream {
    meta: StreamMeta,
    events: Vec<Event>,
}

impl EventStream {
    pub fn new(meta: StreamMeta, events: Vec<Event>) -> Result<Self, StreamError> {
        if let Some(v) = check_events(&meta, &events).into_iter().next() {
            let index = v.index.unwrap_or(0);
            return Err(StreamError::Invalid {
                index,
                t: events.get(index).map_or(0, |e| e.t),
                pair: v.pair,
                rule: v.rule,
            });
        }
        Ok(EventStream { meta, events })
    }

    /// Sorts the events first; still validates.
    pub fn from_unsorted(meta: StreamMeta, mut events: Vec<Event>) -> Result<Self, StreamError> {
        events.sort_unstable();
        EventStream::new(meta, events)
    }

    /// Builds a stream without any checks. Other operations assume a valid
    /// stream; use [`crate::trace::validate_regularity`] to inspect one.
    pub fn from_parts_unchecked(meta: StreamMeta, events: Vec<Event>) -> Self {
        EventStream { meta, events }
    }

    pub fn empty(meta: StreamMeta) -> Self {
        EventStream {
            meta,
            events: Vec::new(),
        }
    }

    pub fn meta(&self) -> &StreamMeta {
        &self.meta
    }

    pub fn kind(&self) -> StreamKind {
        self.meta.kind
    }

    pub fn nodes(&self) -> u32 {
        self.meta.nodes
    }

    pub fn horizon(&self) -> u64 {
        self.meta.horizon
    }

    pub fn tau(&self) -> u64 {
        self.meta.tau
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn into_parts(self) -> (StreamMeta, Vec<Event>) {
        (self.meta, self.events)
    }

    /// The events at time `t`, as a slice. `events_at` is a binary search;
    /// streaming consumers should prefer [`EventStream::batches`].
    pub fn events_at(&self, t: u64) -> &[Event] {
        let lo = self.events.partition_point(|e| e.t < t);
        let hi = self.events.partition_point(|e| e.t <= t);
        &self.events[lo..hi]
    }

    /// Consecutive runs of events sharing a timestamp.
    pub fn batches(&self) -> impl Iterator<Item = (u64, &[Event])> {
        self.events
            .chunk_by(|a, b| a.t == b.t)
            .map(|chunk| (chunk[0].t, chunk))
    }

    /// Presence of every pair on the half-epoch grid.
    pub fn to_tvg(&self) -> Tvg {
        let mut tvg = Tvg::new(self.meta.clone());
        let mut open: HashMap<Pair, u64> = HashMap::new();
        let conv = self.meta.convention();
        for e in &self.events {
            match e.transition {
                Transition::Up => {
                    open.insert(e.pair, e.t);
                }
                Transition::Down => {
                    if let Some(up) = open.remove(&e.pair) {
                        if let Some(span) = Span::from_interval(conv, up, e.t) {
                            tvg.insert(e.pair, span);
                        }
                    }
                }
            }
        }
        tvg
    }
}

/// Replays an event list and reports every structural problem found.
pub(crate) fn check_events(meta: &StreamMeta, events: &[Event]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut open: HashMap<Pair, u64> = HashMap::new();
    let conv = meta.convention();
    let n = meta.nodes;
    let mut push = |index: usize, e: &Event, rule: Rule| {
        out.push(Violation {
            index: Some(index),
            at: Tick::instant(e.t),
            pair: e.pair,
            rule,
        })
    };
    for (i, e) in events.iter().enumerate() {
        if i > 0 {
            let prev = &events[i - 1];
            if prev == e {
                push(i, e, Rule::DuplicateEvent);
                continue;
            }
            if prev > e {
                push(i, e, Rule::Unsorted);
            }
        }
        let (u, v) = e.pair;
        if u >= n || v >= n {
            push(i, e, Rule::VertexOutOfRange);
            continue;
        }
        if u == v {
            push(i, e, Rule::SelfLoop);
            continue;
        }
        if meta.kind == StreamKind::Contact && u > v {
            push(i, e, Rule::ContactOrder);
        }
        if e.t > meta.horizon {
            push(i, e, Rule::BeyondHorizon);
        }
        match e.transition {
            Transition::Up => {
                if open.insert(e.pair, e.t).is_some() {
                    push(i, e, Rule::UpWhilePresent);
                }
            }
            Transition::Down => match open.remove(&e.pair) {
                None => push(i, e, Rule::DownWithoutUp),
                Some(up) => {
                    if e.t < up {
                        push(i, e, Rule::Unsorted);
                    } else if conv == Convention::HalfOpen && e.t == up {
                        push(i, e, Rule::EphemeralContact);
                    }
                }
            },
        }
    }
    let mut unclosed: Vec<(Pair, u64)> = open.into_iter().collect();
    unclosed.sort_unstable();
    for (pair, t) in unclosed {
        let index = events
            .iter()
            .rposition(|e| e.pair == pair && e.transition == Transition::Up && e.t == t);
        out.push(Violation {
            index,
            at: Tick::instant(t),
            pair,
            rule: Rule::Unclosed,
        });
    }
    out
}
