use std::collections::BTreeMap;

use crate::arcs::{Pair, Vertex};
use crate::trace::stream::{Event, EventStream, StreamError, StreamKind, StreamMeta};

/// One contact as recorded by a trace: `[up, down)` in raw time units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Deserialize, serde::Serialize)]
pub struct ContactInterval {
    pub u: Vertex,
    pub v: Vertex,
    pub up: u64,
    pub down: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImportError {
    #[error("contact {0:?} has zero or negative length")]
    ZeroLengthContact(ContactInterval),
    #[error("contacts {0:?} and {1:?} overlap")]
    Overlapping(ContactInterval, ContactInterval),
    #[error("contact {0:?} has a time that is not a multiple of eta={1}")]
    OffGrid(ContactInterval, u64),
    #[error("contact {0:?} names a vertex >= {1}")]
    VertexOutOfRange(ContactInterval, u32),
    #[error("contact {0:?} is a self-loop")]
    SelfContact(ContactInterval),
    #[error("eta must be positive")]
    ZeroEta,
    #[error(transparent)]
    Stream(#[from] StreamError),
}

/// Builds a contact stream from raw intervals. Times must be multiples of
/// `eta`; intervals of one pair that touch are merged. The horizon is the
/// latest `down`, unless a later one is given.
pub fn import_contact_trace(
    intervals: &[ContactInterval],
    eta: u64,
    tau: u64,
    n: u32,
    horizon: Option<u64>,
) -> Result<EventStream, ImportError> {
    if eta == 0 {
        return Err(ImportError::ZeroEta);
    }
    let mut by_pair: BTreeMap<Pair, Vec<(u64, u64, ContactInterval)>> = BTreeMap::new();
    for &c in intervals {
        if c.u >= n || c.v >= n {
            return Err(ImportError::VertexOutOfRange(c, n));
        }
        if c.u == c.v {
            return Err(ImportError::SelfContact(c));
        }
        if c.up % eta != 0 || c.down % eta != 0 {
            return Err(ImportError::OffGrid(c, eta));
        }
        if c.down < c.up + eta {
            return Err(ImportError::ZeroLengthContact(c));
        }
        let pair = (c.u.min(c.v), c.u.max(c.v));
        by_pair.entry(pair).or_default().push((c.up / eta, c.down / eta, c));
    }

    let mut events = Vec::new();
    let mut last = 0;
    for ((u, v), mut list) in by_pair {
        list.sort_unstable();
        let mut merged: Vec<(u64, u64, ContactInterval)> = Vec::new();
        for item in list {
            match merged.last_mut() {
                Some(prev) if item.0 < prev.1 => return Err(ImportError::Overlapping(prev.2, item.2)),
                Some(prev) if item.0 == prev.1 => prev.1 = item.1,
                _ => merged.push(item),
            }
        }
        for (up, down, _) in merged {
            last = last.max(down);
            events.push(Event::up(up, u, v));
            events.push(Event::down(down, u, v));
        }
    }
    let meta = StreamMeta {
        kind: StreamKind::Contact,
        eta,
        tau,
        nodes: n,
        horizon: horizon.unwrap_or(last).max(last),
    };
    Ok(EventStream::from_unsorted(meta, events)?)
}
