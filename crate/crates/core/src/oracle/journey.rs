use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::arcs::{ArcSet, Vertex};
use crate::oracle::OracleError;
use crate::trace::{EventStream, Snapshot, StreamKind, Tick, Tvg};

/// Foremost-journey labels from one source and start time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarliestArrivalMap {
    pub source: Vertex,
    pub start: Tick,
    /// Earliest journey completion per vertex; `None` when unreachable.
    pub arrivals: Vec<Option<Tick>>,
    /// Hop count of the journey that produced each label.
    pub hops: Vec<u32>,
}

impl EarliestArrivalMap {
    pub fn arrival(&self, v: Vertex) -> Option<Tick> {
        self.arrivals[v as usize]
    }
}

/// Presence intervals `[lo, hi)` of one edge, in ticks.
type Intervals = Vec<(i64, i64)>;

/// Per-vertex incident edges with their presence intervals, in half-epoch
/// ticks and half-open: `[2·up, 2·down)`.
pub struct ContactIndex {
    n: usize,
    horizon: u64,
    /// Traversal time in ticks.
    tau: i64,
    adj: Vec<Vec<(Vertex, Intervals)>>,
}

impl ContactIndex {
    pub fn new(g: &EventStream) -> Result<Self, OracleError> {
        if g.kind() != StreamKind::Contact {
            return Err(OracleError::NotContact);
        }
        let n = g.nodes() as usize;
        let mut adj: Vec<Vec<(Vertex, Intervals)>> = vec![Vec::new(); n];
        let tvg = g.to_tvg();
        for (&(u, v), spans) in tvg.pairs() {
            // contact spans are [2up, 2down - 1] on the grid
            let list: Intervals = spans.iter().map(|s| (s.lo, s.hi + 1)).collect();
            adj[u as usize].push((v, list.clone()));
            adj[v as usize].push((u, list));
        }
        Ok(ContactIndex {
            n,
            horizon: g.horizon(),
            tau: 2 * g.tau() as i64,
            adj,
        })
    }

    /// Earliest arrival over one edge for a message available at `ready`.
    fn cross(&self, intervals: &[(i64, i64)], ready: i64) -> Option<i64> {
        for &(lo, hi) in intervals {
            let depart = ready.max(lo);
            let ok = if self.tau == 0 {
                depart < hi
            } else {
                depart + self.tau <= hi
            };
            if ok {
                return Some(depart + self.tau);
            }
        }
        None
    }

    /// Label-correcting earliest arrival with unrestricted waiting.
    pub fn foremost(&self, source: Vertex, start: Tick) -> Result<EarliestArrivalMap, OracleError> {
        if source as usize >= self.n {
            return Err(OracleError::VertexOutOfRange(source));
        }
        if start.raw() < 0 || start > Tick::instant(self.horizon) {
            return Err(OracleError::TimeOutOfRange(start));
        }
        let mut best: Vec<Option<i64>> = vec![None; self.n];
        let mut hops = vec![0u32; self.n];
        let mut heap = BinaryHeap::new();
        best[source as usize] = Some(start.raw());
        heap.push(Reverse((start.raw(), source)));
        while let Some(Reverse((t, u))) = heap.pop() {
            if best[u as usize] != Some(t) {
                continue;
            }
            for (v, intervals) in &self.adj[u as usize] {
                let Some(arr) = self.cross(intervals, t) else {
                    continue;
                };
                let slot = &mut best[*v as usize];
                if slot.is_none_or(|cur| arr < cur) {
                    *slot = Some(arr);
                    hops[*v as usize] = hops[u as usize] + 1;
                    heap.push(Reverse((arr, *v)));
                }
            }
        }
        Ok(EarliestArrivalMap {
            source,
            start,
            arrivals: best.into_iter().map(|b| b.map(Tick::from_raw)).collect(),
            hops,
        })
    }

    /// Arcs `(u, v)` with a journey departing at or after `at` and arriving
    /// no later than `at + delta`.
    pub fn reach_at(&self, delta: u64, at: Tick) -> Result<ArcSet, OracleError> {
        let mut arcs = ArcSet::new(self.n);
        let deadline = at.shifted(delta as i64);
        for u in 0..self.n as Vertex {
            let map = self.foremost(u, at)?;
            for (v, arr) in map.arrivals.iter().enumerate() {
                if v as Vertex != u && arr.is_some_and(|a| a <= deadline) {
                    arcs.insert(u, v as Vertex);
                }
            }
        }
        Ok(arcs)
    }
}

pub fn foremost_arrival(g: &EventStream, source: Vertex, start: Tick) -> Result<EarliestArrivalMap, OracleError> {
    ContactIndex::new(g)?.foremost(source, start)
}

pub fn oracle_reachability_at(g: &EventStream, delta: u64, at: Tick) -> Result<Snapshot, OracleError> {
    let arcs = ContactIndex::new(g)?.reach_at(delta, at)?;
    Ok(Snapshot { at, arcs })
}

/// The exact reachability graph with maximum delay `delta`, sampled at every
/// epoch start and every open epoch.
pub fn oracle_trg(g: &EventStream, delta: u64) -> Result<EventStream, OracleError> {
    let tvg = oracle_tvg(g, delta)?;
    Ok(tvg.to_stream()?)
}

/// Same as [`oracle_trg`] but returns the grid presence without encoding it.
pub fn oracle_tvg(g: &EventStream, delta: u64) -> Result<Tvg, OracleError> {
    let index = ContactIndex::new(g)?;
    let ticks = 2 * g.horizon() as i64 + 1;
    let samples = (0..ticks)
        .into_par_iter()
        .map(|raw| index.reach_at(delta, Tick::from_raw(raw)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tvg::from_samples(g.meta().as_reach(), &samples))
}
