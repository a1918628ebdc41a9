use std::collections::{HashMap, HashSet};

use crate::arcs::{Pair, Vertex};
use crate::engine::EngineError;
use crate::trace::{Event, EventStream, StreamKind, StreamMeta, Transition};

/// Counters reported by one run of [`compose_lower`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompositionStats {
    pub events_in: usize,
    pub events_out: usize,
    /// Largest number of live entries held at once across the counter, the
    /// adjacency sets, the delayed lists and the output bookkeeping.
    pub peak_entries: usize,
}

struct Cursor<'a> {
    events: &'a [Event],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a EventStream) -> Self {
        Cursor {
            events: s.events(),
            pos: 0,
        }
    }

    /// Events at time `t`; assumes earlier times were already taken.
    fn take(&mut self, t: u64) -> &'a [Event] {
        let start = self.pos;
        while self.pos < self.events.len() && self.events[self.pos].t == t {
            self.pos += 1;
        }
        &self.events[start..self.pos]
    }

    fn take_before(&mut self, t: u64) -> &'a [Event] {
        let start = self.pos;
        while self.pos < self.events.len() && self.events[self.pos].t < t {
            self.pos += 1;
        }
        &self.events[start..self.pos]
    }
}

/// `adj[x]` holds the far endpoints of arcs incident to `x`.
struct Adjacency {
    sets: Vec<HashSet<Vertex>>,
    len: usize,
}

impl Adjacency {
    fn new(n: usize) -> Self {
        Adjacency {
            sets: vec![HashSet::new(); n],
            len: 0,
        }
    }

    fn add(&mut self, key: Vertex, other: Vertex) {
        if self.sets[key as usize].insert(other) {
            self.len += 1;
        }
    }

    fn remove(&mut self, key: Vertex, other: Vertex) {
        if self.sets[key as usize].remove(&other) {
            self.len -= 1;
        }
    }

    fn get(&self, key: Vertex) -> &HashSet<Vertex> {
        &self.sets[key as usize]
    }
}

struct Counter {
    counts: HashMap<Pair, u32>,
    /// Arcs whose count reached or left zero since the last emission.
    dirty: HashSet<Pair>,
    time: u64,
}

impl Counter {
    fn inc(&mut self, p: Pair) {
        if p.0 == p.1 {
            return;
        }
        let c = self.counts.entry(p).or_insert(0);
        if *c == 0 {
            self.dirty.insert(p);
        }
        *c += 1;
    }

    fn dec(&mut self, p: Pair) -> Result<(), EngineError> {
        if p.0 == p.1 {
            return Ok(());
        }
        match self.counts.get_mut(&p) {
            Some(c) if *c > 1 => *c -= 1,
            Some(_) => {
                self.counts.remove(&p);
                self.dirty.insert(p);
            }
            None => return Err(EngineError::CounterUnderflow { pair: p, t: self.time }),
        }
        Ok(())
    }

    fn get(&self, p: &Pair) -> u32 {
        self.counts.get(p).copied().unwrap_or(0)
    }
}

struct Lane<'a> {
    d_cur: Cursor<'a>,
    m_cur: Cursor<'a>,
    /// Incoming arcs of the d-side, keyed by target.
    d_in: Adjacency,
    /// Outgoing arcs of the m-side, keyed by source.
    m_out: Adjacency,
    delayed: Vec<Pair>,
    /// m-side events are read `shift` epochs ahead of the d-side.
    shift: u64,
}

fn check_inputs(pairs: &[(&EventStream, &EventStream)]) -> Result<StreamMeta, EngineError> {
    let Some((first, _)) = pairs.first() else {
        return Err(EngineError::Precondition("no input pairs".into()));
    };
    let meta = first.meta().clone();
    if meta.kind != StreamKind::Reach {
        return Err(EngineError::NotReach);
    }
    if meta.tau == 0 {
        return Err(EngineError::ZeroTau);
    }
    if pairs.len() as u64 != meta.tau {
        return Err(EngineError::Precondition(format!(
            "expected {} input pairs, got {}",
            meta.tau,
            pairs.len()
        )));
    }
    for s in pairs.iter().flat_map(|(a, b)| [a, b]) {
        if s.meta() != &meta {
            return Err(EngineError::MetadataMismatch(format!("{:?} vs {:?}", s.meta(), meta)));
        }
        if !s.events().is_sorted() {
            return Err(EngineError::Unsorted);
        }
    }
    Ok(meta)
}

/// Streaming lower-bound composition: `pairs[k] = (L_{d+k}, L_{m-k})` and the
/// result is `L_{d+m}`, exact at every epoch start and a lower bound inside
/// epochs.
pub fn compose_lower(
    pairs: &[(&EventStream, &EventStream)],
    d: u64,
    m: u64,
) -> Result<(EventStream, CompositionStats), EngineError> {
    let meta = check_inputs(pairs)?;
    if m < meta.tau {
        return Err(EngineError::Precondition(format!("m = {m} is below tau = {}", meta.tau)));
    }
    let n = meta.nodes as usize;
    let horizon = meta.horizon;
    let mut stats = CompositionStats {
        events_in: pairs.iter().map(|(a, b)| a.events().len() + b.events().len()).sum(),
        ..Default::default()
    };

    let mut lanes: Vec<Lane> = pairs
        .iter()
        .enumerate()
        .map(|(k, (a, b))| Lane {
            d_cur: Cursor::new(a),
            m_cur: Cursor::new(b),
            d_in: Adjacency::new(n),
            m_out: Adjacency::new(n),
            delayed: Vec::new(),
            shift: d + k as u64,
        })
        .collect();
    let mut counter = Counter {
        counts: HashMap::new(),
        dirty: HashSet::new(),
        time: 0,
    };
    let mut live: HashSet<Pair> = HashSet::new();
    let mut out: Vec<Event> = Vec::new();

    // m-side history before the first d-side epoch
    for lane in &mut lanes {
        for e in lane.m_cur.take_before(lane.shift) {
            let (u, v) = e.pair;
            match e.transition {
                Transition::Up => {
                    counter.inc(e.pair);
                    lane.m_out.add(u, v);
                }
                Transition::Down => {
                    counter.dec(e.pair)?;
                    lane.m_out.remove(u, v);
                }
            }
        }
    }

    for i in 0..=horizon + 1 {
        counter.time = i;
        let d_batches: Vec<&[Event]> = lanes.iter_mut().map(|l| l.d_cur.take(i)).collect();
        for batch in &d_batches {
            for e in batch.iter().filter(|e| e.transition == Transition::Up) {
                counter.inc(e.pair);
            }
        }

        if i == 0 {
            // nothing is emitted before time 0; whatever is already up
            // becomes an UP at time 0
            counter.dirty = counter.counts.keys().copied().collect();
        } else {
            let mut dirty: Vec<Pair> = counter.dirty.drain().collect();
            dirty.sort_unstable();
            let mut downs = Vec::new();
            for p in dirty {
                if live.insert(p) {
                    out.push(Event {
                        t: i - 1,
                        transition: Transition::Up,
                        pair: p,
                    });
                }
                if counter.get(&p) == 0 {
                    live.remove(&p);
                    downs.push(p);
                }
            }
            out.extend(downs.into_iter().map(|p| Event {
                t: i - 1,
                transition: Transition::Down,
                pair: p,
            }));
        }

        for (lane, d_batch) in lanes.iter_mut().zip(&d_batches) {
            for e in d_batch.iter().filter(|e| e.transition == Transition::Up) {
                let (u, v) = e.pair;
                lane.d_in.add(v, u);
                for &w in lane.m_out.get(v) {
                    counter.inc((u, w));
                }
            }
            let m_batch = lane.m_cur.take(i + lane.shift);
            for e in m_batch.iter().filter(|e| e.transition == Transition::Up) {
                let (u, v) = e.pair;
                counter.inc(e.pair);
                lane.m_out.add(u, v);
                for &w in lane.d_in.get(u) {
                    counter.inc((w, v));
                }
            }
            for p in std::mem::take(&mut lane.delayed) {
                counter.dec(p)?;
            }
            for e in m_batch.iter().filter(|e| e.transition == Transition::Down) {
                let (u, v) = e.pair;
                lane.delayed.push(e.pair);
                lane.m_out.remove(u, v);
                for &w in lane.d_in.get(u) {
                    counter.dec((w, v))?;
                }
            }
            for e in d_batch.iter().filter(|e| e.transition == Transition::Down) {
                let (u, v) = e.pair;
                counter.dec(e.pair)?;
                lane.d_in.remove(v, u);
                for &w in lane.m_out.get(v) {
                    counter.dec((u, w))?;
                }
            }
        }

        let held = counter.counts.len()
            + counter.dirty.len()
            + live.len()
            + lanes
                .iter()
                .map(|l| l.d_in.len + l.m_out.len + l.delayed.len())
                .sum::<usize>();
        stats.peak_entries = stats.peak_entries.max(held);
    }

    stats.events_out = out.len();
    let stream = EventStream::new(meta, out)?;
    Ok((stream, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reach(n: u32, horizon: u64, events: Vec<Event>) -> EventStream {
        let meta = StreamMeta {
            kind: StreamKind::Reach,
            eta: 1,
            tau: 1,
            nodes: n,
            horizon,
        };
        EventStream::from_unsorted(meta, events).unwrap()
    }

    #[test]
    fn empty_inputs_give_empty_output() {
        let e = reach(3, 10, vec![]);
        let (out, stats) = compose_lower(&[(&e, &e)], 2, 2).unwrap();
        assert!(out.is_empty());
        assert_eq!(stats.events_in, 0);
    }

    #[test]
    fn chains_through_middle_vertex() {
        // (0,1) on [0,5] in L_d, (1,2) on [2,7] in L_m, d = 2
        let a = reach(3, 10, vec![Event::up(0, 0, 1), Event::down(5, 0, 1)]);
        let b = reach(3, 10, vec![Event::up(2, 1, 2), Event::down(7, 1, 2)]);
        let (out, _) = compose_lower(&[(&a, &b)], 2, 2).unwrap();
        let tvg = out.to_tvg();
        use crate::trace::Tick;
        for k in 0..=5 {
            assert!(tvg.contains((0, 2), Tick::instant(k)), "instant {k}");
        }
        assert!(!tvg.contains((0, 2), Tick::instant(6)));
        // condition 2 shifts (1,2) back by d
        assert!(tvg.contains((1, 2), Tick::instant(0)));
        assert!(tvg.contains((1, 2), Tick::instant(5)));
        // the open epoch after 5 still sees (1,2) at 7, which drags it to 6
        assert!(!tvg.contains((1, 2), Tick::instant(7)));
        // condition 1 looks one epoch ahead
        assert!(tvg.contains((0, 1), Tick::instant(5)));
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let a = reach(3, 10, vec![]);
        let b = reach(4, 10, vec![]);
        assert!(matches!(compose_lower(&[(&a, &b)], 1, 1), Err(EngineError::MetadataMismatch(_))));
        assert!(matches!(compose_lower(&[], 1, 1), Err(EngineError::Precondition(_))));
    }
}
