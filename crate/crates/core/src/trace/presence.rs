use std::collections::BTreeMap;

use crate::arcs::{ArcSet, Pair};
use crate::trace::stream::{Convention, Event, EventStream, Rule, StreamError, StreamMeta, Violation};
use crate::trace::time::Tick;

/// A closed run of grid ticks `[lo, hi]` during which a pair is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn new(lo: Tick, hi: Tick) -> Self {
        assert!(lo <= hi, "empty span");
        Span {
            lo: lo.raw(),
            hi: hi.raw(),
        }
    }

    /// Grid image of an `UP at up` / `DOWN at down` interval; `None` when the
    /// interval covers no time at all.
    pub fn from_interval(conv: Convention, up: u64, down: u64) -> Option<Span> {
        let lo = 2 * up as i64;
        let hi = match conv {
            Convention::Closed => 2 * down as i64,
            Convention::HalfOpen => 2 * down as i64 - 1,
        };
        (lo <= hi).then_some(Span { lo, hi })
    }

    pub fn contains(&self, tick: Tick) -> bool {
        self.lo <= tick.raw() && tick.raw() <= self.hi
    }
}

/// Presence of every pair on the half-epoch grid.
///
/// Unlike an [`EventStream`] this can hold any piecewise-constant presence,
/// including shapes the stream's interval convention cannot encode, which is
/// what lets [`validate_tvg`] report them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tvg {
    meta: StreamMeta,
    spans: BTreeMap<Pair, Vec<Span>>,
}

impl Tvg {
    pub fn new(meta: StreamMeta) -> Self {
        Tvg {
            meta,
            spans: BTreeMap::new(),
        }
    }

    pub fn meta(&self) -> &StreamMeta {
        &self.meta
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Pair, &[Span])> {
        self.spans.iter().map(|(p, s)| (p, s.as_slice()))
    }

    pub fn spans(&self, pair: Pair) -> &[Span] {
        self.spans.get(&pair).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Adds presence, merging with overlapping or adjacent spans.
    pub fn insert(&mut self, pair: Pair, span: Span) {
        let list = self.spans.entry(pair).or_default();
        list.push(span);
        list.sort_unstable();
        let mut merged: Vec<Span> = Vec::with_capacity(list.len());
        for s in list.drain(..) {
            match merged.last_mut() {
                Some(last) if s.lo <= last.hi + 1 => last.hi = last.hi.max(s.hi),
                _ => merged.push(s),
            }
        }
        *list = merged;
    }

    pub fn contains(&self, pair: Pair, tick: Tick) -> bool {
        self.spans(pair).iter().any(|s| s.contains(tick))
    }

    pub fn sample(&self, tick: Tick) -> ArcSet {
        let mut set = ArcSet::new(self.meta.nodes as usize);
        for (&(u, v), list) in &self.spans {
            if list.iter().any(|s| s.contains(tick)) {
                set.insert(u, v);
            }
        }
        set
    }

    /// One arc set per tick `0 ..= 2T`.
    pub fn samples(&self) -> Vec<ArcSet> {
        let ticks = (2 * self.meta.horizon + 1) as usize;
        let mut out = vec![ArcSet::new(self.meta.nodes as usize); ticks];
        for (&(u, v), list) in &self.spans {
            for s in list {
                let lo = s.lo.max(0) as usize;
                let hi = (s.hi.max(-1) + 1).min(ticks as i64) as usize;
                for set in out.iter_mut().take(hi).skip(lo) {
                    set.insert(u, v);
                }
            }
        }
        out
    }

    /// Rebuilds presence from one arc set per tick, starting at tick 0.
    pub fn from_samples(meta: StreamMeta, samples: &[ArcSet]) -> Self {
        let mut tvg = Tvg::new(meta);
        let Some(first) = samples.first() else {
            return tvg;
        };
        let n = first.num_vertices();
        let mut run_start: BTreeMap<Pair, i64> = BTreeMap::new();
        let mut prev = ArcSet::new(n);
        for (tick, cur) in samples.iter().enumerate() {
            let tick = tick as i64;
            for p in cur.iter() {
                if !prev.contains(p.0, p.1) {
                    run_start.insert(p, tick);
                }
            }
            for p in prev.iter() {
                if !cur.contains(p.0, p.1) {
                    let lo = run_start.remove(&p).expect("run start recorded");
                    tvg.spans.entry(p).or_default().push(Span { lo, hi: tick - 1 });
                }
            }
            prev = cur.clone();
        }
        let end = samples.len() as i64 - 1;
        for (p, lo) in run_start {
            tvg.spans.entry(p).or_default().push(Span { lo, hi: end });
        }
        tvg
    }

    /// Encodes as events under the stream's convention.
    pub fn to_stream(&self) -> Result<EventStream, StreamError> {
        if let Some(v) = validate_tvg(self).into_iter().next() {
            return Err(StreamError::Unrepresentable {
                pair: v.pair,
                at: v.at,
                rule: v.rule,
            });
        }
        let conv = self.meta.convention();
        let mut events = Vec::new();
        for (&(u, v), list) in &self.spans {
            for s in list {
                let up = (s.lo / 2) as u64;
                let down = match conv {
                    Convention::Closed => (s.hi / 2) as u64,
                    Convention::HalfOpen => ((s.hi + 1) / 2) as u64,
                };
                events.push(Event::up(up, u, v));
                events.push(Event::down(down, u, v));
            }
        }
        EventStream::from_unsorted(self.meta.clone(), events)
    }

    fn combine(&self, other: &Tvg, f: impl Fn(&[Span], &[Span]) -> Vec<Span>) -> Result<Tvg, StreamError> {
        check_same_meta(&self.meta, &other.meta)?;
        let mut out = Tvg::new(self.meta.clone());
        let keys: std::collections::BTreeSet<&Pair> = self.spans.keys().chain(other.spans.keys()).collect();
        for &p in keys {
            let spans = f(self.spans(p), other.spans(p));
            if !spans.is_empty() {
                out.spans.insert(p, spans);
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &Tvg) -> Result<Tvg, StreamError> {
        self.combine(other, |a, b| {
            let mut all: Vec<Span> = a.iter().chain(b).copied().collect();
            all.sort_unstable();
            let mut merged: Vec<Span> = Vec::new();
            for s in all {
                match merged.last_mut() {
                    Some(last) if s.lo <= last.hi + 1 => last.hi = last.hi.max(s.hi),
                    _ => merged.push(s),
                }
            }
            merged
        })
    }

    pub fn intersection(&self, other: &Tvg) -> Result<Tvg, StreamError> {
        self.combine(other, |a, b| {
            let (mut i, mut j) = (0, 0);
            let mut out = Vec::new();
            while i < a.len() && j < b.len() {
                let lo = a[i].lo.max(b[j].lo);
                let hi = a[i].hi.min(b[j].hi);
                if lo <= hi {
                    out.push(Span { lo, hi });
                }
                if a[i].hi < b[j].hi {
                    i += 1;
                } else {
                    j += 1;
                }
            }
            out
        })
    }

    pub fn is_subset(&self, other: &Tvg) -> Result<bool, StreamError> {
        check_same_meta(&self.meta, &other.meta)?;
        Ok(self.spans.iter().all(|(&p, list)| {
            let sup = other.spans(p);
            list.iter().all(|s| sup.iter().any(|t| t.lo <= s.lo && s.hi <= t.hi))
        }))
    }
}

pub(crate) fn check_same_meta(a: &StreamMeta, b: &StreamMeta) -> Result<(), StreamError> {
    if a != b {
        return Err(StreamError::MetadataMismatch(format!("{a:?} vs {b:?}")));
    }
    Ok(())
}

/// Regularity and encodability of a grid presence.
///
/// Every span must start at an epoch start (open-epoch presence is contained
/// in the start snapshot). Closed-convention streams additionally need every
/// span to end at an epoch start, i.e. open-epoch presence is also contained
/// in the next start snapshot; half-open streams need spans to end on an open
/// epoch.
pub fn validate_tvg(tvg: &Tvg) -> Vec<Violation> {
    let conv = tvg.meta.convention();
    let n = tvg.meta.nodes;
    let mut out = Vec::new();
    for (&pair, list) in &tvg.spans {
        let mut push = |raw: i64, rule| {
            out.push(Violation {
                index: None,
                at: Tick::from_raw(raw),
                pair,
                rule,
            })
        };
        if pair.0 >= n || pair.1 >= n {
            push(list[0].lo, Rule::VertexOutOfRange);
            continue;
        }
        if pair.0 == pair.1 {
            push(list[0].lo, Rule::SelfLoop);
            continue;
        }
        for s in list {
            if s.lo < 0 || s.hi > 2 * tvg.meta.horizon as i64 {
                push(s.lo, Rule::BeyondHorizon);
            }
            if s.lo % 2 != 0 {
                push(s.lo, Rule::OpenNotInStart);
            }
            match conv {
                Convention::Closed if s.hi % 2 != 0 => push(s.hi, Rule::OpenNotInNextStart),
                Convention::HalfOpen if s.hi % 2 == 0 => push(s.hi, Rule::InstantWithoutOpen),
                _ => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::stream::StreamKind;

    fn reach_meta() -> StreamMeta {
        StreamMeta {
            kind: StreamKind::Reach,
            eta: 1,
            tau: 1,
            nodes: 3,
            horizon: 10,
        }
    }

    #[test]
    fn insert_merges_adjacent_ticks() {
        let mut t = Tvg::new(reach_meta());
        t.insert((0, 1), Span { lo: 0, hi: 4 });
        t.insert((0, 1), Span { lo: 5, hi: 8 });
        t.insert((0, 1), Span { lo: 12, hi: 12 });
        assert_eq!(t.spans((0, 1)), &[Span { lo: 0, hi: 8 }, Span { lo: 12, hi: 12 }]);
    }

    #[test]
    fn samples_round_trip() {
        let mut t = Tvg::new(reach_meta());
        t.insert((0, 1), Span { lo: 2, hi: 6 });
        t.insert((2, 1), Span { lo: 8, hi: 8 });
        t.insert((1, 0), Span { lo: 14, hi: 20 });
        let back = Tvg::from_samples(reach_meta(), &t.samples());
        assert_eq!(back, t);
    }

    #[test]
    fn closed_convention_rejects_half_open_end() {
        let mut t = Tvg::new(reach_meta());
        t.insert((0, 1), Span { lo: 2, hi: 5 });
        let v = validate_tvg(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::OpenNotInNextStart);
        assert!(matches!(t.to_stream(), Err(StreamError::Unrepresentable { .. })));
    }

    #[test]
    fn intersection_of_touching_closed_intervals_is_ephemeral() {
        let mut a = Tvg::new(reach_meta());
        a.insert((0, 1), Span { lo: 0, hi: 4 });
        let mut b = Tvg::new(reach_meta());
        b.insert((0, 1), Span { lo: 4, hi: 10 });
        assert_eq!(a.intersection(&b).unwrap().spans((0, 1)), &[Span { lo: 4, hi: 4 }]);
        assert_eq!(a.union(&b).unwrap().spans((0, 1)), &[Span { lo: 0, hi: 10 }]);
    }
}
