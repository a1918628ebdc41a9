use crate::arcs::ArcSet;
use crate::trace::presence::validate_tvg;
use crate::trace::stream::{check_events, Event, EventStream, StreamError, Violation};
use crate::trace::time::Tick;

/// Arc or edge set at one grid tick.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub at: Tick,
    pub arcs: ArcSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegularityReport {
    pub violations: Vec<Violation>,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks event ordering, per-pair interval structure, and the shape
/// constraints of the stream's interval convention.
pub fn validate_regularity(s: &EventStream) -> RegularityReport {
    let mut violations = check_events(s.meta(), s.events());
    if violations.is_empty() {
        violations = validate_tvg(&s.to_tvg());
    }
    RegularityReport { violations }
}

pub fn snapshot_at(s: &EventStream, at: Tick) -> Result<Snapshot, StreamError> {
    if at.raw() < 0 || at > s.meta().last_tick() {
        return Err(StreamError::Unsupported(format!(
            "t={at} outside [0, {}]",
            s.horizon()
        )));
    }
    Ok(Snapshot {
        at,
        arcs: s.to_tvg().sample(at),
    })
}

pub fn stream_union(a: &EventStream, b: &EventStream) -> Result<EventStream, StreamError> {
    a.to_tvg().union(&b.to_tvg())?.to_stream()
}

pub fn stream_intersection(a: &EventStream, b: &EventStream) -> Result<EventStream, StreamError> {
    a.to_tvg().intersection(&b.to_tvg())?.to_stream()
}

/// Pointwise containment over instants and open epochs.
pub fn stream_subset(a: &EventStream, b: &EventStream) -> Result<bool, StreamError> {
    a.to_tvg().is_subset(&b.to_tvg())
}

/// Re-expresses a stream at a resolution `factor` times finer: `eta` is
/// divided by `factor`, event times and `tau` are multiplied by it.
///
/// Used when the traversal time is a fraction `eta / factor` of the trace
/// resolution: after subdividing, the traversal time is one epoch and the
/// regular machinery applies unchanged.
pub fn subdivide(s: &EventStream, factor: u64, tau: u64) -> Result<EventStream, StreamError> {
    let m = s.meta();
    if factor == 0 || !m.eta.is_multiple_of(factor) {
        return Err(StreamError::Unsupported(format!(
            "eta {} is not divisible by {factor}",
            m.eta
        )));
    }
    let mut meta = m.clone();
    meta.eta /= factor;
    meta.horizon *= factor;
    meta.tau = tau;
    let events = s
        .events()
        .iter()
        .map(|e| Event {
            t: e.t * factor,
            ..*e
        })
        .collect();
    EventStream::new(meta, events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::stream::{Rule, StreamKind, StreamMeta};

    fn reach(n: u32, horizon: u64) -> StreamMeta {
        StreamMeta {
            kind: StreamKind::Reach,
            eta: 1,
            tau: 1,
            nodes: n,
            horizon,
        }
    }

    fn arc(meta: &StreamMeta, intervals: &[(u64, u64)]) -> EventStream {
        let ev = intervals
            .iter()
            .flat_map(|&(a, b)| [Event::up(a, 0, 1), Event::down(b, 0, 1)])
            .collect();
        EventStream::from_unsorted(meta.clone(), ev).unwrap()
    }

    #[test]
    fn ephemeral_arc_snapshots() {
        let m = reach(2, 10);
        let s = arc(&m, &[(4, 4)]);
        assert!(snapshot_at(&s, Tick::instant(4)).unwrap().arcs.contains(0, 1));
        assert!(snapshot_at(&s, Tick::mid(4)).unwrap().arcs.is_empty());
        assert!(snapshot_at(&s, Tick::mid(3)).unwrap().arcs.is_empty());
    }

    #[test]
    fn half_open_contact_snapshots() {
        let m = StreamMeta::contact(2, 20, 1);
        let s = EventStream::new(m, vec![Event::up(10, 0, 1), Event::down(13, 0, 1)]).unwrap();
        assert!(snapshot_at(&s, Tick::mid(12)).unwrap().arcs.contains(0, 1));
        assert!(snapshot_at(&s, Tick::instant(10)).unwrap().arcs.contains(0, 1));
        assert!(snapshot_at(&s, Tick::instant(13)).unwrap().arcs.is_empty());
        assert!(snapshot_at(&s, Tick::instant(21)).is_err());
    }

    #[test]
    fn empty_stream_snapshots_are_empty() {
        let s = EventStream::empty(reach(3, 4));
        for raw in 0..=8 {
            assert!(snapshot_at(&s, Tick::from_raw(raw)).unwrap().arcs.is_empty());
        }
    }

    #[test]
    fn lattice_identities() {
        let m = reach(2, 10);
        let s = arc(&m, &[(1, 3), (6, 6)]);
        let e = EventStream::empty(m.clone());
        assert_eq!(stream_union(&s, &e).unwrap(), s);
        assert_eq!(stream_intersection(&s, &s).unwrap(), s);
        assert!(stream_subset(&e, &s).unwrap());
    }

    #[test]
    fn touching_closed_intervals() {
        let m = reach(2, 10);
        let a = arc(&m, &[(0, 2)]);
        let b = arc(&m, &[(2, 5)]);
        assert_eq!(stream_union(&a, &b).unwrap(), arc(&m, &[(0, 5)]));
        assert_eq!(stream_intersection(&a, &b).unwrap(), arc(&m, &[(2, 2)]));
    }

    #[test]
    fn two_ephemerals_inside_closed_interval() {
        // Oracle: compare snapshots on {k, k+1/2, k+1} directly.
        let m = reach(2, 10);
        let k = 3;
        let a = arc(&m, &[(k, k), (k + 1, k + 1)]);
        let b = arc(&m, &[(k, k + 1)]);
        let grid = [Tick::instant(k), Tick::mid(k), Tick::instant(k + 1)];
        let at = |s: &EventStream, t| snapshot_at(s, t).unwrap().arcs.contains(0, 1);
        let a_in_b = grid.iter().all(|&t| !at(&a, t) || at(&b, t));
        let b_in_a = grid.iter().all(|&t| !at(&b, t) || at(&a, t));
        assert!(a_in_b && !b_in_a);
        assert_eq!(stream_subset(&a, &b).unwrap(), a_in_b);
        assert_eq!(stream_subset(&b, &a).unwrap(), b_in_a);
    }

    #[test]
    fn mismatched_metadata() {
        let a = EventStream::empty(reach(2, 10));
        let b = EventStream::empty(reach(3, 10));
        assert!(matches!(stream_union(&a, &b), Err(StreamError::MetadataMismatch(_))));
    }

    #[test]
    fn validator_reports_ordering() {
        let m = reach(2, 10);
        let s = EventStream::from_parts_unchecked(m, vec![Event::down(3, 0, 1), Event::up(1, 0, 1)]);
        let report = validate_regularity(&s);
        assert!(report.violations.iter().any(|v| v.rule == Rule::Unsorted));
        assert!(report.violations.iter().any(|v| v.rule == Rule::DownWithoutUp));
    }

    #[test]
    fn subdivide_scales_times() {
        let m = StreamMeta {
            eta: 10,
            ..StreamMeta::contact(2, 5, 0)
        };
        let s = EventStream::new(m, vec![Event::up(1, 0, 1), Event::down(3, 0, 1)]).unwrap();
        let f = subdivide(&s, 5, 1).unwrap();
        assert_eq!(f.meta().eta, 2);
        assert_eq!(f.horizon(), 25);
        assert_eq!(f.events(), &[Event::up(5, 0, 1), Event::down(15, 0, 1)]);
        assert!(subdivide(&s, 3, 1).is_err());
    }
}
