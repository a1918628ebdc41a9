mod common;

use common::{contact_stream, instants};
use proptest::prelude::*;
use trg_core::arcs::ArcSet;
use trg_core::engine::reach_delays;
use trg_core::metrics::{greedy_dominating_set, is_dominating, pair_counts, tvds_series};
use trg_core::oracle::{exact_min_dominating_set, foremost_arrival, oracle_tvg, ContactIndex};
use trg_core::trace::{
    parse_stream, serialize_stream, stream_intersection, stream_subset, stream_union, EventStream, Tick,
};

fn arc_set(n: usize) -> impl Strategy<Value = ArcSet> {
    proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
        let mut s = ArcSet::new(n);
        for (i, b) in bits.into_iter().enumerate() {
            let (u, v) = ((i / n) as u32, (i % n) as u32);
            if b && u != v {
                s.insert(u, v);
            }
        }
        s
    })
}

fn reach_of(g: &EventStream, delta: u64) -> EventStream {
    reach_delays(g, &[delta], 1).unwrap().bounds[&delta].lower.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stream_text_round_trip(g in contact_stream(2..=7, 1..=30, 1, 20), delta in 1u64..4) {
        let text = serialize_stream(&g);
        prop_assert_eq!(&parse_stream(text.as_bytes()).unwrap(), &g);
        let r = reach_of(&g, delta);
        prop_assert_eq!(parse_stream(serialize_stream(&r).as_bytes()).unwrap(), r);
    }

    #[test]
    fn union_and_intersection_bracket_operands(g in contact_stream(3..=6, 10..=20, 1, 16)) {
        let a = reach_of(&g, 2);
        let b = upper_of(&g, 3);
        let u = stream_union(&a, &b).unwrap();
        let i = stream_intersection(&a, &b).unwrap();
        prop_assert!(stream_subset(&a, &u).unwrap() && stream_subset(&b, &u).unwrap());
        prop_assert!(stream_subset(&i, &a).unwrap() && stream_subset(&i, &b).unwrap());
        for raw in 0..=2 * g.horizon() as i64 {
            let t = Tick::from_raw(raw);
            let (sa, sb) = (a.to_tvg().sample(t), b.to_tvg().sample(t));
            let mut both = sa.clone();
            both.union_with(&sb);
            prop_assert_eq!(u.to_tvg().sample(t), both);
        }
    }

    #[test]
    fn growth_at_instants(g in contact_stream(3..=6, 10..=24, 2, 16)) {
        let deltas = [2, 3, 4, 5, 6, 8];
        let out = reach_delays(&g, &deltas, 1).unwrap();
        for w in deltas.windows(2) {
            let (a, b) = (out.bounds[&w[0]].lower.to_tvg(), out.bounds[&w[1]].lower.to_tvg());
            for t in instants(g.horizon()) {
                prop_assert!(a.sample(t).is_subset(&b.sample(t)), "delta {} vs {} at {}", w[0], w[1], t);
            }
        }
    }

    #[test]
    fn later_start_never_arrives_earlier(g in contact_stream(3..=6, 8..=20, 1, 14), s in 0u32..6, a in 0i64..20, b in 0i64..20) {
        let s = s % g.nodes();
        let (lo, hi) = (a.min(b).min(2 * g.horizon() as i64), a.max(b).min(2 * g.horizon() as i64));
        let early = foremost_arrival(&g, s, Tick::from_raw(lo)).unwrap();
        let late = foremost_arrival(&g, s, Tick::from_raw(hi)).unwrap();
        for v in 0..g.nodes() {
            match (early.arrival(v), late.arrival(v)) {
                (None, Some(_)) => prop_assert!(false, "late start reached {} but early did not", v),
                (Some(x), Some(y)) => prop_assert!(x <= y),
                _ => {}
            }
        }
    }

    #[test]
    fn open_epoch_lies_inside_both_ends(g in contact_stream(3..=6, 8..=20, 1, 14), delta in 1u64..6) {
        // inside an epoch the reachable set is contained in its two endpoints
        let r = oracle_tvg(&g, delta).unwrap();
        for k in 0..g.horizon() {
            let mid = r.sample(Tick::mid(k));
            prop_assert!(mid.is_subset(&r.sample(Tick::instant(k))));
            prop_assert!(mid.is_subset(&r.sample(Tick::instant(k + 1))));
        }
        let idx = ContactIndex::new(&g).unwrap();
        for k in 0..=g.horizon() {
            prop_assert_eq!(idx.reach_at(delta, Tick::instant(k)).unwrap(), r.sample(Tick::instant(k)));
        }
    }

    #[test]
    fn greedy_within_log_factor(arcs in (1usize..=10).prop_flat_map(arc_set)) {
        let n = arcs.num_vertices();
        let greedy = greedy_dominating_set(&arcs, &[]);
        let exact = exact_min_dominating_set(&arcs).unwrap();
        prop_assert!(is_dominating(&arcs, &greedy));
        prop_assert!(is_dominating(&arcs, &exact));
        prop_assert!(exact.len() <= greedy.len());
        prop_assert!(greedy.len() as f64 <= ((n as f64).ln() + 1.0) * exact.len() as f64);
    }

    #[test]
    fn tvds_dominates_and_is_stable(g in contact_stream(3..=7, 10..=24, 1, 18), delta in 1u64..5) {
        let r = reach_of(&g, delta);
        let s = tvds_series(&r);
        let mut prev: Option<Vec<u32>> = None;
        let mut q = ArcSet::new(r.nodes() as usize);
        for k in 0..r.horizon() {
            let batch = r.events_at(k);
            for e in batch.iter().filter(|e| e.transition == trg_core::trace::Transition::Up) {
                q.insert(e.pair.0, e.pair.1);
            }
            for e in batch.iter().filter(|e| e.transition == trg_core::trace::Transition::Down) {
                q.remove(e.pair.0, e.pair.1);
            }
            let set = s.at(k);
            prop_assert!(is_dominating(&q, set), "epoch {}", k);
            if let Some(p) = &prev {
                if batch.is_empty() || is_dominating(&q, p) {
                    prop_assert_eq!(p.as_slice(), set, "set changed needlessly at {}", k);
                }
            }
            prev = Some(set.to_vec());
        }
    }

    #[test]
    fn sym_asym_partition(arcs in arc_set(7)) {
        let c = pair_counts(&arcs);
        prop_assert_eq!(2 * c.sym + c.asym, arcs.len());
    }
}

fn upper_of(g: &EventStream, delta: u64) -> EventStream {
    reach_delays(g, &[delta], 1).unwrap().bounds[&delta].upper.clone()
}
