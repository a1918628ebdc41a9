//! Per-epoch connectivity metrics of reachability streams.
//!
//! Every metric reads the value inside epoch `k`, on the open interval
//! `(k, k+1)`, so arcs that exist only at an instant never count.

mod domset;

pub use domset::{greedy_dominating_set, is_dominating, tvds_series, TvdsSeries};

use crate::arcs::ArcSet;
use crate::trace::{EventStream, Transition};

/// Calls `f(k, Q(k), changed)` for every epoch `k` in `0..T`, where `changed`
/// tells whether any event happened at time `k`.
pub fn for_each_epoch(r: &EventStream, mut f: impl FnMut(u64, &ArcSet, bool)) {
    let mut q = ArcSet::new(r.nodes() as usize);
    let events = r.events();
    let mut pos = 0;
    for k in 0..r.horizon() {
        let start = pos;
        while pos < events.len() && events[pos].t == k {
            pos += 1;
        }
        let batch = &events[start..pos];
        for e in batch.iter().filter(|e| e.transition == Transition::Up) {
            q.insert(e.pair.0, e.pair.1);
        }
        for e in batch.iter().filter(|e| e.transition == Transition::Down) {
            q.remove(e.pair.0, e.pair.1);
        }
        f(k, &q, !batch.is_empty());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PairCounts {
    /// Unordered pairs connected both ways.
    pub sym: usize,
    /// Unordered pairs connected one way only.
    pub asym: usize,
}

pub fn pair_counts(arcs: &ArcSet) -> PairCounts {
    let mut c = PairCounts::default();
    for (u, v) in arcs.iter() {
        if arcs.contains(v, u) {
            if u < v {
                c.sym += 1;
            }
        } else {
            c.asym += 1;
        }
    }
    c
}

pub fn density(arcs: &ArcSet) -> f64 {
    let n = arcs.num_vertices();
    if n < 2 {
        return 0.0;
    }
    arcs.len() as f64 / (n * (n - 1)) as f64
}

/// Asymmetric pairs over all connected pairs; 0 for an empty graph.
pub fn asymmetry(arcs: &ArcSet) -> f64 {
    let c = pair_counts(arcs);
    if c.sym + c.asym == 0 {
        0.0
    } else {
        c.asym as f64 / (c.sym + c.asym) as f64
    }
}

pub fn density_series(r: &EventStream) -> Vec<f64> {
    let mut out = Vec::new();
    for_each_epoch(r, |_, q, _| out.push(density(q)));
    out
}

pub fn asymmetry_series(r: &EventStream) -> Vec<f64> {
    let mut out = Vec::new();
    for_each_epoch(r, |_, q, _| out.push(asymmetry(q)));
    out
}

/// Fractions of the `N(N-1)/2` unordered pairs connected both ways and one way.
pub fn pair_connectivity_series(r: &EventStream) -> Vec<(f64, f64)> {
    let n = r.nodes() as usize;
    let pairs = (n * n.saturating_sub(1) / 2).max(1) as f64;
    let mut out = Vec::new();
    for_each_epoch(r, |_, q, _| {
        let c = pair_counts(q);
        out.push((c.sym as f64 / pairs, c.asym as f64 / pairs));
    });
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochMetrics {
    pub epoch: u64,
    pub arcs: usize,
    pub density: f64,
    pub sym_pairs: usize,
    pub asym_pairs: usize,
    pub asymmetry: f64,
    pub ds_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Averages {
    pub density: f64,
    pub asymmetry: f64,
    /// Mean dominating-set size divided by `N`.
    pub ds_size: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsSeries {
    pub nodes: u32,
    pub epochs: Vec<EpochMetrics>,
    pub averages: Averages,
}

pub fn averages(epochs: &[EpochMetrics], n: u32) -> Averages {
    if epochs.is_empty() {
        return Averages {
            density: 0.0,
            asymmetry: 0.0,
            ds_size: 0.0,
        };
    }
    let t = epochs.len() as f64;
    let mean = |f: &dyn Fn(&EpochMetrics) -> f64| epochs.iter().map(f).sum::<f64>() / t;
    Averages {
        density: mean(&|e| e.density),
        asymmetry: mean(&|e| e.asymmetry),
        ds_size: mean(&|e| e.ds_size as f64) / n.max(1) as f64,
    }
}

pub fn metrics_series(r: &EventStream) -> MetricsSeries {
    let tvds = tvds_series(r);
    let mut epochs = Vec::with_capacity(r.horizon() as usize);
    for_each_epoch(r, |k, q, _| {
        let c = pair_counts(q);
        epochs.push(EpochMetrics {
            epoch: k,
            arcs: q.len(),
            density: density(q),
            sym_pairs: c.sym,
            asym_pairs: c.asym,
            asymmetry: asymmetry(q),
            ds_size: tvds.sizes[k as usize],
        });
    });
    let averages = averages(&epochs, r.nodes());
    MetricsSeries {
        nodes: r.nodes(),
        epochs,
        averages,
    }
}

pub const CSV_HEADER: &str = "epoch,arcs,density,sym_pairs,asym_pairs,asymmetry,ds_size";

pub fn to_csv(series: &MetricsSeries) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for e in &series.epochs {
        s.push_str(&format!(
            "{},{},{:.6},{},{},{:.6},{}\n",
            e.epoch, e.arcs, e.density, e.sym_pairs, e.asym_pairs, e.asymmetry, e.ds_size
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{Event, StreamKind, StreamMeta};

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
    fn density_examples() {
        assert_eq!(density(&ArcSet::complete(4)), 1.0);
        assert_eq!(density(&ArcSet::new(4)), 0.0);
        assert_eq!(density(&ArcSet::from_pairs(3, [(0, 1)])), 1.0 / 6.0);
    }

    #[test]
    fn asymmetry_examples() {
        assert_eq!(asymmetry(&ArcSet::from_pairs(3, [(0, 1), (1, 0)])), 0.0);
        assert_eq!(asymmetry(&ArcSet::from_pairs(3, [(0, 1)])), 1.0);
        assert_eq!(asymmetry(&ArcSet::from_pairs(3, [(0, 1), (1, 0), (0, 2)])), 0.5);
        assert_eq!(asymmetry(&ArcSet::new(3)), 0.0);
    }

    #[test]
    fn pair_fraction_examples() {
        let full = reach(3, 2, ArcSet::complete(3).iter().flat_map(|(u, v)| [Event::up(0, u, v), Event::down(2, u, v)]).collect());
        assert_eq!(pair_connectivity_series(&full), vec![(1.0, 0.0); 2]);
        let one = reach(2, 1, vec![Event::up(0, 0, 1), Event::down(1, 0, 1)]);
        assert_eq!(pair_connectivity_series(&one), vec![(0.0, 1.0)]);
        assert_eq!(pair_connectivity_series(&reach(3, 2, vec![])), vec![(0.0, 0.0); 2]);
    }

    #[test]
    fn ephemeral_arcs_do_not_count() {
        let r = reach(2, 4, vec![Event::up(1, 0, 1), Event::down(1, 0, 1), Event::up(2, 1, 0), Event::down(3, 1, 0)]);
        assert_eq!(density_series(&r), vec![0.0, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn averages_examples() {
        let e = |k: u64, density: f64, ds: usize| EpochMetrics {
            epoch: k,
            arcs: 0,
            density,
            sym_pairs: 0,
            asym_pairs: 0,
            asymmetry: 0.0,
            ds_size: ds,
        };
        let flat: Vec<_> = (0..6).map(|k| e(k, 0.5, 1)).collect();
        let a = averages(&flat, 10);
        assert_eq!(a.density, 0.5);
        assert!((a.ds_size - 0.1).abs() < 1e-12);
        let alt: Vec<_> = (0..6).map(|k| e(k, (k % 2) as f64, 1)).collect();
        assert_eq!(averages(&alt, 10).density, 0.5);
    }

    #[test]
    fn csv_layout() {
        let r = reach(3, 2, vec![Event::up(0, 0, 1), Event::down(1, 0, 1)]);
        let csv = to_csv(&metrics_series(&r));
        assert_eq!(
            csv,
            "epoch,arcs,density,sym_pairs,asym_pairs,asymmetry,ds_size\n\
             0,1,0.166667,0,1,1.000000,2\n\
             1,0,0.000000,0,0,0.000000,3\n"
        );
    }
}
