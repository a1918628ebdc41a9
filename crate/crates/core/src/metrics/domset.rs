use crate::arcs::{ArcSet, Vertex};
use crate::metrics::for_each_epoch;
use crate::trace::EventStream;

/// Every vertex is in `set` or has an incoming arc from a member.
pub fn is_dominating(arcs: &ArcSet, set: &[Vertex]) -> bool {
    let n = arcs.num_vertices();
    let mut covered = vec![false; n];
    for &u in set {
        covered[u as usize] = true;
        for v in arcs.successors(u) {
            covered[v as usize] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

/// Greedy set cover over closed out-neighbourhoods. Ties favour members of
/// `prev`, then the lowest id. The result is sorted.
pub fn greedy_dominating_set(arcs: &ArcSet, prev: &[Vertex]) -> Vec<Vertex> {
    let n = arcs.num_vertices();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut in_prev = vec![false; n];
    for &u in prev {
        in_prev[u as usize] = true;
    }
    let mut chosen = vec![false; n];
    let mut set = Vec::new();
    while left > 0 {
        let gain = |u: Vertex| {
            usize::from(!covered[u as usize]) + arcs.successors(u).filter(|&v| !covered[v as usize]).count()
        };
        let best = (0..n as Vertex)
            .filter(|&u| !chosen[u as usize])
            .max_by_key(|&u| (gain(u), in_prev[u as usize], std::cmp::Reverse(u)))
            .expect("an uncovered vertex remains");
        chosen[best as usize] = true;
        set.push(best);
        for v in std::iter::once(best).chain(arcs.successors(best)) {
            if !covered[v as usize] {
                covered[v as usize] = true;
                left -= 1;
            }
        }
    }
    set.sort_unstable();
    set
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TvdsSeries {
    /// `(epoch, set)` each time the set changes; the first entry is epoch 0.
    pub changes: Vec<(u64, Vec<Vertex>)>,
    /// Set size for every epoch.
    pub sizes: Vec<usize>,
}

impl TvdsSeries {
    /// The set in force during epoch `k`.
    pub fn at(&self, k: u64) -> &[Vertex] {
        let i = self.changes.partition_point(|(e, _)| *e <= k);
        &self.changes[i - 1].1
    }
}

/// Time-varying dominating set: kept while it still dominates, rebuilt
/// greedily at epochs where it stops doing so.
pub fn tvds_series(r: &EventStream) -> TvdsSeries {
    let mut out = TvdsSeries::default();
    let mut current: Vec<Vertex> = Vec::new();
    for_each_epoch(r, |k, q, changed| {
        if k == 0 || (changed && !is_dominating(q, &current)) {
            let next = greedy_dominating_set(q, &current);
            if k == 0 || next != current {
                out.changes.push((k, next.clone()));
            }
            current = next;
        }
        out.sizes.push(current.len());
    });
    out
}
