use crate::arcs::{ArcSet, Vertex};
use crate::engine::EngineError;
use crate::trace::{EventStream, Snapshot, StreamKind, Tick, Tvg};

/// `A ⊗ B` on sampled presence: `out[g] = A[g] ∪ B[g+shift] ∪ A[g]∘B[g+shift]`.
/// Samples past the end of `b` count as empty.
pub fn compose_samples(a: &[ArcSet], b: &[ArcSet], shift: usize) -> Vec<ArcSet> {
    a.iter()
        .enumerate()
        .map(|(g, x)| {
            let mut out = x.clone();
            if let Some(y) = b.get(g + shift) {
                out.union_with(y);
                out.union_with(&x.chain(y));
            }
            out
        })
        .collect()
}

/// Exact composition evaluated at epoch starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantComposition {
    pub snapshots: Vec<Snapshot>,
    /// First epoch whose shifted lookup in the second stream falls past the
    /// horizon, where that stream is taken as empty.
    pub truncated_from: Option<u64>,
}

pub fn compose_exact_at_instants(r1: &EventStream, r2: &EventStream, d: u64) -> Result<InstantComposition, EngineError> {
    if r1.meta() != r2.meta() {
        return Err(EngineError::MetadataMismatch(format!("{:?} vs {:?}", r1.meta(), r2.meta())));
    }
    let horizon = r1.horizon();
    let (a, b) = (r1.to_tvg(), r2.to_tvg());
    let n = r1.nodes() as usize;
    let snapshots = (0..=horizon)
        .map(|k| {
            let x = a.sample(Tick::instant(k));
            let y = if k + d <= horizon {
                b.sample(Tick::instant(k + d))
            } else {
                ArcSet::new(n)
            };
            let mut arcs = x.clone();
            arcs.union_with(&y);
            arcs.union_with(&x.chain(&y));
            Snapshot {
                at: Tick::instant(k),
                arcs,
            }
        })
        .collect();
    let truncated_from = (d > 0).then(|| (horizon + 1).saturating_sub(d)).filter(|&k| k <= horizon);
    Ok(InstantComposition {
        snapshots,
        truncated_from,
    })
}

fn find(parent: &mut [Vertex], x: Vertex) -> Vertex {
    let mut r = x;
    while parent[r as usize] != r {
        r = parent[r as usize];
    }
    let mut x = x;
    while parent[x as usize] != r {
        let next = parent[x as usize];
        parent[x as usize] = r;
        x = next;
    }
    r
}

/// Every pair inside a connected component, both directions.
fn component_closure(edges: &ArcSet) -> ArcSet {
    let n = edges.num_vertices();
    let mut parent: Vec<Vertex> = (0..n as Vertex).collect();
    for (u, v) in edges.iter() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv) as usize] = ru.min(rv);
        }
    }
    let roots: Vec<Vertex> = (0..n as Vertex).map(|x| find(&mut parent, x)).collect();
    let mut out = ArcSet::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && roots[u] == roots[v] {
                out.insert(u as Vertex, v as Vertex);
            }
        }
    }
    out
}

/// Exact reachability with zero traversal time: `R_0` from connected
/// components, longer delays by repeated exact composition.
pub fn zero_tau_trg(g: &EventStream, delta: u64) -> Result<EventStream, EngineError> {
    if g.kind() != StreamKind::Contact {
        return Err(EngineError::NotContact);
    }
    if g.tau() != 0 {
        return Err(EngineError::Precondition(format!("tau is {}, not 0", g.tau())));
    }
    let contact = g.to_tvg();
    let r0: Vec<ArcSet> = contact.samples().iter().map(component_closure).collect();

    // binary exponentiation on delta with R_1 as the unit
    let mut result: Option<(u64, Vec<ArcSet>)> = None;
    if delta > 0 {
        let mut power = (1u64, compose_samples(&r0, &r0, 2));
        let mut rest = delta;
        loop {
            if rest & 1 == 1 {
                result = Some(match result {
                    None => power.clone(),
                    Some((len, acc)) => (len + power.0, compose_samples(&acc, &power.1, 2 * len as usize)),
                });
            }
            rest >>= 1;
            if rest == 0 {
                break;
            }
            let (len, p) = &power;
            power = (2 * len, compose_samples(p, p, 2 * *len as usize));
        }
    }
    let samples = result.map(|(_, s)| s).unwrap_or(r0);
    Ok(Tvg::from_samples(g.meta().as_reach(), &samples).to_stream()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{import_contact_trace, ContactInterval, Event, StreamMeta};

    #[test]
    fn closure_is_complete_per_component() {
        let e = ArcSet::from_pairs(5, [(0, 1), (1, 2), (3, 4)]);
        let c = component_closure(&e);
        assert_eq!(c.len(), 6 + 2);
        assert!(c.contains(2, 0) && c.contains(4, 3) && !c.contains(0, 3));
    }

    #[test]
    fn zero_delay_on_disconnected_vertices_is_empty() {
        let g = import_contact_trace(&[ContactInterval { u: 0, v: 1, up: 2, down: 4 }], 1, 0, 4, Some(8)).unwrap();
        let r = zero_tau_trg(&g, 0).unwrap();
        assert!(r.events().iter().all(|e| e.pair == (0, 1) || e.pair == (1, 0)));
        assert_eq!(r.events()[0], Event::up(2, 0, 1));
    }

    #[test]
    fn instant_composition_clauses() {
        let meta = StreamMeta {
            kind: StreamKind::Reach,
            eta: 1,
            tau: 1,
            nodes: 3,
            horizon: 6,
        };
        let r1 = EventStream::new(meta.clone(), vec![Event::up(1, 0, 1), Event::down(1, 0, 1)]).unwrap();
        let r2 = EventStream::new(meta.clone(), vec![Event::up(3, 1, 2), Event::down(3, 1, 2)]).unwrap();
        let c = compose_exact_at_instants(&r1, &r2, 2).unwrap();
        let at1 = &c.snapshots[1].arcs;
        assert!(at1.contains(0, 1) && at1.contains(1, 2) && at1.contains(0, 2));
        assert_eq!(c.truncated_from, Some(5));
        let empty = EventStream::empty(meta);
        let c = compose_exact_at_instants(&r1, &empty, 2).unwrap();
        assert_eq!(c.snapshots[1].arcs, ArcSet::from_pairs(3, [(0, 1)]));
    }
}
