use rayon::prelude::*;

use crate::engine::compose::{compose_lower, CompositionStats};
use crate::engine::EngineError;
use crate::trace::{Event, EventStream, Span, StreamKind, StreamMeta, Tvg};

/// Lower approximations `L_{d+i}` for every offset `i` in `(-tau, tau)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerFamily {
    base: u64,
    tau: u64,
    members: Vec<EventStream>,
}

impl LowerFamily {
    pub fn new(base: u64, members: Vec<EventStream>) -> Result<Self, EngineError> {
        let Some(first) = members.first() else {
            return Err(EngineError::Precondition("a family needs members".into()));
        };
        let tau = first.tau();
        if members.len() as u64 != 2 * tau - 1 {
            return Err(EngineError::Precondition(format!(
                "tau = {tau} needs {} members, got {}",
                2 * tau - 1,
                members.len()
            )));
        }
        if members.iter().any(|m| m.meta() != first.meta()) {
            return Err(EngineError::MetadataMismatch("family members differ".into()));
        }
        Ok(LowerFamily { base, tau, members })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn meta(&self) -> &StreamMeta {
        self.members[0].meta()
    }

    pub fn offsets(&self) -> std::ops::Range<i64> {
        let t = self.tau as i64;
        -(t - 1)..t
    }

    /// `L_{base + offset}`.
    pub fn member(&self, offset: i64) -> &EventStream {
        &self.members[(offset + self.tau as i64 - 1) as usize]
    }

    pub fn members(&self) -> &[EventStream] {
        &self.members
    }
}

/// One composition performed while adding families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CompositionRecord {
    pub d: u64,
    pub m: u64,
    /// Offset of the family member this composition produced.
    pub k: i64,
    pub events_in: usize,
    pub events_out: usize,
    pub peak_counter_entries: usize,
}

fn require_contact_with_tau(g: &EventStream) -> Result<(), EngineError> {
    if g.kind() != StreamKind::Contact {
        return Err(EngineError::NotContact);
    }
    if g.tau() == 0 {
        return Err(EngineError::ZeroTau);
    }
    Ok(())
}

/// `R_tau`: every contact `[t1, t2)` lasting at least `tau` yields both arcs
/// on `[t1, t2 - tau]`.
pub fn derive_unit_trg(g: &EventStream) -> Result<EventStream, EngineError> {
    require_contact_with_tau(g)?;
    let tau = g.tau();
    let mut events = Vec::new();
    let mut open = std::collections::HashMap::new();
    for e in g.events() {
        match e.transition {
            crate::trace::Transition::Up => {
                open.insert(e.pair, e.t);
            }
            crate::trace::Transition::Down => {
                let up = open.remove(&e.pair).expect("valid contact stream");
                if e.t >= up + tau {
                    let (u, v) = e.pair;
                    let last = e.t - tau;
                    events.extend([
                        Event::up(up, u, v),
                        Event::down(last, u, v),
                        Event::up(up, v, u),
                        Event::down(last, v, u),
                    ]);
                }
            }
        }
    }
    Ok(EventStream::from_unsorted(g.meta().as_reach(), events)?)
}

/// The family around `tau`. Below `tau` nothing is reachable; above it only
/// single-hop journeys fit, so `L_{tau+j}` is `R_tau` with every interval
/// started `j` epochs earlier.
pub fn bootstrap_family(g: &EventStream) -> Result<LowerFamily, EngineError> {
    let unit = derive_unit_trg(g)?;
    let meta = unit.meta().clone();
    let tau = meta.tau as i64;
    let unit_tvg = unit.to_tvg();
    let mut members = Vec::with_capacity(2 * tau as usize - 1);
    for i in -(tau - 1)..tau {
        let member = match i {
            i if i < 0 => EventStream::empty(meta.clone()),
            0 => unit.clone(),
            j => {
                let mut tvg = Tvg::new(meta.clone());
                for (&pair, spans) in unit_tvg.pairs() {
                    for s in spans {
                        tvg.insert(
                            pair,
                            Span {
                                lo: (s.lo - 2 * j).max(0),
                                hi: s.hi,
                            },
                        );
                    }
                }
                tvg.to_stream()?
            }
        };
        members.push(member);
    }
    LowerFamily::new(meta.tau, members)
}

/// `a ⊕ b`: the family around `a.base + b.base`. Members are computed in
/// parallel on the current rayon pool.
pub fn family_add(a: &LowerFamily, b: &LowerFamily) -> Result<(LowerFamily, Vec<CompositionRecord>), EngineError> {
    if a.meta() != b.meta() {
        return Err(EngineError::MetadataMismatch("families differ".into()));
    }
    let tau = a.tau();
    if !a.base.is_multiple_of(tau) || !b.base.is_multiple_of(tau) || a.base == 0 || b.base == 0 {
        return Err(EngineError::BaseNotMultiple {
            d: a.base,
            m: b.base,
            tau,
        });
    }
    let (d, m) = (a.base, b.base);
    let t = tau as i64;
    let results: Vec<(EventStream, CompositionRecord)> = a
        .offsets()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|i| {
            let (dd, mm, pairs): (u64, u64, Vec<_>) = if i >= 0 {
                (d, m + i as u64, (0..t).map(|k| (a.member(k), b.member(i - k))).collect())
            } else {
                (
                    (d as i64 + i) as u64,
                    m,
                    (0..t).map(|k| (a.member(i + k), b.member(-k))).collect(),
                )
            };
            let (stream, CompositionStats { events_in, events_out, peak_entries }) =
                compose_lower(&pairs, dd, mm)?;
            Ok((
                stream,
                CompositionRecord {
                    d: dd,
                    m: mm,
                    k: i,
                    events_in,
                    events_out,
                    peak_counter_entries: peak_entries,
                },
            ))
        })
        .collect::<Result<_, EngineError>>()?;
    let (members, records): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok((LowerFamily::new(d + m, members)?, records))
}

/// Upper approximation from an instant-exact lower one: instants are kept,
/// and each open epoch holds whatever is present at both its ends.
pub fn upper_from_lower(low: &EventStream) -> Result<EventStream, EngineError> {
    if low.kind() != StreamKind::Reach {
        return Err(EngineError::NotReach);
    }
    let tvg = low.to_tvg();
    let mut up = Tvg::new(low.meta().clone());
    for (&pair, spans) in tvg.pairs() {
        for s in spans {
            // stretching by one tick makes runs of instants one epoch
            // apart touch, so insert merges them
            up.insert(pair, Span { lo: s.lo, hi: s.hi + 1 });
        }
    }
    let mut out = Tvg::new(low.meta().clone());
    for (&pair, spans) in up.pairs() {
        for s in spans {
            out.insert(pair, Span { lo: s.lo, hi: s.hi - 1 });
        }
    }
    Ok(out.to_stream()?)
}
