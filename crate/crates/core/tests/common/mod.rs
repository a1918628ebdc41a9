#![allow(dead_code)]

use proptest::prelude::*;
use trg_core::trace::{import_contact_trace, ContactInterval, EventStream, Tick, Tvg};

/// Random contact traces: up to `max_contacts` intervals on `n` vertices.
pub fn contact_stream(
    n: std::ops::RangeInclusive<u32>,
    horizon: std::ops::RangeInclusive<u64>,
    tau: u64,
    max_contacts: usize,
) -> impl Strategy<Value = EventStream> {
    (n, horizon).prop_flat_map(move |(n, t)| {
        let contact = (0..n, 1..n, 0..t, 1..=6u64).prop_map(move |(u, off, up, len)| {
            let v = (u + off) % n;
            (u, v, up, (up + len).min(t))
        });
        proptest::collection::vec(contact, 0..=max_contacts).prop_map(move |raw| build(n, t, tau, &raw))
    })
}

/// Drops contacts that overlap an earlier one on the same pair.
pub fn build(n: u32, t: u64, tau: u64, raw: &[(u32, u32, u64, u64)]) -> EventStream {
    let mut kept: Vec<ContactInterval> = Vec::new();
    for &(u, v, up, down) in raw {
        if up >= down || u == v {
            continue;
        }
        let (a, b) = (u.min(v), u.max(v));
        let clash = kept
            .iter()
            .any(|c| c.u == a && c.v == b && up <= c.down && c.up <= down);
        if !clash {
            kept.push(ContactInterval { u: a, v: b, up, down });
        }
    }
    import_contact_trace(&kept, 1, tau, n, Some(t)).unwrap()
}

pub fn instants(t: u64) -> impl Iterator<Item = Tick> {
    (0..=t).map(Tick::instant)
}

pub fn grid(t: u64) -> impl Iterator<Item = Tick> {
    (0..=2 * t as i64).map(Tick::from_raw)
}

pub fn same_at_instants(a: &Tvg, b: &Tvg) -> Option<Tick> {
    instants(a.meta().horizon).find(|&k| a.sample(k) != b.sample(k))
}
