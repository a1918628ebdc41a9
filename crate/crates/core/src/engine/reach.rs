use std::collections::{BTreeMap, HashMap};

use crate::engine::family::{bootstrap_family, family_add, upper_from_lower, CompositionRecord, LowerFamily};
use crate::engine::zero_tau_trg;
use crate::engine::EngineError;
use crate::trace::{EventStream, StreamKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachBounds {
    pub lower: EventStream,
    pub upper: EventStream,
}

#[derive(Clone, Debug, Default)]
pub struct ReachOutput {
    pub bounds: BTreeMap<u64, ReachBounds>,
    /// Every composition performed, in a deterministic order.
    pub records: Vec<CompositionRecord>,
    pub family_adds: usize,
}

/// Lower and upper reachability bounds for each target delay.
///
/// Families for `n·tau` are built by binary exponentiation of the bootstrap
/// family; powers and sums are cached across targets. `workers` sizes the
/// thread pool that runs family members in parallel.
pub fn reach_delays(g: &EventStream, targets: &[u64], workers: usize) -> Result<ReachOutput, EngineError> {
    if g.kind() != StreamKind::Contact {
        return Err(EngineError::NotContact);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EngineError::Precondition(e.to_string()))?;
    pool.install(|| run(g, targets))
}

fn run(g: &EventStream, targets: &[u64]) -> Result<ReachOutput, EngineError> {
    let mut out = ReachOutput::default();
    let tau = g.tau();
    let mut targets = targets.to_vec();
    targets.sort_unstable();
    targets.dedup();

    if tau == 0 {
        for &delta in &targets {
            let r = zero_tau_trg(g, delta)?;
            out.bounds.insert(
                delta,
                ReachBounds {
                    lower: r.clone(),
                    upper: r,
                },
            );
        }
        return Ok(out);
    }

    let mut sched = Scheduler {
        powers: Vec::new(),
        sums: HashMap::new(),
        out: &mut out,
    };
    let mut results = BTreeMap::new();
    for &delta in &targets {
        if delta < tau {
            let empty = EventStream::empty(g.meta().as_reach());
            results.insert(
                delta,
                ReachBounds {
                    lower: empty.clone(),
                    upper: empty,
                },
            );
            continue;
        }
        let (n, i) = (delta / tau, (delta % tau) as i64);
        let family = sched.family(g, n)?;
        let lower = family.member(i).clone();
        let upper = upper_from_lower(&lower)?;
        results.insert(delta, ReachBounds { lower, upper });
    }
    out.bounds = results;
    Ok(out)
}

struct Scheduler<'a> {
    /// `powers[j]` is the family around `2^j · tau`.
    powers: Vec<LowerFamily>,
    sums: HashMap<u64, LowerFamily>,
    out: &'a mut ReachOutput,
}

impl Scheduler<'_> {
    fn add(&mut self, a: &LowerFamily, b: &LowerFamily) -> Result<LowerFamily, EngineError> {
        let (f, records) = family_add(a, b)?;
        self.out.records.extend(records);
        self.out.family_adds += 1;
        Ok(f)
    }

    fn power(&mut self, g: &EventStream, j: usize) -> Result<LowerFamily, EngineError> {
        if self.powers.is_empty() {
            self.powers.push(bootstrap_family(g)?);
        }
        while self.powers.len() <= j {
            let last = self.powers.last().expect("non-empty").clone();
            let next = self.add(&last, &last)?;
            self.powers.push(next);
        }
        Ok(self.powers[j].clone())
    }

    /// Family around `n · tau`.
    fn family(&mut self, g: &EventStream, n: u64) -> Result<LowerFamily, EngineError> {
        if let Some(f) = self.sums.get(&n) {
            return Ok(f.clone());
        }
        let mut acc: Option<(u64, LowerFamily)> = None;
        for j in 0..64 - n.leading_zeros() as usize {
            if n >> j & 1 == 0 {
                continue;
            }
            let p = self.power(g, j)?;
            let bits = 1u64 << j;
            acc = Some(match acc {
                None => (bits, p),
                Some((done, f)) => {
                    let key = done + bits;
                    let sum = match self.sums.get(&key) {
                        Some(cached) => cached.clone(),
                        None => self.add(&f, &p)?,
                    };
                    (key, sum)
                }
            });
            let (k, f) = acc.as_ref().expect("just set");
            self.sums.entry(*k).or_insert_with(|| f.clone());
        }
        Ok(acc.expect("n >= 1").1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::derive_unit_trg;
    use crate::trace::{import_contact_trace, ContactInterval};

    fn line(tau: u64) -> EventStream {
        let iv = [
            ContactInterval { u: 0, v: 1, up: 0, down: 30 },
            ContactInterval { u: 1, v: 2, up: 5, down: 40 },
        ];
        import_contact_trace(&iv, 1, tau, 3, Some(60)).unwrap()
    }

    #[test]
    fn unit_target_is_exact() {
        let g = line(1);
        let out = reach_delays(&g, &[1], 1).unwrap();
        let r = &out.bounds[&1];
        assert_eq!(r.lower, derive_unit_trg(&g).unwrap());
        assert_eq!(r.upper, r.lower);
        assert_eq!(out.family_adds, 0);
    }

    #[test]
    fn eight_tau_takes_three_additions() {
        let g = line(2);
        let out = reach_delays(&g, &[16], 2).unwrap();
        assert_eq!(out.family_adds, 3);
        let out = reach_delays(&g, &[14], 2).unwrap();
        // 7 = 1 + 2 + 4: two squarings and two sums
        assert_eq!(out.family_adds, 4);
    }

    #[test]
    fn below_tau_is_empty() {
        let out = reach_delays(&line(3), &[2], 1).unwrap();
        assert!(out.bounds[&2].lower.is_empty());
    }
}
