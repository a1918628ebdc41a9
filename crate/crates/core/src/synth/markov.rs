use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::synth::{KeyValues, SynthError};
use crate::trace::{Event, EventStream, StreamMeta};

/// Independent on/off chain per unordered pair, stepped once per epoch.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovEdgeConfig {
    pub n: u32,
    /// Probability a down edge comes up at the next epoch.
    pub up_rate: f64,
    /// Probability an up edge goes down at the next epoch.
    pub down_rate: f64,
    pub duration: u64,
    pub tau: u64,
    pub seed: u64,
}

impl Default for MarkovEdgeConfig {
    fn default() -> Self {
        MarkovEdgeConfig {
            n: 10,
            up_rate: 0.2,
            down_rate: 0.3,
            duration: 1000,
            tau: 1,
            seed: 0,
        }
    }
}

impl MarkovEdgeConfig {
    pub fn from_kv(kv: &KeyValues) -> Result<Self, SynthError> {
        kv.check_keys(&["n", "up_rate", "down_rate", "duration", "tau", "seed"])?;
        let d = MarkovEdgeConfig::default();
        Ok(MarkovEdgeConfig {
            n: kv.get("n", d.n)?,
            up_rate: kv.get("up_rate", d.up_rate)?,
            down_rate: kv.get("down_rate", d.down_rate)?,
            duration: kv.get("duration", d.duration)?,
            tau: kv.get("tau", d.tau)?,
            seed: kv.get("seed", d.seed)?,
        })
    }

    /// Long-run fraction of epochs an edge spends up.
    pub fn stationary_up(&self) -> f64 {
        self.up_rate / (self.up_rate + self.down_rate)
    }
}

/// Every pair starts down; its state in epoch `k` is one transition away
/// from its state in epoch `k - 1`.
pub fn generate_markov(cfg: &MarkovEdgeConfig) -> Result<EventStream, SynthError> {
    let ok = |p: f64| (0.0..=1.0).contains(&p);
    if !ok(cfg.up_rate) || !ok(cfg.down_rate) {
        return Err(SynthError::Invalid(format!(
            "rates must lie in [0, 1], got up {} down {}",
            cfg.up_rate, cfg.down_rate
        )));
    }
    if cfg.n == 0 {
        return Err(SynthError::Invalid("no nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut since: Vec<Option<u64>> = vec![None; pairs.len()];
    let mut events = Vec::new();
    for k in 0..cfg.duration {
        for (i, &(u, v)) in pairs.iter().enumerate() {
            let x: f64 = rng.gen();
            match since[i] {
                None if x < cfg.up_rate => since[i] = Some(k),
                Some(start) if x < cfg.down_rate => {
                    events.push(Event::up(start, u, v));
                    events.push(Event::down(k, u, v));
                    since[i] = None;
                }
                _ => {}
            }
        }
    }
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if let Some(start) = since[i] {
            events.push(Event::up(start, u, v));
            events.push(Event::down(cfg.duration, u, v));
        }
    }
    let meta = StreamMeta::contact(n, cfg.duration, cfg.tau);
    Ok(EventStream::from_unsorted(meta, events)?)
}
