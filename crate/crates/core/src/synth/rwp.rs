use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::synth::{KeyValues, SynthError};
use crate::trace::{Event, EventStream, StreamMeta};

/// Random waypoint in a rectangle, with connectivity sampled at beacons.
/// Distances are in meters, times in seconds (one epoch each).
#[derive(Clone, Debug, PartialEq)]
pub struct RwpConfig {
    pub n: u32,
    pub width: f64,
    pub height: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    pub range: f64,
    /// Beacon period in epochs.
    pub beacon: u64,
    pub duration: u64,
    /// Time simulated and thrown away before recording starts.
    pub warmup: f64,
    pub pause: f64,
    pub tau: u64,
    pub seed: u64,
}

impl Default for RwpConfig {
    fn default() -> Self {
        RwpConfig {
            n: 20,
            width: 1000.0,
            height: 500.0,
            speed_min: 3.0,
            speed_max: 7.0,
            range: 20.0,
            beacon: 1,
            duration: 3600,
            warmup: 1000.0,
            pause: 0.0,
            tau: 1,
            seed: 0,
        }
    }
}

impl RwpConfig {
    pub fn from_kv(kv: &KeyValues) -> Result<Self, SynthError> {
        kv.check_keys(&[
            "n", "width", "height", "speed_min", "speed_max", "range", "beacon", "duration", "warmup", "pause",
            "tau", "seed",
        ])?;
        let d = RwpConfig::default();
        Ok(RwpConfig {
            n: kv.get("n", d.n)?,
            width: kv.get("width", d.width)?,
            height: kv.get("height", d.height)?,
            speed_min: kv.get("speed_min", d.speed_min)?,
            speed_max: kv.get("speed_max", d.speed_max)?,
            range: kv.get("range", d.range)?,
            beacon: kv.get("beacon", d.beacon)?,
            duration: kv.get("duration", d.duration)?,
            warmup: kv.get("warmup", d.warmup)?,
            pause: kv.get("pause", d.pause)?,
            tau: kv.get("tau", d.tau)?,
            seed: kv.get("seed", d.seed)?,
        })
    }

    fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::Invalid(m.to_string()));
        if self.n == 0 {
            return bad("no nodes");
        }
        if !(self.width > 0.0 && self.height > 0.0) {
            return bad("area must have positive width and height");
        }
        if !(self.speed_min > 0.0 && self.speed_min <= self.speed_max) {
            return bad("speeds must be positive with speed_min <= speed_max");
        }
        if self.range.is_nan() || self.range <= 0.0 {
            return bad("range must be positive");
        }
        if self.beacon == 0 {
            return bad("beacon period must be positive");
        }
        if !(self.warmup >= 0.0 && self.pause >= 0.0) {
            return bad("warmup and pause must be non-negative");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    x: f64,
    y: f64,
    tx: f64,
    ty: f64,
    speed: f64,
    pause_left: f64,
}

struct Sim {
    cfg: RwpConfig,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

impl Sim {
    fn new(cfg: &RwpConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let nodes = (0..cfg.n)
            .map(|_| {
                let x = rng.gen_range(0.0..=cfg.width);
                let y = rng.gen_range(0.0..=cfg.height);
                Node {
                    x,
                    y,
                    tx: x,
                    ty: y,
                    speed: cfg.speed_min,
                    pause_left: cfg.pause,
                }
            })
            .collect();
        Sim {
            cfg: cfg.clone(),
            rng,
            nodes,
        }
    }

    fn advance(&mut self, dt: f64) {
        for i in 0..self.nodes.len() {
            let mut left = dt;
            while left > 0.0 {
                let nd = &mut self.nodes[i];
                if nd.pause_left > 0.0 {
                    let p = nd.pause_left.min(left);
                    nd.pause_left -= p;
                    left -= p;
                    continue;
                }
                let (dx, dy) = (nd.tx - nd.x, nd.ty - nd.y);
                let dist = dx.hypot(dy);
                let step = nd.speed * left;
                if step < dist {
                    nd.x += dx / dist * step;
                    nd.y += dy / dist * step;
                    left = 0.0;
                } else {
                    nd.x = nd.tx;
                    nd.y = nd.ty;
                    left -= dist / nd.speed;
                    nd.pause_left = self.cfg.pause;
                    let c = &self.cfg;
                    nd.tx = self.rng.gen_range(0.0..=c.width);
                    nd.ty = self.rng.gen_range(0.0..=c.height);
                    nd.speed = if c.speed_max > c.speed_min {
                        self.rng.gen_range(c.speed_min..c.speed_max)
                    } else {
                        c.speed_min
                    };
                }
            }
        }
    }

    fn in_range(&self, u: usize, v: usize) -> bool {
        let (a, b) = (&self.nodes[u], &self.nodes[v]);
        (a.x - b.x).hypot(a.y - b.y) <= self.cfg.range
    }
}

pub fn generate_rwp(cfg: &RwpConfig) -> Result<EventStream, SynthError> {
    cfg.validate()?;
    let mut sim = Sim::new(cfg);
    sim.advance(cfg.warmup);
    let n = cfg.n as usize;
    let mut up_since: Vec<Option<u64>> = vec![None; n * n];
    let mut events = Vec::new();
    let mut t = 0;
    while t < cfg.duration {
        for u in 0..n {
            for v in u + 1..n {
                let slot = &mut up_since[u * n + v];
                match (sim.in_range(u, v), *slot) {
                    (true, None) => *slot = Some(t),
                    (false, Some(start)) => {
                        events.push(Event::up(start, u as u32, v as u32));
                        events.push(Event::down(t, u as u32, v as u32));
                        *slot = None;
                    }
                    _ => {}
                }
            }
        }
        sim.advance(cfg.beacon as f64);
        t += cfg.beacon;
    }
    for u in 0..n {
        for v in u + 1..n {
            if let Some(start) = up_since[u * n + v] {
                events.push(Event::up(start, u as u32, v as u32));
                events.push(Event::down(cfg.duration, u as u32, v as u32));
            }
        }
    }
    let meta = StreamMeta::contact(cfg.n, cfg.duration, cfg.tau);
    Ok(EventStream::from_unsorted(meta, events)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{parse_stream, serialize_stream, validate_regularity};

    fn still(n: u32, width: f64) -> RwpConfig {
        RwpConfig {
            n,
            width,
            height: 1.0,
            pause: 1e12,
            warmup: 0.0,
            duration: 50,
            ..RwpConfig::default()
        }
    }

    #[test]
    fn stationary_close_nodes_stay_connected() {
        let s = generate_rwp(&still(2, 10.0)).unwrap();
        assert_eq!(s.events(), &[Event::up(0, 0, 1), Event::down(50, 0, 1)]);
    }

    #[test]
    fn stationary_far_nodes_never_meet() {
        for seed in 0..20 {
            let cfg = RwpConfig { seed, ..still(2, 1000.0) };
            let sim = Sim::new(&cfg);
            let s = generate_rwp(&cfg).unwrap();
            assert_eq!(s.is_empty(), !sim.in_range(0, 1), "seed {seed}");
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let cfg = RwpConfig {
            n: 8,
            width: 100.0,
            height: 100.0,
            duration: 300,
            seed: 7,
            ..RwpConfig::default()
        };
        let a = serialize_stream(&generate_rwp(&cfg).unwrap());
        let b = serialize_stream(&generate_rwp(&cfg).unwrap());
        assert_eq!(a, b);
        let s = parse_stream(a.as_bytes()).unwrap();
        assert!(!s.is_empty());
        assert!(validate_regularity(&s).is_regular());
        let other = generate_rwp(&RwpConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(serialize_stream(&other), a);
    }

    #[test]
    fn beacon_period_aligns_events() {
        let cfg = RwpConfig {
            n: 6,
            width: 60.0,
            height: 60.0,
            beacon: 5,
            duration: 200,
            seed: 3,
            ..RwpConfig::default()
        };
        let s = generate_rwp(&cfg).unwrap();
        assert!(s.events().iter().all(|e| e.t % 5 == 0 || e.t == 200));
    }

    #[test]
    fn rejects_degenerate_configs() {
        assert!(generate_rwp(&RwpConfig { n: 0, ..RwpConfig::default() }).is_err());
        assert!(generate_rwp(&RwpConfig { width: 0.0, ..RwpConfig::default() }).is_err());
        assert!(generate_rwp(&RwpConfig { speed_min: 0.0, ..RwpConfig::default() }).is_err());
    }

    #[test]
    fn reads_key_values() {
        let kv = KeyValues::parse("n = 5\n# comment\nseed=9\nrange=30.5\n").unwrap();
        let cfg = RwpConfig::from_kv(&kv).unwrap();
        assert_eq!((cfg.n, cfg.seed, cfg.range), (5, 9, 30.5));
        assert!(RwpConfig::from_kv(&KeyValues::parse("nodes=3").unwrap()).is_err());
        assert!(KeyValues::parse("oops").is_err());
    }
}
