use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use trg_core::engine::reach_delays;
use trg_core::metrics::{metrics_series, to_csv};
use trg_core::oracle::{oracle_trg, oracle_tvg};
use trg_core::synth::{generate_markov, generate_rwp, KeyValues, MarkovEdgeConfig, RwpConfig};
use trg_core::trace::{
    import_contact_trace, parse_stream, serialize_stream, snapshot_at, subdivide, validate_regularity,
    ContactInterval, EventStream, StreamKind, Tick,
};

#[derive(Parser)]
#[command(name = "trg", version, about = "Temporal reachability graphs from contact traces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert a CSV of contacts (columns u,v,up,down) into a contact stream.
    Import {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        eta: u64,
        #[arg(long, default_value_t = 1)]
        tau: u64,
        /// Number of vertices; defaults to one more than the largest id.
        #[arg(long)]
        nodes: Option<u32>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Generate a synthetic contact stream.
    Generate {
        kind: GenKind,
        /// key=value config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Extra key=value settings, applied after the file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tau: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Lower and upper reachability bounds for a list of delays.
    Reach {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        tau: Option<u64>,
        /// Treat tau as eta/N by refining the time grid N times first.
        #[arg(long)]
        subdivide: Option<u64>,
        /// Check the bounds against the brute-force oracle (small inputs).
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Per-epoch metrics of a reachability stream as CSV.
    Metrics {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Write the trace averages as JSON here.
        #[arg(long)]
        averages: Option<PathBuf>,
    },
    /// Exact reachability graph by brute force.
    Oracle {
        input: PathBuf,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        tau: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print the arcs present at one time, one pair per line.
    Snapshot {
        input: PathBuf,
        /// An epoch start like `3`, or the open epoch after it like `3.5`.
        #[arg(long)]
        at: Tick,
    },
    /// Check a stream file and report every violation.
    Validate { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Rwp,
    Markov,
}

enum Failure {
    Usage(anyhow::Error),
    Validation(anyhow::Error),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) | Failure::Validation(e) => eprintln!("error: {e:#}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}

/// A closed stdout (say, piped into `head`) is not an error.
fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Import {
            input,
            eta,
            tau,
            nodes,
            horizon,
            out,
        } => cmd_import(&input, eta, tau, nodes, horizon, &out),
        Cmd::Generate {
            kind,
            config,
            set,
            seed,
            tau,
            out,
        } => cmd_generate(kind, config.as_deref(), &set, seed, tau, &out),
        Cmd::Reach {
            input,
            delta,
            workers,
            tau,
            subdivide,
            verify,
            out_dir,
        } => cmd_reach(&input, &delta, workers, tau, subdivide, verify, &out_dir),
        Cmd::Metrics { input, out, averages } => cmd_metrics(&input, out.as_deref(), averages.as_deref()),
        Cmd::Oracle { input, delta, tau, out } => cmd_oracle(&input, delta, tau, &out),
        Cmd::Snapshot { input, at } => cmd_snapshot(&input, at),
        Cmd::Validate { input } => cmd_validate(&input),
    }
}

fn read_stream(path: &Path) -> Result<EventStream, Failure> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_stream(&bytes).map_err(|e| Failure::Validation(anyhow!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn with_tau(s: EventStream, tau: Option<u64>) -> Result<EventStream, Failure> {
    let Some(tau) = tau else { return Ok(s) };
    let (mut meta, events) = s.into_parts();
    meta.tau = tau;
    EventStream::new(meta, events).map_err(|e| Failure::Validation(e.into()))
}

fn require_contact(s: &EventStream) -> Outcome {
    if s.kind() != StreamKind::Contact {
        return Err(Failure::Usage(anyhow!("expected a contact stream, got {}", s.kind().as_str())));
    }
    Ok(())
}

fn cmd_import(input: &Path, eta: u64, tau: u64, nodes: Option<u32>, horizon: Option<u64>, out: &Path) -> Outcome {
    let mut reader = csv::Reader::from_path(input).with_context(|| format!("reading {}", input.display()))?;
    let intervals = reader
        .deserialize::<ContactInterval>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Validation(e.into()))?;
    let n = nodes.unwrap_or_else(|| intervals.iter().map(|c| c.u.max(c.v) + 1).max().unwrap_or(0));
    let s = import_contact_trace(&intervals, eta, tau, n, horizon).map_err(|e| Failure::Validation(e.into()))?;
    write_file(out, &serialize_stream(&s))
}

fn cmd_generate(
    kind: GenKind,
    config: Option<&Path>,
    set: &[String],
    seed: Option<u64>,
    tau: Option<u64>,
    out: &Path,
) -> Outcome {
    let mut kv = match config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            KeyValues::parse(&text).map_err(|e| Failure::Usage(e.into()))?
        }
        None => KeyValues::default(),
    };
    for item in set {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("--set expects KEY=VALUE, got {item:?}"))?;
        kv.set(k.trim(), v.trim());
    }
    if let Some(s) = seed {
        kv.set("seed", s);
    }
    if let Some(t) = tau {
        kv.set("tau", t);
    }
    let usage = |e: trg_core::synth::SynthError| Failure::Usage(e.into());
    let s = match kind {
        GenKind::Rwp => generate_rwp(&RwpConfig::from_kv(&kv).map_err(usage)?).map_err(usage)?,
        GenKind::Markov => generate_markov(&MarkovEdgeConfig::from_kv(&kv).map_err(usage)?).map_err(usage)?,
    };
    write_file(out, &serialize_stream(&s))
}

fn cmd_reach(
    input: &Path,
    deltas: &[u64],
    workers: usize,
    tau: Option<u64>,
    factor: Option<u64>,
    verify: bool,
    out_dir: &Path,
) -> Outcome {
    if workers == 0 {
        return Err(Failure::Usage(anyhow!("--workers must be at least 1")));
    }
    let mut g = with_tau(read_stream(input)?, tau)?;
    require_contact(&g)?;
    if let Some(f) = factor {
        g = subdivide(&g, f, 1).map_err(|e| Failure::Usage(e.into()))?;
    }
    let out = reach_delays(&g, deltas, workers).map_err(|e| Failure::Validation(e.into()))?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    for (delta, b) in &out.bounds {
        write_file(&out_dir.join(format!("lower_{delta}.trg")), &serialize_stream(&b.lower))?;
        write_file(&out_dir.join(format!("upper_{delta}.trg")), &serialize_stream(&b.upper))?;
    }
    let mut log = String::new();
    for r in &out.records {
        log.push_str(&serde_json::to_string(r).context("encoding progress")?);
        log.push('\n');
    }
    write_file(&out_dir.join("progress.jsonl"), &log)?;

    if verify {
        let mut problems = Vec::new();
        for (delta, b) in &out.bounds {
            let exact = oracle_tvg(&g, *delta).map_err(|e| Failure::Validation(e.into()))?;
            let (low, up) = (b.lower.to_tvg(), b.upper.to_tvg());
            for raw in 0..=2 * g.horizon() as i64 {
                let t = Tick::from_raw(raw);
                let (l, x, u) = (low.sample(t), exact.sample(t), up.sample(t));
                if !l.is_subset(&x) || !x.is_subset(&u) || (t.is_instant() && l != x) {
                    problems.push(format!("delta {delta} at {t}"));
                }
            }
        }
        if !problems.is_empty() {
            return Err(Failure::Verification(problems.join(", ")));
        }
        println!("verified {} delays against the oracle", out.bounds.len());
    }
    Ok(())
}

fn cmd_metrics(input: &Path, out: Option<&Path>, averages: Option<&Path>) -> Outcome {
    let r = read_stream(input)?;
    let series = metrics_series(&r);
    let csv = to_csv(&series);
    match out {
        Some(p) => write_file(p, &csv)?,
        None => print!("{csv}"),
    }
    let avg = serde_json::to_string(&series.averages).context("encoding averages")?;
    match averages {
        Some(p) => write_file(p, &format!("{avg}\n"))?,
        None => eprintln!("{avg}"),
    }
    Ok(())
}

fn cmd_oracle(input: &Path, delta: u64, tau: Option<u64>, out: &Path) -> Outcome {
    let g = with_tau(read_stream(input)?, tau)?;
    require_contact(&g)?;
    let r = oracle_trg(&g, delta).map_err(|e| Failure::Validation(e.into()))?;
    write_file(out, &serialize_stream(&r))
}

fn cmd_snapshot(input: &Path, at: Tick) -> Outcome {
    let s = read_stream(input)?;
    let snap = snapshot_at(&s, at).map_err(|e| Failure::Usage(e.into()))?;
    let mut stdout = std::io::stdout().lock();
    for (u, v) in snap.arcs.iter() {
        if s.kind() == StreamKind::Contact && u > v {
            continue;
        }
        writeln!(stdout, "{u} {v}").context("writing output")?;
    }
    Ok(())
}

fn cmd_validate(input: &Path) -> Outcome {
    let s = read_stream(input)?;
    let report = validate_regularity(&s);
    if report.is_regular() {
        println!("ok: {} events, {} vertices, horizon {}", s.events().len(), s.nodes(), s.horizon());
        return Ok(());
    }
    for v in &report.violations {
        println!("{v}");
    }
    Err(Failure::Validation(anyhow!("{} violations", report.violations.len())))
}
