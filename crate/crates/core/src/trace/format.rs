//! The `trg-stream v1` text format.
//!
//! ```text
//! trg-stream v1
//! kind contact
//! eta 1
//! tau 1
//! nodes 2
//! horizon 5
//! 0 UP 0 1
//! 3 DOWN 0 1
//! ```

use std::fmt::Write as _;

use crate::trace::stream::{
    check_events, Event, EventStream, ParseFault, StreamError, StreamKind, StreamMeta, Transition,
};

pub const MAGIC: &str = "trg-stream v1";
const HEADER_LINES: usize = 6;

pub fn serialize_stream(s: &EventStream) -> String {
    let m = s.meta();
    let mut out = String::with_capacity(64 + s.events().len() * 16);
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "kind {}", m.kind.as_str());
    let _ = writeln!(out, "eta {}", m.eta);
    let _ = writeln!(out, "tau {}", m.tau);
    let _ = writeln!(out, "nodes {}", m.nodes);
    let _ = writeln!(out, "horizon {}", m.horizon);
    for e in s.events() {
        let _ = writeln!(out, "{} {} {} {}", e.t, e.transition.as_str(), e.pair.0, e.pair.1);
    }
    out
}

fn header_err(line: usize, msg: impl Into<String>) -> StreamError {
    StreamError::Parse {
        line,
        fault: ParseFault::Header(msg.into()),
    }
}

fn header_value<'a>(line_no: usize, line: Option<&'a str>, key: &str) -> Result<&'a str, StreamError> {
    let line = line.ok_or_else(|| header_err(line_no, format!("missing `{key}` line")))?;
    match line.split_once(' ') {
        Some((k, v)) if k == key && !v.is_empty() && !v.contains(' ') => Ok(v),
        _ => Err(header_err(line_no, format!("expected `{key} <value>`, got {line:?}"))),
    }
}

fn header_int(line_no: usize, line: Option<&str>, key: &str) -> Result<u64, StreamError> {
    let v = header_value(line_no, line, key)?;
    v.parse()
        .map_err(|_| header_err(line_no, format!("`{key}` must be a non-negative integer, got {v:?}")))
}

pub fn parse_stream(text: &[u8]) -> Result<EventStream, StreamError> {
    let text = std::str::from_utf8(text).map_err(|e| header_err(1, format!("not UTF-8: {e}")))?;
    let mut lines = text.split('\n');
    if lines.next() != Some(MAGIC) {
        return Err(header_err(1, format!("first line must be `{MAGIC}`")));
    }
    let kind = match header_value(2, lines.next(), "kind")? {
        "contact" => StreamKind::Contact,
        "reach" => StreamKind::Reach,
        other => return Err(header_err(2, format!("unknown kind {other:?}"))),
    };
    let eta = header_int(3, lines.next(), "eta")?;
    if eta == 0 {
        return Err(header_err(3, "eta must be positive"));
    }
    let tau = header_int(4, lines.next(), "tau")?;
    let nodes = header_int(5, lines.next(), "nodes")?;
    if nodes == 0 || nodes > u32::MAX as u64 {
        return Err(header_err(5, "nodes must be in 1..=2^32-1"));
    }
    let horizon = header_int(6, lines.next(), "horizon")?;
    let meta = StreamMeta {
        kind,
        eta,
        tau,
        nodes: nodes as u32,
        horizon,
    };

    let mut events = Vec::new();
    let rest: Vec<&str> = lines.collect();
    let body_len = match rest.last() {
        Some(&"") => rest.len() - 1,
        _ => rest.len(),
    };
    for (i, raw) in rest[..body_len].iter().enumerate() {
        let line = HEADER_LINES + 1 + i;
        events.push(parse_event(raw).map_err(|fault| StreamError::Parse { line, fault })?);
    }
    if let Some(v) = check_events(&meta, &events).into_iter().next() {
        let line = HEADER_LINES + 1 + v.index.unwrap_or(0);
        return Err(StreamError::Parse {
            line,
            fault: ParseFault::Rule(v.rule),
        });
    }
    Ok(EventStream::from_parts_unchecked(meta, events))
}

fn parse_event(line: &str) -> Result<Event, ParseFault> {
    let fields: Vec<&str> = line.split(' ').collect();
    let [t, kind, u, v] = fields[..] else {
        return Err(ParseFault::Syntax(format!("expected `<t> UP|DOWN <u> <v>`, got {line:?}")));
    };
    let t: u64 = t.parse().map_err(|_| ParseFault::NonIntegerTime(t.to_owned()))?;
    let transition = match kind {
        "UP" => Transition::Up,
        "DOWN" => Transition::Down,
        _ => return Err(ParseFault::Syntax(format!("unknown event type {kind:?}"))),
    };
    let vertex = |s: &str| s.parse::<u32>().map_err(|_| ParseFault::Syntax(format!("bad vertex id {s:?}")));
    Ok(Event {
        t,
        transition,
        pair: (vertex(u)?, vertex(v)?),
    })
}
