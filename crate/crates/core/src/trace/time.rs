use std::fmt;
use std::str::FromStr;

/// A point on the half-epoch sampling grid.
///
/// Even ticks are epoch starts (`2k` is the instant `kη`); odd ticks stand
/// for the whole open interval of an epoch (`2k+1` represents `(kη, (k+1)η)`).
/// Regular streams are constant on open epochs, so these two samples per
/// epoch determine them completely.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tick(i64);

impl Tick {
    pub const fn instant(k: u64) -> Self {
        Tick(2 * k as i64)
    }

    pub const fn mid(k: u64) -> Self {
        Tick(2 * k as i64 + 1)
    }

    pub const fn from_raw(raw: i64) -> Self {
        Tick(raw)
    }

    pub const fn raw(self) -> i64 {
        self.0
    }

    pub const fn is_instant(self) -> bool {
        self.0 % 2 == 0
    }

    /// Index of the epoch containing this tick.
    pub const fn epoch(self) -> i64 {
        self.0.div_euclid(2)
    }

    /// Shift by a whole number of epochs.
    pub const fn shifted(self, epochs: i64) -> Self {
        Tick(self.0 + 2 * epochs)
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_instant() {
            write!(f, "{}", self.epoch())
        } else {
            write!(f, "{}.5", self.epoch())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not an integer or half-integer time: {0:?}")]
pub struct TickParseError(pub String);

impl FromStr for Tick {
    type Err = TickParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TickParseError(s.to_owned());
        let (whole, frac) = match s.split_once('.') {
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        let k: u64 = whole.parse().map_err(|_| bad())?;
        match frac.trim_end_matches('0') {
            "" => Ok(Tick::instant(k)),
            "5" => Ok(Tick::mid(k)),
            _ => Err(bad()),
        }
    }
}
