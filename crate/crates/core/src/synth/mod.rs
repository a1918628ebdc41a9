//! Seeded synthetic contact traces.

mod markov;
mod rwp;

pub use markov::{generate_markov, MarkovEdgeConfig};
pub use rwp::{generate_rwp, RwpConfig};

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::trace::StreamError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error(transparent)]
    Stream(#[from] StreamError),
}

/// Flat `key = value` settings; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyValues(BTreeMap<String, String>);

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, SynthError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(SynthError::Config {
                    line: i + 1,
                    msg: format!("expected key=value, got {line:?}"),
                });
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(KeyValues(map))
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, SynthError> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| SynthError::Invalid(format!("cannot parse {key} = {v:?}"))),
        }
    }

    fn check_keys(&self, known: &[&str]) -> Result<(), SynthError> {
        match self.0.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(SynthError::Invalid(format!("unknown key {k:?}"))),
            None => Ok(()),
        }
    }
}
