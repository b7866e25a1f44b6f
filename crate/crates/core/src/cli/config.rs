//! `key = value` configuration files mirroring the command-line flags.
//! Repeated keys accumulate, like repeated flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const KEYS: [&str; 14] = [
    "model",
    "n",
    "eta",
    "beta",
    "delta",
    "epsilon",
    "range",
    "table",
    "trials",
    "seed",
    "metric",
    "truncation",
    "out",
    "d",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, Vec<String>>,
}

impl Config {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::parse(&text).map_err(|(line, message)| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut values: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or((idx + 1, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim().trim_start_matches("--").to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err((idx + 1, format!("unknown key `{key}`")));
            }
            values
                .entry(key)
                .or_default()
                .push(value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> &[String] {
        self.values.get(key).map(Vec::as_slice).unwrap_or(&[])
    }
}
