//! Flat `key = value` run configuration. Flags given on the command line win
//! over anything read here.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};

const KEYS: &[&str] = &[
    "format", "timing", "field", "box", "gmax", "slope", "preset", "spec", "gens", "genus", "seed", "count", "max-size",
    "campaign", "dump",
];

/// Keys whose values are file paths, resolved against the config file's directory.
const PATH_KEYS: &[&str] = &["spec", "gens", "dump"];

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            let (k, v) = (k.trim().replace('_', "-"), v.trim());
            if !KEYS.contains(&k.as_str()) {
                bail!("line {}: unknown key `{k}` (known: {})", i + 1, KEYS.join(", "));
            }
            let v = if PATH_KEYS.contains(&k.as_str()) {
                base.join(v).to_string_lossy().into_owned()
            } else {
                v.to_string()
            };
            if values.insert(k.clone(), v).is_some() {
                bail!("line {}: key `{k}` given twice", i + 1);
            }
        }
        Ok(RunConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        debug_assert!(KEYS.contains(&key), "unregistered config key {key}");
        self.values.get(key).map(String::as_str)
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("config key `{key}`: {e}")))
            .transpose()
    }

    /// The flag if given, else the config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.parsed(key),
        }
    }

    pub fn pick_path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.get(key).map(PathBuf::from))
    }
}
