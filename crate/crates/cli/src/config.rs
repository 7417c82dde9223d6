use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::CliError;

/// Keys accepted in a config file; the same names as the long flags.
pub const KEYS: &[&str] = &[
    "alpha", "qr", "d", "sweep", "k", "hubble", "nmax", "tail-tol", "series-tol", "jobs", "format", "wide",
    "field", "channel", "kind", "method",
];

const LIST_KEYS: &[&str] = &["alpha", "qr", "hubble"];

/// `key = value` settings. List keys accept comma-separated values and
/// may repeat.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, Vec<String>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        if text.trim_start().starts_with('{') {
            Config::from_manifest(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        } else {
            Config::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let mut cfg = Config::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", no + 1))?;
            cfg.insert(k.trim(), v.trim()).map_err(|e| format!("line {}: {e}", no + 1))?;
        }
        Ok(cfg)
    }

    /// Reads the `parameters` object of a run manifest.
    fn from_manifest(text: &str) -> Result<Config, String> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let params = v
            .get("parameters")
            .and_then(|p| p.as_object())
            .ok_or("manifest has no parameters object")?;
        let mut cfg = Config::default();
        for (k, v) in params {
            let s = v.as_str().ok_or_else(|| format!("parameter {k} is not a string"))?;
            cfg.insert(k, s)?;
        }
        Ok(cfg)
    }

    fn insert(&mut self, key: &str, value: &str) -> Result<(), String> {
        if !KEYS.contains(&key) {
            return Err(format!("unknown key '{key}'"));
        }
        let slot = self.entries.entry(key.to_string()).or_default();
        if LIST_KEYS.contains(&key) {
            slot.extend(value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()));
        } else {
            *slot = vec![value.to_string()];
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).and_then(|v| v.last()).map(String::as_str)
    }

    pub fn list(&self, key: &str) -> &[String] {
        self.entries.get(key).map_or(&[], Vec::as_slice)
    }

    /// Parses `key` if present.
    pub fn value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|s| s.parse::<T>().map_err(|e| CliError::Usage(format!("config {key} = {s}: {e}"))))
            .transpose()
    }

    pub fn values<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.list(key)
            .iter()
            .map(|s| s.parse::<T>().map_err(|e| CliError::Usage(format!("config {key} = {s}: {e}"))))
            .collect()
    }
}
