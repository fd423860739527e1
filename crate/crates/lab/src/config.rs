//! Flat `key = value` settings shared by the config file and the flags.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{config_err, LabError, LabResult};

/// Every key a config file or flag may set.
pub const KEYS: &[&str] = &[
    "r", "p", "q", "xi", "m", "n", "size", "delta", "alpha", "s", "reps", "seed", "threads", "out", "format",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key = value` lines; `#` starts a comment, blank lines are
    /// skipped, unknown keys and repeated keys are errors.
    pub fn parse(text: &str) -> LabResult<Self> {
        let mut out = Settings::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return config_err(format!("line {}: expected `key = value`, got `{raw}`", i + 1));
            };
            let (k, v) = (k.trim(), v.trim());
            if out.values.contains_key(k) {
                return config_err(format!("line {}: `{k}` set twice", i + 1));
            }
            out.set(k, v).map_err(|e| LabError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> LabResult<()> {
        if !KEYS.contains(&key) {
            return config_err(format!("unknown setting `{key}`"));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// `other` wins on conflicts.
    pub fn overlay(mut self, other: &Settings) -> Self {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> LabResult<Option<f64>> {
        self.raw(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> LabResult<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, key: &str) -> LabResult<f64> {
        self.f64(key)?.ok_or_else(|| LabError::Config(format!("missing required setting `{key}`")))
    }

    pub fn usize(&self, key: &str) -> LabResult<Option<usize>> {
        self.raw(key)
            .map(|v| v.parse::<usize>().map_err(|_| LabError::Config(format!("`{key}` expects a nonnegative integer, got `{v}`"))))
            .transpose()
    }

    pub fn usize_or(&self, key: &str, default: usize) -> LabResult<usize> {
        Ok(self.usize(key)?.unwrap_or(default))
    }

    pub fn u64_or(&self, key: &str, default: u64) -> LabResult<u64> {
        self.raw(key)
            .map(|v| v.parse::<u64>().map_err(|_| LabError::Config(format!("`{key}` expects a nonnegative integer, got `{v}`"))))
            .transpose()
            .map(|o| o.unwrap_or(default))
    }

    pub fn f64_list(&self, key: &str) -> LabResult<Option<Vec<f64>>> {
        self.raw(key)
            .map(|v| v.split(',').map(|t| parse_f64(key, t.trim())).collect())
            .transpose()
    }

    pub fn usize_list(&self, key: &str) -> LabResult<Option<Vec<usize>>> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| LabError::Config(format!("`{key}` expects integers, got `{t}`")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn pair(&self, key: &str) -> LabResult<Option<(f64, f64)>> {
        match self.f64_list(key)? {
            None => Ok(None),
            Some(v) if v.len() == 2 => Ok(Some((v[0], v[1]))),
            Some(v) => config_err(format!("`{key}` expects two comma-separated numbers, got {}", v.len())),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> LabResult<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => config_err(format!("`{key}` expects a finite number, got `{v}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overlays() {
        let file = Settings::parse("# tail run\nr = 0.25\ns = 0.5, 1,2\nreps=10\n").unwrap();
        assert_eq!(file.f64_list("s").unwrap().unwrap(), vec![0.5, 1.0, 2.0]);
        let mut flags = Settings::new();
        flags.set("reps", "20").unwrap();
        let merged = file.overlay(&flags);
        assert_eq!(merged.usize_or("reps", 1).unwrap(), 20);
        assert_eq!(merged.require_f64("r").unwrap(), 0.25);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Settings::parse("colour = red").is_err());
        assert!(Settings::parse("r 0.25").is_err());
        assert!(Settings::parse("r = 0.1\nr = 0.2").is_err());
        let s = Settings::parse("r = abc\nxi = 1,2,3").unwrap();
        assert!(s.f64("r").is_err());
        assert!(s.pair("xi").is_err());
        assert!(s.require_f64("p").is_err());
    }
}
