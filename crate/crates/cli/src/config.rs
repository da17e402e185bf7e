//! `key = value` config files. Values are resolved as flag, then file, then
//! built-in default.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

pub const KNOWN_KEYS: &[&str] = &[
    "format",
    "lexicon",
    "min_arg_tokens",
    "require_verb",
    "segment_window_sentences",
    "pos_gates",
    "patterns",
    "p2_within_turn",
    "p2_cross_turn",
    "seed",
    "test_size",
    "stratify",
    "families",
    "runs",
    "learning_rate",
    "l2_penalty",
    "max_epochs",
    "convergence_tol",
    "resample",
];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
                Self::parse(&text).with_context(|| format!("in config {}", p.display()))
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key `{key}`", i + 1);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag value if given, else the file value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw.parse().map_err(|e| anyhow!("config key `{key}`: cannot parse `{raw}`: {e}")),
            None => Ok(default),
        }
    }

    /// Boolean flags that can only switch a default off (`--no-x`).
    pub fn resolve_switch(&self, disabled_by_flag: bool, key: &str, default: bool) -> Result<bool> {
        if disabled_by_flag {
            return Ok(false);
        }
        self.resolve(None, key, default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_flag_then_file_then_default() {
        let cfg = ConfigFile::parse("# comment\nseed = 9\nmin-arg-tokens=4\n").unwrap();
        assert_eq!(cfg.resolve(Some(1u64), "seed", 0).unwrap(), 1);
        assert_eq!(cfg.resolve(None, "seed", 0u64).unwrap(), 9);
        assert_eq!(cfg.resolve(None, "min_arg_tokens", 3usize).unwrap(), 4);
        assert_eq!(cfg.resolve(None, "runs", 5usize).unwrap(), 5);
    }

    #[test]
    fn bad_lines_are_reported() {
        assert!(ConfigFile::parse("seed 9").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        let cfg = ConfigFile::parse("seed = nine").unwrap();
        assert!(cfg.resolve(None, "seed", 0u64).is_err());
    }

    #[test]
    fn switches() {
        let cfg = ConfigFile::parse("require_verb = false").unwrap();
        assert!(!cfg.resolve_switch(false, "require_verb", true).unwrap());
        assert!(!cfg.resolve_switch(true, "p2_cross_turn", true).unwrap());
        assert!(cfg.resolve_switch(false, "p2_cross_turn", true).unwrap());
    }
}
