//! Run settings: an optional `key = value` file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

/// Keys a config file may set. Underscores are accepted in place of dashes.
pub const KNOWN_KEYS: &[&str] = &[
    "model",
    "gamma",
    "omega",
    "omega1",
    "omega2",
    "zeta1",
    "t-off",
    "theta-deg",
    "state",
    "t-end",
    "t-max",
    "dt",
    "stride",
    "full-state",
    "fidelity",
    "zeta-over-gamma",
    "r",
    "out",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::invalid(format!("config line {}: expected `key = value`", n + 1)))?;
            let key = key.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::invalid(format!("config line {}: unknown key `{key}`", n + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Flags override the file.
    pub fn set(&mut self, key: &str, value: Option<impl Display>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    pub fn set_flag(&mut self, key: &str, on: bool) {
        if on {
            self.values.insert(key.to_string(), "true".into());
        }
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.str(key)
            .map(|s| s.parse::<T>().map_err(|_| CliError::invalid(format!("`{key}`: cannot parse `{s}`"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.str(key) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(s) => Err(CliError::invalid(format!("`{key}`: expected true or false, got `{s}`"))),
        }
    }

    /// Comma-separated list of reals.
    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.str(key)
            .map(|s| {
                s.split(',')
                    .map(|x| {
                        x.trim().parse::<f64>().map_err(|_| CliError::invalid(format!("`{key}`: cannot parse `{x}`")))
                    })
                    .collect()
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let mut s = Settings::parse("# run\ngamma = 2  # per second\n\nt_end=5\n").unwrap();
        assert_eq!(s.get::<f64>("gamma").unwrap(), Some(2.0));
        assert_eq!(s.get::<f64>("t-end").unwrap(), Some(5.0));
        s.set("gamma", Some(3.0));
        s.set("dt", None::<f64>);
        assert_eq!(s.get::<f64>("gamma").unwrap(), Some(3.0));
        assert_eq!(s.str("dt"), None);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Settings::parse("gamma 2").is_err());
        assert!(Settings::parse("colour = red").is_err());
        let s = Settings::parse("gamma = fast\nfidelity = maybe").unwrap();
        assert!(s.get::<f64>("gamma").is_err());
        assert!(s.flag("fidelity").is_err());
    }

    #[test]
    fn lists() {
        let s = Settings::parse("r = 0.2, 0.4,0.6").unwrap();
        assert_eq!(s.list("r").unwrap(), Some(vec![0.2, 0.4, 0.6]));
    }
}
