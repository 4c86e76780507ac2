use crate::{Error, Result};
use std::collections::BTreeMap;

/// Flat key=value run configuration. Keys carry section prefixes
/// ("grid.h", "evolve.dt", "cone.v1"); values stay strings until a
/// typed accessor parses them, so one struct serves every verb.
#[derive(Debug, Clone, Default)]
pub struct Config {
    map: BTreeMap<String, String>,
}

impl Config {
    pub fn new() -> Self {
        Config::default()
    }

    /// Parse file contents: one `key = value` per line, `#` comments,
    /// blank lines ignored. Duplicate keys within one source are
    /// almost always an editing accident, so they are rejected.
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::validation(format!("config line {}: expected key=value", idx + 1)))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::validation(format!("config line {}: empty key", idx + 1)));
            }
            if cfg.map.insert(key.clone(), value).is_some() {
                return Err(Error::validation(format!("config line {}: duplicate key '{key}'", idx + 1)));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    /// Apply a `--set key=value` override; later calls win.
    pub fn set_override(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::validation(format!("--set '{spec}': expected key=value")))?;
        self.map.insert(key.trim().to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|k| k.as_str())
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::validation(format!("config key '{key}': '{v}' is not a number"))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?
            .ok_or_else(|| Error::validation(format!("config key '{key}' is required")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::validation(format!("config key '{key}': '{v}' is not a count"))),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get_str(key).unwrap_or(default)
    }

    /// Comma-separated list of numbers.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => {
                let mut out = Vec::new();
                for part in v.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    out.push(part.parse::<f64>().map_err(|_| {
                        Error::validation(format!("config key '{key}': '{part}' is not a number"))
                    })?);
                }
                Ok(Some(out))
            }
        }
    }

    /// A positive value with a default; zero/negative rejected. Used
    /// for steps and tolerances, which must stay > 0.
    pub fn positive_or(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.f64_or(key, default)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::validation(format!("config key '{key}' must be positive, got {v}")));
        }
        Ok(v)
    }

    /// Reject keys outside the known set for a verb (typo protection).
    pub fn check_known(&self, known: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if !known.contains(&k.as_str()) {
                return Err(Error::validation(format!("unknown config key '{k}'")));
            }
        }
        Ok(())
    }

    /// Echo of the effective configuration for run manifests.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.map.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let cfg = Config::parse("# header\n\n grid.h = 0.02 # step\nmu=1.0\n").unwrap();
        assert_eq!(cfg.f64("grid.h").unwrap(), Some(0.02));
        assert_eq!(cfg.f64("mu").unwrap(), Some(1.0));
    }

    #[test]
    fn duplicate_key_rejected() {
        assert!(Config::parse("a=1\na=2\n").is_err());
    }

    #[test]
    fn missing_equals_rejected() {
        let err = Config::parse("grid.h 0.02\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn set_override_wins() {
        let mut cfg = Config::parse("mu=1.0\n").unwrap();
        cfg.set_override("mu=0.5").unwrap();
        assert_eq!(cfg.f64("mu").unwrap(), Some(0.5));
    }

    #[test]
    fn typed_accessors_report_key() {
        let cfg = Config::parse("evolve.dt=fast\n").unwrap();
        let err = cfg.f64("evolve.dt").unwrap_err();
        assert!(err.to_string().contains("evolve.dt"));
        assert!(Config::parse("tol=0\n").unwrap().positive_or("tol", 1.0).is_err());
    }

    #[test]
    fn list_accessor() {
        let cfg = Config::parse("evolve.record = 1, 2.5, 10\n").unwrap();
        assert_eq!(cfg.f64_list("evolve.record").unwrap().unwrap(), vec![1.0, 2.5, 10.0]);
    }
}
