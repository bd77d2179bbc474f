//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// Blank lines and lines starting with `#` are ignored; keys use either
    /// `-` or `_` as word separator.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            let key = k.trim().replace('-', "_");
            if key.is_empty() {
                return Err(format!("config line {}: empty key", i + 1));
            }
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(format!("config line {}: duplicate key '{key}'", i + 1));
            }
        }
        Ok(Self { values })
    }

    /// Parsed value of `key`, marking it as consumed.
    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.remove(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| format!("config key '{key}' = '{v}': {e}")),
        }
    }

    /// Fails on keys no command consumed.
    pub fn finish(self) -> Result<(), String> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(format!("unknown config key '{k}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let mut c = Config::parse("# comment\nsetup = cp\n\nz-min=0.25\n").unwrap();
        assert_eq!(c.take::<String>("setup").unwrap().as_deref(), Some("cp"));
        assert_eq!(c.take::<f64>("z_min").unwrap(), Some(0.25));
        assert_eq!(c.take::<f64>("a").unwrap(), None);
        c.finish().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Config::parse("setup cp").is_err());
        assert!(Config::parse("a = 1\na = 2").is_err());
        let mut c = Config::parse("a = one").unwrap();
        assert!(c.take::<f64>("a").is_err());
        assert!(Config::parse("typo = 1").unwrap().finish().is_err());
    }
}
