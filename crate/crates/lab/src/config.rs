//! `key = value` configuration files and flag/file/default resolution.
//!
//! A config file supplies defaults for any long flag of the invoked
//! subcommand, one `key = value` pair per line (`#` comments allowed).
//! Explicit flags always win over the file; built-in defaults fill the
//! rest.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::Failure;

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::domain(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Resolve one parameter: explicit flag, then config file, then default.
/// Records the canonical value under `key` so the run header carries the
/// full effective configuration.
pub struct Resolver<'a> {
    file: &'a FileConfig,
    pub record: BTreeMap<String, String>,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a FileConfig) -> Self {
        Self { file, record: BTreeMap::new() }
    }

    fn parse_key<T: FromStr>(&self, key: &str, raw: &str) -> Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        raw.parse::<T>()
            .map_err(|e| Failure::domain(format!("invalid value `{raw}` for `{key}`: {e}")))
    }

    /// Required parameter.
    pub fn required<T: FromStr + ToString>(
        &mut self,
        key: &str,
        flag: Option<T>,
    ) -> Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(raw) => self.parse_key(key, raw)?,
                None => {
                    return Err(Failure::domain(format!(
                        "missing required parameter `{key}` (flag --{key} or config entry)"
                    )))
                }
            },
        };
        self.record.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Optional parameter with a default.
    pub fn with_default<T: FromStr + ToString>(
        &mut self,
        key: &str,
        flag: Option<T>,
        default: T,
    ) -> Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(raw) => self.parse_key(key, raw)?,
                None => default,
            },
        };
        self.record.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Optional parameter whose default is computed later; records nothing
    /// when absent (callers record the derived value themselves).
    pub fn optional<T: FromStr + ToString>(
        &mut self,
        key: &str,
        flag: Option<T>,
    ) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(raw) => Some(self.parse_key(key, raw)?),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.record.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    /// Record a derived value under `key` (kept canonical for rebuilds).
    pub fn record_value(&mut self, key: &str, value: impl ToString) {
        self.record.insert(key.to_string(), value.to_string());
    }
}
