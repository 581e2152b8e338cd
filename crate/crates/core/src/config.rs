// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` text format shared by device configs and calibration
//! curve files.
//!
//! Blank lines and lines starting with `#` are ignored; a trailing `# ...`
//! after a value is a comment as well. Keys may appear at most once.

use crate::error::{Error, Result};

/// One parsed `key = value` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

impl Entry {
    pub fn parse_f64(&self) -> Result<f64> {
        let v: f64 = self.value.parse().map_err(|_| Error::Config {
            line: self.line,
            message: format!("`{}` is not a number: `{}`", self.key, self.value),
        })?;
        if !v.is_finite() {
            return Err(Error::Config {
                line: self.line,
                message: format!("`{}` must be finite", self.key),
            });
        }
        Ok(v)
    }

    pub fn parse_u32(&self) -> Result<u32> {
        self.value.parse().map_err(|_| Error::Config {
            line: self.line,
            message: format!(
                "`{}` must be a non-negative integer: `{}`",
                self.key, self.value
            ),
        })
    }

    pub fn unknown(&self) -> Error {
        Error::Config {
            line: self.line,
            message: format!("unknown key `{}`", self.key),
        }
    }
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            message: format!("expected `key = value`, got `{body}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Config {
                line,
                message: format!("malformed key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(Error::Config {
                line,
                message: format!("missing value for `{key}`"),
            });
        }
        if out.iter().any(|e| e.key == key) {
            return Err(Error::Config {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        out.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}
