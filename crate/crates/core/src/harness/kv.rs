//! Flat `key = value` text documents used for identification results,
//! ground-truth sidecars and parameter input.

use std::fmt;
use std::path::Path;

use super::HarnessError;
use crate::params::InertialParams;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KeyValueDoc {
    entries: Vec<(String, String)>,
}

impl KeyValueDoc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn extend<I: IntoIterator<Item = (String, String)>>(&mut self, entries: I) {
        self.entries.extend(entries);
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Last value written for `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<f64, HarnessError> {
        let raw = self.get(key).ok_or_else(|| HarnessError::Parse(format!("missing key {key:?}")))?;
        raw.parse().map_err(|_| HarnessError::Parse(format!("{key} = {raw:?} is not a number")))
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut doc = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Parse(format!("line {}: expected `key = value`", i + 1)))?;
            doc.push(k.trim(), v.trim());
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_string()).map_err(|e| HarnessError::io(path, e))
    }
}

impl fmt::Display for KeyValueDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

pub fn params_to_entries(pi: &InertialParams) -> Vec<(String, String)> {
    InertialParams::LABELS.iter().zip(pi.to_array()).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

pub fn params_from_doc(doc: &KeyValueDoc) -> Result<InertialParams, HarnessError> {
    let mut v = [0.0; 10];
    for (slot, key) in v.iter_mut().zip(InertialParams::LABELS) {
        *slot = doc.get_f64(key)?;
    }
    Ok(InertialParams::from_array(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_roundtrip_through_text() {
        let pi =
            InertialParams::from_array([1.836, 0.062, 0.001, 0.208, 0.1 + 0.2, 0.593, -0.541, 1.022, 0.19, -0.129]);
        let mut doc = KeyValueDoc::new();
        doc.push("# ignored", "x");
        doc.extend(params_to_entries(&pi));
        let parsed = KeyValueDoc::parse(&format!("# comment\n\n{doc}")).unwrap();
        assert_eq!(params_from_doc(&parsed).unwrap(), pi);
    }

    #[test]
    fn errors() {
        assert!(KeyValueDoc::parse("no equals sign").is_err());
        let doc = KeyValueDoc::parse("m = 1\nmcx = nope").unwrap();
        assert!(params_from_doc(&doc).is_err());
    }
}
