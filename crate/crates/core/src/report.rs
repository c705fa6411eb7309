//! Named pass/fail check lists produced by the verification routines.

use serde::ser::{Serialize, SerializeMap, Serializer};

/// An ordered list of named boolean checks; serializes as a JSON object
/// `{name: pass}` in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    checks: Vec<(String, bool)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push((name.into(), pass));
    }

    /// Appends every check of `other`, prefixing names with `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: &Report) {
        for (name, pass) in &other.checks {
            self.checks.push((format!("{prefix}.{name}"), *pass));
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, pass)| *pass)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, pass)| *pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, pass)| !pass)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.checks.iter().map(|(n, p)| (n.as_str(), *p))
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.checks.len()))?;
        for (name, pass) in &self.checks {
            map.serialize_entry(name, pass)?;
        }
        map.end()
    }
}
