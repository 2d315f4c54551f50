//! Forbidden-pattern sets, including the ten named sets studied here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, Symmetry};

/// Names of the built-in pattern sets.
pub const BUILTIN_SETS: [&str; 10] = ["F1", "F2", "F3", "H1", "H1STAR", "H2", "H3", "H4", "H3IC", "H5"];

fn listing(name: &str) -> Option<&'static str> {
    Some(match name {
        "F1" => "1234;1243;1324;2134;2314;3124",
        "F2" => "1324;2134;2143;2314;3124;3214",
        "F3" => "1342;2341;2413;2431;3142;3241",
        "H1" => "1324;2314;2413;3124;3142;3214",
        "H1STAR" => "2341;2413;2431;4231;3142;3241",
        "H2" => "1234;1243;1324;1423;2314;3124",
        "H3" => "2341;2413;2431;3412;3421;4231",
        "H4" => "2134;2143;2314;3124;3214;4213",
        "H3IC" => "1324;2134;2143;2314;2413;3214",
        "H5" => "1234;1243;1324;1423;2134;3124",
        _ => return None,
    })
}

/// A non-empty set of forbidden patterns.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PatternSet {
    name: Option<String>,
    patterns: Vec<Permutation>,
}

impl PatternSet {
    pub fn new(patterns: Vec<Permutation>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::Parse("empty pattern set".into()));
        }
        if patterns.iter().any(Permutation::is_empty) {
            return Err(Error::Parse("patterns must have length >= 1".into()));
        }
        Ok(PatternSet { name: None, patterns })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// One of [`BUILTIN_SETS`], matched case-insensitively.
    pub fn builtin(name: &str) -> Result<Self> {
        let key = name.trim().to_ascii_uppercase();
        let text = listing(&key).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let patterns = text.split(';').map(str::parse).collect::<Result<Vec<Permutation>>>()?;
        Ok(PatternSet { name: Some(key), patterns })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn min_len(&self) -> usize {
        self.patterns.iter().map(Permutation::len).min().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.patterns.iter().map(Permutation::len).max().unwrap_or(0)
    }

    /// Every pattern transformed by `ops` applied left to right; result sorted.
    pub fn symmetry_set(&self, ops: &[Symmetry]) -> PatternSet {
        let mut patterns: Vec<Permutation> = self.patterns.iter().map(|p| p.apply_all(ops)).collect();
        patterns.sort();
        patterns.dedup();
        PatternSet { name: None, patterns }
    }

    /// Patterns as a sorted list, for set comparisons.
    pub fn sorted(&self) -> Vec<Permutation> {
        let mut v = self.patterns.clone();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.patterns.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for PatternSet {
    type Err = Error;

    /// A built-in name (`F1`, `H3IC`, ...) or patterns separated by `;`.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(set) = PatternSet::builtin(s) {
            return Ok(set);
        }
        let patterns = s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Permutation>>>()?;
        PatternSet::new(patterns)
    }
}
