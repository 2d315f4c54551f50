//! Size caps for brute-force oracles and tree expansions.

use crate::error::{Error, Result};

/// Upper bounds applied by every enumerating operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Longest permutation enumerated by brute force.
    pub perm: usize,
    /// Longest permutation scanned for 321-avoiding derangements.
    pub derangement: usize,
    /// Longest word enumerated.
    pub word: usize,
    /// Deepest object-level tree.
    pub depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { perm: 9, derangement: 10, word: 14, depth: 8 }
    }
}

impl Limits {
    /// Effectively no caps; used behind an explicit opt-in.
    pub fn unbounded() -> Self {
        Limits { perm: usize::MAX, derangement: usize::MAX, word: usize::MAX, depth: usize::MAX }
    }

    pub(crate) fn check(what: &'static str, n: usize, limit: usize) -> Result<()> {
        if n > limit {
            Err(Error::SizeLimit { what, n, limit })
        } else {
            Ok(())
        }
    }
}
