//! Permutations in one-line notation, classical pattern containment and the
//! brute-force enumeration oracles built on it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::patterns::PatternSet;

/// A permutation of `1..=n` in one-line notation. The empty permutation is allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{values:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    /// Order-isomorphic standardisation of distinct values onto `1..=len`.
    pub fn standardize(values: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut out = vec![0; values.len()];
        for (rank, i) in order.into_iter().enumerate() {
            out[i] = rank as u32 + 1;
        }
        Permutation(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    /// Value at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> u32 {
        self.0[pos - 1]
    }

    /// 1-based position of `value`, if present.
    pub fn position_of(&self, value: u32) -> Option<usize> {
        self.0.iter().position(|&v| v == value).map(|i| i + 1)
    }

    pub fn contains(&self, pattern: &Permutation) -> bool {
        let k = pattern.len();
        if k == 0 {
            return true;
        }
        if k > self.len() {
            return false;
        }
        let mut chosen = Vec::with_capacity(k);
        self.embed_from(pattern.values(), 0, &mut chosen)
    }

    // Backtracking over increasing index tuples; each new index must agree with
    // the pattern on its order relation to every previously chosen entry.
    fn embed_from(&self, pat: &[u32], start: usize, chosen: &mut Vec<usize>) -> bool {
        let depth = chosen.len();
        if depth == pat.len() {
            return true;
        }
        let remaining = pat.len() - depth;
        for idx in start..=self.0.len() - remaining {
            let v = self.0[idx];
            let fits = chosen
                .iter()
                .enumerate()
                .all(|(d, &ci)| (self.0[ci] < v) == (pat[d] < pat[depth]));
            if fits {
                chosen.push(idx);
                if self.embed_from(pat, idx + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    pub fn avoids_all(&self, set: &PatternSet) -> bool {
        set.patterns().iter().all(|p| !self.contains(p))
    }

    pub fn mirror(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Self {
        let n = self.len() as u32;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut out = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize - 1] = i as u32 + 1;
        }
        Permutation(out)
    }

    pub fn apply(&self, op: Symmetry) -> Self {
        match op {
            Symmetry::Mirror => self.mirror(),
            Symmetry::Complement => self.complement(),
            Symmetry::Inverse => self.inverse(),
        }
    }

    /// Applies `ops` left to right.
    pub fn apply_all(&self, ops: &[Symmetry]) -> Self {
        ops.iter().fold(self.clone(), |p, &op| p.apply(op))
    }

    pub fn is_derangement(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v as usize != i + 1)
    }

    /// Splices `n+1` in front of position `site` (site `n+1` appends).
    pub fn insert_max_at(&self, site: usize) -> Result<Self> {
        let n = self.len();
        if site == 0 || site > n + 1 {
            return Err(Error::SiteOutOfRange { site, max: n + 1 });
        }
        let mut v = self.0.clone();
        v.insert(site - 1, n as u32 + 1);
        Ok(Permutation(v))
    }

    /// Deletes the entry `n`; the inverse of [`Permutation::insert_max_at`].
    pub fn remove_max(&self) -> Self {
        let n = self.len() as u32;
        Permutation(self.0.iter().copied().filter(|&v| v != n).collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        if self.len() <= 9 {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts "3,6,4,1,2,5", the compact "364125", or "e"/"" for the empty permutation.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(Permutation::empty());
        }
        let values: Vec<u32> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("{s}: bad digit {c:?}"))))
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// The three generators of the symmetry group of the square acting on permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// Position reversal.
    Mirror,
    /// Value reflection `v -> n+1-v`.
    Complement,
    Inverse,
}

impl FromStr for Symmetry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mirror" | "reverse" | "*" => Ok(Symmetry::Mirror),
            "complement" | "c" => Ok(Symmetry::Complement),
            "inverse" | "-1" => Ok(Symmetry::Inverse),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// Rearranges `v` into the next permutation in lexicographic order.
fn next_lex(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of length `n` starting with `first`, lexicographically.
fn with_first(n: usize, first: u32) -> impl Iterator<Item = Permutation> {
    let rest: Vec<u32> = (1..=n as u32).filter(|&v| v != first).collect();
    let mut state = Some(rest);
    std::iter::from_fn(move || {
        let cur = state.take()?;
        let mut out = Vec::with_capacity(n);
        out.push(first);
        out.extend_from_slice(&cur);
        let mut next = cur;
        if next_lex(&mut next) {
            state = Some(next);
        }
        Some(Permutation(out))
    })
}

/// Lexicographically ordered members of the symmetric group that satisfy `keep`.
/// Work is split by first letter; concatenating the parts keeps the global order.
pub fn filter_permutations<F>(n: usize, keep: F) -> Vec<Permutation>
where
    F: Fn(&Permutation) -> bool + Sync,
{
    if n == 0 {
        let e = Permutation::empty();
        return if keep(&e) { vec![e] } else { Vec::new() };
    }
    let parts: Vec<Vec<Permutation>> = (1..=n as u32)
        .into_par_iter()
        .map(|first| with_first(n, first).filter(|p| keep(p)).collect())
        .collect();
    parts.into_iter().flatten().collect()
}

/// `S_n(E)` by exhaustive filtering, in lexicographic order.
pub fn enumerate_avoiders(n: usize, set: &PatternSet, limits: &Limits) -> Result<Vec<Permutation>> {
    Limits::check("permutation", n, limits.perm)?;
    Ok(filter_permutations(n, |p| p.avoids_all(set)))
}

/// 321-avoiding derangements of length `n`, lexicographically.
pub fn enumerate_derangements_avoiding_321(n: usize, limits: &Limits) -> Result<Vec<Permutation>> {
    Limits::check("derangement", n, limits.derangement)?;
    let p321 = Permutation(vec![3, 2, 1]);
    Ok(filter_permutations(n, |p| p.is_derangement() && !p.contains(&p321)))
}
