//! Similarity relations and their integer-word coding, and generalized Fine words.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

fn parse_letters(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() || s == "e" || s == "ε" {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("{s}: bad digit {c:?}"))))
            .collect()
    }
}

pub(crate) fn format_letters(letters: &[u32]) -> String {
    if letters.is_empty() {
        "e".to_string()
    } else if letters.iter().all(|&l| l <= 9) {
        letters.iter().map(u32::to_string).collect()
    } else {
        letters.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `a_1 = 0` and `0 <= a_{x+1} <= a_x + 1`.
pub fn validate_similarity_word(letters: &[u32]) -> bool {
    letters.first() == Some(&0) && letters.windows(2).all(|w| w[1] <= w[0] + 1)
}

/// Integer coding of a similarity relation: `a_y = y - min{x : x R y}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimilarityWord(Vec<u32>);

impl SimilarityWord {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if validate_similarity_word(&letters) {
            Ok(SimilarityWord(letters))
        } else {
            Err(Error::InvalidWord { word: format_letters(&letters), reason: "not a similarity word".into() })
        }
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// Nonsingular iff every 0 is followed by a 1.
    pub fn is_nonsingular(&self) -> bool {
        let l = &self.0;
        l.iter().enumerate().all(|(i, &a)| a != 0 || l.get(i + 1) == Some(&1))
    }

    pub fn to_relation(&self) -> SimilarityRelation {
        relation_from_word(self)
    }
}

impl fmt::Display for SimilarityWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.0))
    }
}

impl FromStr for SimilarityWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SimilarityWord::new(parse_letters(s)?)
    }
}

/// A reflexive symmetric relation on `[n]`; only the off-diagonal pairs `x < y` are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimilarityRelation {
    n: usize,
    edges: BTreeSet<(u32, u32)>,
}

impl SimilarityRelation {
    /// Builds a relation from unordered pairs; checks ranges only.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut edges = BTreeSet::new();
        for (a, b) in pairs {
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            if x == y || x == 0 || y as usize > n {
                return Err(Error::InvalidRelation(format!("pair {a}-{b} on [{n}]")));
            }
            edges.insert((x, y));
        }
        Ok(SimilarityRelation { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    pub fn related(&self, a: u32, b: u32) -> bool {
        a == b || self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// `x < y < z` and `x R z` force `x R y` and `y R z`.
    pub fn has_interval_property(&self) -> bool {
        self.edges.iter().all(|&(x, z)| (x + 1..z).all(|y| self.related(x, y) && self.related(y, z)))
    }

    pub fn is_nonsingular(&self) -> bool {
        (1..=self.n as u32).all(|x| self.edges.iter().any(|&(a, b)| a == x || b == x))
    }
}

impl fmt::Display for SimilarityRelation {
    /// `"n; x-y, x-y"` with pairs in lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.edges.iter().map(|(x, y)| format!("{x}-{y}")).collect();
        if pairs.is_empty() {
            write!(f, "{};", self.n)
        } else {
            write!(f, "{}; {}", self.n, pairs.join(", "))
        }
    }
}

impl FromStr for SimilarityRelation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (n, rest) = s.split_once(';').ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        let n: usize = n.trim().parse().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let mut pairs = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = tok.split_once('-').ok_or_else(|| Error::Parse(format!("bad pair {tok:?}")))?;
            let a: u32 = a.trim().parse().map_err(|e| Error::Parse(format!("{tok}: {e}")))?;
            let b: u32 = b.trim().parse().map_err(|e| Error::Parse(format!("{tok}: {e}")))?;
            pairs.push((a, b));
        }
        SimilarityRelation::new(n, pairs)
    }
}

/// Edges `{y-j, y}` for `1 <= j <= a_y`.
pub fn relation_from_word(word: &SimilarityWord) -> SimilarityRelation {
    let mut edges = BTreeSet::new();
    for (idx, &a) in word.letters().iter().enumerate() {
        let y = idx as u32 + 1;
        for j in 1..=a {
            edges.insert((y - j, y));
        }
    }
    SimilarityRelation { n: word.letters().len(), edges }
}

/// Inverse coding; fails unless the relation has the interval property.
pub fn word_from_relation(rel: &SimilarityRelation) -> Result<SimilarityWord> {
    let letters: Vec<u32> = (1..=rel.n as u32)
        .map(|y| {
            let min = rel.edges.iter().filter(|&&(_, b)| b == y).map(|&(a, _)| a).min();
            min.map_or(0, |x| y - x)
        })
        .collect();
    let word = SimilarityWord::new(letters)
        .map_err(|_| Error::InvalidRelation(format!("{rel} is not a similarity relation")))?;
    if relation_from_word(&word) != *rel {
        return Err(Error::InvalidRelation(format!("{rel} violates the interval property")));
    }
    Ok(word)
}

/// All similarity words of length `n`, lexicographically.
pub fn enumerate_similarity_words(n: usize) -> Vec<SimilarityWord> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0u32];
    fn rec(n: usize, cur: &mut Vec<u32>, out: &mut Vec<SimilarityWord>) {
        if cur.len() == n {
            out.push(SimilarityWord(cur.clone()));
            return;
        }
        let last = *cur.last().unwrap();
        for l in 0..=last + 1 {
            cur.push(l);
            rec(n, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

/// The pair `(p, q)` with `0 <= p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FineParams {
    p: u32,
    q: u32,
}

impl FineParams {
    /// `(0, 2)`: nonsingular similarity relations.
    pub const NONSINGULAR: FineParams = FineParams { p: 0, q: 2 };

    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p < q {
            Ok(FineParams { p, q })
        } else {
            Err(Error::InvalidParams { p, q })
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Whether a zero at 1-based position `i` must open the ascent `1..q-1`.
    pub(crate) fn zero_is_constrained(&self, i: usize) -> bool {
        i > 1 || self.p == 0
    }
}

impl fmt::Display for FineParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Membership test for generalized Fine words:
/// prefix `0,1,..,p-1` (at least the leading 0), letters rise by at most one,
/// and every constrained zero is followed by `1,..,q-1` inside the word.
pub fn validate_fine_word(letters: &[u32], params: FineParams) -> bool {
    let n = letters.len();
    if n == 0 || letters[0] != 0 || n < params.p as usize {
        return false;
    }
    if (0..params.p as usize).any(|i| letters[i] != i as u32) {
        return false;
    }
    if letters.windows(2).any(|w| w[1] > w[0] + 1) {
        return false;
    }
    let q = params.q as usize;
    letters.iter().enumerate().all(|(idx, &l)| {
        if l != 0 || !params.zero_is_constrained(idx + 1) {
            return true;
        }
        idx + q <= n && (1..q).all(|j| letters[idx + j] == j as u32)
    })
}

/// A word over the naturals together with the parameters it is read under.
///
/// Words produced by the `p = 0` generating tree omit the leading `0,1,..,q-1`;
/// such "tree words" are built with [`FineWord::tree_word`] and do not satisfy
/// [`validate_fine_word`] on their own.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FineWord {
    letters: Vec<u32>,
    params: FineParams,
}

impl FineWord {
    pub fn new(letters: Vec<u32>, params: FineParams) -> Result<Self> {
        if validate_fine_word(&letters, params) {
            Ok(FineWord { letters, params })
        } else {
            Err(Error::InvalidWord {
                word: format_letters(&letters),
                reason: format!("not a generalized Fine word for {params}"),
            })
        }
    }

    pub fn tree_word(letters: Vec<u32>, params: FineParams) -> Self {
        FineWord { letters, params }
    }

    pub fn parse(s: &str, params: FineParams) -> Result<Self> {
        FineWord::new(parse_letters(s)?, params)
    }

    pub fn parse_tree_word(s: &str, params: FineParams) -> Result<Self> {
        Ok(FineWord::tree_word(parse_letters(s)?, params))
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn params(&self) -> FineParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        validate_fine_word(&self.letters, self.params)
    }

    pub fn into_letters(self) -> Vec<u32> {
        self.letters
    }
}

impl fmt::Display for FineWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

/// All generalized Fine words of length `n`, lexicographically.
pub fn enumerate_fine_words(n: usize, params: FineParams, limits: &Limits) -> Result<Vec<FineWord>> {
    Limits::check("word", n, limits.word)?;
    let mut out = Vec::new();
    if n == 0 || n < params.p as usize {
        return Ok(out);
    }
    let mut cur = Vec::with_capacity(n);
    fine_rec(n, params, &mut cur, 0, &mut out);
    Ok(out)
}

// `forced` counts letters still owed to the ascent opened by the latest zero.
fn fine_rec(n: usize, params: FineParams, cur: &mut Vec<u32>, forced: u32, out: &mut Vec<FineWord>) {
    let pos = cur.len() + 1;
    if pos > n {
        if forced == 0 {
            out.push(FineWord { letters: cur.clone(), params });
        }
        return;
    }
    let candidates: Vec<u32> = if pos <= params.p.max(1) as usize {
        vec![pos as u32 - 1]
    } else if forced > 0 {
        vec![cur[pos - 2] + 1]
    } else {
        (0..=cur[pos - 2] + 1).collect()
    };
    for l in candidates {
        let next_forced = if l == 0 && params.zero_is_constrained(pos) {
            params.q - 1
        } else {
            forced.saturating_sub(1)
        };
        // an ascent that cannot finish inside the word is dead
        if next_forced as usize > n - pos {
            continue;
        }
        cur.push(l);
        fine_rec(n, params, cur, next_forced, out);
        cur.pop();
    }
}
