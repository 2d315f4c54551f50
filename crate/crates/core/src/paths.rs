//! Dyck paths, the word/path coding and the first-rise transform.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{FineParams, FineWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    U,
    D,
}

/// A balanced path over `U = (+1,+1)` and `D = (+1,-1)` that never goes below the axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DyckPath(Vec<Step>);

fn is_dyck(steps: &[Step]) -> bool {
    let mut h = 0i64;
    for s in steps {
        h += if *s == Step::U { 1 } else { -1 };
        if h < 0 {
            return false;
        }
    }
    h == 0
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if is_dyck(&steps) {
            Ok(DyckPath(steps))
        } else {
            Err(Error::InvalidPath { path: steps_to_string(&steps), reason: "not a Dyck path".into() })
        }
    }

    pub fn empty() -> Self {
        DyckPath(Vec::new())
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn semilength(&self) -> usize {
        self.0.len() / 2
    }

    /// Length of the initial run of `U` steps.
    pub fn first_rise(&self) -> usize {
        self.0.iter().take_while(|&&s| s == Step::U).count()
    }

    /// Heights after each step.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = 0usize;
        self.0
            .iter()
            .map(|s| {
                match s {
                    Step::U => h += 1,
                    Step::D => h -= 1,
                }
                h
            })
            .collect()
    }

    /// Maximal factors touching the axis only at their endpoints.
    pub fn primitive_components(&self) -> Vec<DyckPath> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, h) in self.heights().into_iter().enumerate() {
            if h == 0 {
                out.push(DyckPath(self.0[start..=i].to_vec()));
                start = i + 1;
            }
        }
        out
    }
}

fn steps_to_string(steps: &[Step]) -> String {
    if steps.is_empty() {
        return "e".into();
    }
    steps.iter().map(|s| if *s == Step::U { 'u' } else { 'd' }).collect()
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&steps_to_string(&self.0))
    }
}

impl FromStr for DyckPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(DyckPath::empty());
        }
        let steps = s
            .chars()
            .map(|c| match c {
                'u' | 'U' => Ok(Step::U),
                'd' | 'D' => Ok(Step::D),
                _ => Err(Error::Parse(format!("{s}: bad step {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }
}

impl TryFrom<String> for DyckPath {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DyckPath> for String {
    fn from(p: DyckPath) -> String {
        p.to_string()
    }
}

/// All Dyck paths of semilength `n`, lexicographically with `U < D`.
pub fn enumerate_dyck_paths(n: usize) -> Vec<DyckPath> {
    fn rec(n: usize, up: usize, down: usize, cur: &mut Vec<Step>, out: &mut Vec<DyckPath>) {
        if down == n {
            out.push(DyckPath(cur.clone()));
            return;
        }
        if up < n {
            cur.push(Step::U);
            rec(n, up + 1, down, cur, out);
            cur.pop();
        }
        if down < up {
            cur.push(Step::D);
            rec(n, up, down + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, 0, &mut Vec::with_capacity(2 * n), &mut out);
    out
}

/// Path of any word with `w_1 = 0` and rises of at most one.
pub fn letters_to_path(letters: &[u32]) -> DyckPath {
    let mut steps = Vec::with_capacity(2 * letters.len());
    if let Some((&last, _)) = letters.split_last() {
        steps.push(Step::U);
        for w in letters.windows(2) {
            if w[1] <= w[0] {
                steps.extend(std::iter::repeat(Step::D).take((w[0] - w[1] + 1) as usize));
            }
            steps.push(Step::U);
        }
        steps.extend(std::iter::repeat(Step::D).take(last as usize + 1));
    }
    DyckPath(steps)
}

/// Inverse of [`letters_to_path`].
pub fn path_to_letters(path: &DyckPath) -> Vec<u32> {
    let mut letters: Vec<u32> = Vec::with_capacity(path.semilength());
    let mut downs = 0u32;
    for s in path.steps() {
        match s {
            Step::D => downs += 1,
            Step::U => {
                let next = match letters.last() {
                    None => 0,
                    Some(&prev) if downs == 0 => prev + 1,
                    Some(&prev) => prev + 1 - downs,
                };
                letters.push(next);
                downs = 0;
            }
        }
    }
    letters
}

pub fn word_to_path(word: &FineWord) -> DyckPath {
    letters_to_path(word.letters())
}

/// Reads the word back off a path; `strict` also checks membership for `params`.
pub fn path_to_word(path: &DyckPath, params: FineParams, strict: bool) -> Result<FineWord> {
    let letters = path_to_letters(path);
    if strict {
        FineWord::new(letters, params)
    } else {
        Ok(FineWord::tree_word(letters, params))
    }
}

// For p = 0 the first component is as constrained as the others and takes the
// role of the p-component with an effective p of q.
fn effective_p(params: FineParams) -> usize {
    if params.p() == 0 {
        params.q() as usize
    } else {
        params.p() as usize
    }
}

/// Hoists the forced rises of all components into one leading rise:
/// `c_0 c_1 .. c_k` with `c_0 = U^p v_0 D` and `c_i = U^q v_i` maps to
/// `U^{kq+p} D v_1 .. v_k v_0`, whose first rise is `kq + p`.
pub fn first_rise_transform(path: &DyckPath, params: FineParams) -> Result<DyckPath> {
    let q = params.q() as usize;
    let pe = effective_p(params);
    let comps = path.primitive_components();
    let bad = |reason: String| Error::InvalidPath { path: path.to_string(), reason };
    let (first, rest) = comps.split_first().ok_or_else(|| bad("empty path".into()))?;
    if first.first_rise() < pe {
        return Err(bad(format!("first component rises fewer than {pe} steps")));
    }
    if let Some(c) = rest.iter().find(|c| c.first_rise() < q) {
        return Err(bad(format!("component {c} rises fewer than {q} steps")));
    }
    let k = rest.len();
    let mut steps = vec![Step::U; k * q + pe];
    steps.push(Step::D);
    for c in rest {
        steps.extend_from_slice(&c.steps()[q..]);
    }
    let f = first.steps();
    steps.extend_from_slice(&f[pe..f.len() - 1]);
    Ok(DyckPath(steps))
}

pub fn first_rise_untransform(path: &DyckPath, params: FineParams) -> Result<DyckPath> {
    let q = params.q() as usize;
    let pe = effective_p(params);
    let bad = |reason: String| Error::InvalidPath { path: path.to_string(), reason };
    let r = path.first_rise();
    if r < pe || (r - pe) % q != 0 {
        return Err(bad(format!("first rise {r} is not of the form kq+p")));
    }
    let k = (r - pe) / q;
    let steps = path.steps();
    let heights = path.heights();
    let mut start = r + 1;
    let mut level = r - 1;
    let mut out = Vec::with_capacity(steps.len());
    let mut comps = Vec::with_capacity(k);
    for _ in 0..k {
        level -= q;
        let end = (start..steps.len())
            .find(|&i| heights[i] == level)
            .ok_or_else(|| bad("path ends before a component closes".into()))?;
        comps.push(&steps[start..=end]);
        start = end + 1;
    }
    out.extend(std::iter::repeat(Step::U).take(pe));
    out.extend_from_slice(&steps[start..]);
    out.push(Step::D);
    for c in comps {
        out.extend(std::iter::repeat(Step::U).take(q));
        out.extend_from_slice(c);
    }
    Ok(DyckPath(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::words::enumerate_fine_words;

    fn path(s: &str) -> DyckPath {
        s.parse().unwrap()
    }

    fn fp(p: u32, q: u32) -> FineParams {
        FineParams::new(p, q).unwrap()
    }

    #[test]
    fn coding_examples() {
        let w = |s: &str, p, q| FineWord::parse(s, fp(p, q)).unwrap();
        assert_eq!(word_to_path(&w("011", 0, 2)).to_string(), "uududd");
        assert_eq!(word_to_path(&w("012", 0, 2)).to_string(), "uuuddd");
        assert_eq!(word_to_path(&w("0012", 1, 3)).to_string(), "uduuuddd");
        assert_eq!(path_to_word(&path("uduuuddd"), fp(1, 3), true).unwrap().to_string(), "0012");
        assert!(path_to_word(&path("udud"), fp(0, 2), true).is_err());
        assert_eq!(path_to_word(&path("udud"), fp(0, 2), false).unwrap().letters(), &[0, 0]);
    }

    #[test]
    fn components() {
        let c: Vec<String> = path("UDUUUDDD").primitive_components().iter().map(|c| c.to_string()).collect();
        assert_eq!(c, ["ud", "uuuddd"]);
        assert_eq!(path("uuuddd").primitive_components().len(), 1);
        assert!(DyckPath::empty().primitive_components().is_empty());
    }

    #[test]
    fn parsing() {
        assert!("ud".parse::<DyckPath>().is_ok());
        assert!("du".parse::<DyckPath>().is_err());
        assert!("uud".parse::<DyckPath>().is_err());
        assert!("uxd".parse::<DyckPath>().is_err());
    }

    #[test]
    fn first_rise_examples() {
        let t = first_rise_transform(&path("uduuuddd"), fp(1, 3)).unwrap();
        assert_eq!(t.to_string(), "uuuudddd");
        assert_eq!(t.first_rise(), 4);
        assert_eq!(first_rise_untransform(&t, fp(1, 3)).unwrap(), path("uduuuddd"));
        // single component: U^p D v_p
        let t = first_rise_transform(&path("uudd"), fp(1, 3)).unwrap();
        assert_eq!(t.to_string(), "udud");
        assert!(first_rise_transform(&path("uduudd"), fp(1, 3)).is_err());
        assert!(first_rise_untransform(&path("uudd"), fp(1, 3)).is_err());
    }

    #[test]
    fn transform_separates_the_printed_collision() {
        let a = first_rise_transform(&path("uduuuudddd"), fp(1, 3)).unwrap();
        let b = first_rise_transform(&path("uudduuuddd"), fp(1, 3)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn round_trips_small() {
        for (p, q) in [(0, 2), (1, 3), (2, 3), (1, 2)] {
            for n in 1..=8 {
                for w in enumerate_fine_words(n, fp(p, q), &Limits::default()).unwrap() {
                    let pth = word_to_path(&w);
                    assert_eq!(pth.semilength(), n);
                    assert_eq!(path_to_word(&pth, fp(p, q), true).unwrap(), w);
                    let t = first_rise_transform(&pth, fp(p, q)).unwrap();
                    assert_eq!(first_rise_untransform(&t, fp(p, q)).unwrap(), pth);
                }
            }
        }
    }

    #[test]
    fn catalan_many_paths() {
        let counts: Vec<usize> = (0..=6).map(|n| enumerate_dyck_paths(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 14, 42, 132]);
    }
}
