//! Succession systems with parametric labels and delayed children.
//!
//! Rules are closed-form templates in `t`, written in a small grammar:
//!
//! ```text
//! root=[2]; [T] -> [T],[3],[2]; [t] -> [T],[3..t+1]
//! root=[A,2]; [P] -> [A,2]; [A,t] -> [B,t+1],[A,3..t+1]; [B,t] -> [B,3],[A,3],[P]^t-2
//! ```
//!
//! `@d` delays a child by `d` levels, `^e` repeats it `e` times and `a..b`
//! expands to one child per parameter value.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::words::FineParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelKind {
    Plain,
    T,
    P,
    A,
    B,
}

impl LabelKind {
    pub const ALL: [LabelKind; 5] = [LabelKind::Plain, LabelKind::T, LabelKind::P, LabelKind::A, LabelKind::B];

    pub fn has_param(self) -> bool {
        matches!(self, LabelKind::Plain | LabelKind::A | LabelKind::B)
    }
}

/// A node label: `[T]`, `[P]`, `[t]`, `[A,t]` or `[B,t]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Label {
    kind: LabelKind,
    param: Option<u32>,
}

impl Label {
    pub const T: Label = Label { kind: LabelKind::T, param: None };
    pub const P: Label = Label { kind: LabelKind::P, param: None };

    pub fn plain(t: u32) -> Label {
        Label { kind: LabelKind::Plain, param: Some(t) }
    }

    pub fn a(t: u32) -> Label {
        Label { kind: LabelKind::A, param: Some(t) }
    }

    pub fn b(t: u32) -> Label {
        Label { kind: LabelKind::B, param: Some(t) }
    }

    pub fn new(kind: LabelKind, param: Option<u32>) -> Result<Label> {
        if kind.has_param() != param.is_some() {
            return Err(Error::Parse(format!("label kind {kind:?} with param {param:?}")));
        }
        Ok(Label { kind, param })
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn param(&self) -> Option<u32> {
        self.param
    }

    pub fn with_kind(&self, kind: LabelKind) -> Label {
        Label { kind, param: self.param }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.param) {
            (LabelKind::T, _) => f.write_str("[T]"),
            (LabelKind::P, _) => f.write_str("[P]"),
            (LabelKind::Plain, Some(t)) => write!(f, "[{t}]"),
            (LabelKind::A, Some(t)) => write!(f, "[A,{t}]"),
            (LabelKind::B, Some(t)) => write!(f, "[B,{t}]"),
            (k, None) => write!(f, "[{k:?}]"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        let bad = || Error::Parse(format!("bad label {s:?}"));
        let num = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
        match inner {
            "T" => Ok(Label::T),
            "P" => Ok(Label::P),
            _ => {
                if let Some((k, t)) = inner.split_once(',') {
                    match k.trim() {
                        "A" => Ok(Label::a(num(t)?)),
                        "B" => Ok(Label::b(num(t)?)),
                        _ => Err(bad()),
                    }
                } else {
                    Ok(Label::plain(num(inner)?))
                }
            }
        }
    }
}

impl TryFrom<String> for Label {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.to_string()
    }
}

/// One produced child: its label and how many levels below the parent it sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChildSpec {
    pub label: Label,
    pub delay: u32,
}

impl ChildSpec {
    pub fn new(label: Label, delay: u32) -> Self {
        ChildSpec { label, delay }
    }
}

impl fmt::Display for ChildSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.delay == 1 {
            write!(f, "{}", self.label)
        } else {
            write!(f, "{}@{}", self.label, self.delay)
        }
    }
}

/// `t + offset` or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Expr {
    Const(i64),
    T(i64),
}

impl Expr {
    fn eval(self, t: Option<u32>) -> Result<i64> {
        match self {
            Expr::Const(c) => Ok(c),
            Expr::T(off) => t
                .map(|t| t as i64 + off)
                .ok_or_else(|| Error::Consistency("parameter `t` used in a rule without one".into())),
        }
    }

    fn parse(s: &str) -> Result<Expr> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad expression {s:?}"));
        if let Some(rest) = s.strip_prefix('t') {
            let rest = rest.trim();
            if rest.is_empty() {
                return Ok(Expr::T(0));
            }
            let (sign, num) = rest.split_at(1);
            let v: i64 = num.trim().parse().map_err(|_| bad())?;
            match sign {
                "+" => Ok(Expr::T(v)),
                "-" => Ok(Expr::T(-v)),
                _ => Err(bad()),
            }
        } else {
            s.parse().map(Expr::Const).map_err(|_| bad())
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::T(0) => f.write_str("t"),
            Expr::T(o) if o > 0 => write!(f, "t+{o}"),
            Expr::T(o) => write!(f, "t-{}", -o),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ParamTemplate {
    None,
    One(Expr),
    Range(Expr, Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ChildTemplate {
    kind: LabelKind,
    param: ParamTemplate,
    repeat: Expr,
    delay: u32,
}

impl ChildTemplate {
    fn expand(&self, t: Option<u32>, out: &mut Vec<ChildSpec>) -> Result<()> {
        let reps = self.repeat.eval(t)?.max(0);
        let params: Vec<Option<u32>> = match self.param {
            ParamTemplate::None => vec![None],
            ParamTemplate::One(e) => vec![Some(checked_param(e.eval(t)?)?)],
            ParamTemplate::Range(lo, hi) => {
                let (lo, hi) = (lo.eval(t)?, hi.eval(t)?);
                (lo..=hi).map(|v| checked_param(v).map(Some)).collect::<Result<_>>()?
            }
        };
        for param in params {
            for _ in 0..reps {
                out.push(ChildSpec { label: Label { kind: self.kind, param }, delay: self.delay });
            }
        }
        Ok(())
    }
}

fn checked_param(v: i64) -> Result<u32> {
    u32::try_from(v)
        .ok()
        .filter(|&v| v >= 1)
        .ok_or_else(|| Error::Consistency(format!("rule produced label parameter {v}")))
}

impl fmt::Display for ChildTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let param = match &self.param {
            ParamTemplate::None => String::new(),
            ParamTemplate::One(e) => e.to_string(),
            ParamTemplate::Range(a, b) => format!("{a}..{b}"),
        };
        match self.kind {
            LabelKind::T => f.write_str("[T]")?,
            LabelKind::P => f.write_str("[P]")?,
            LabelKind::Plain => write!(f, "[{param}]")?,
            LabelKind::A => write!(f, "[A,{param}]")?,
            LabelKind::B => write!(f, "[B,{param}]")?,
        }
        if self.repeat != Expr::Const(1) {
            write!(f, "^{}", self.repeat)?;
        }
        if self.delay != 1 {
            write!(f, "@{}", self.delay)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HeadParam {
    None,
    Any,
    Exact(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Clause {
    kind: LabelKind,
    param: HeadParam,
    children: Vec<ChildTemplate>,
}

impl Clause {
    fn head(&self) -> String {
        let p = match self.param {
            HeadParam::None => String::new(),
            HeadParam::Any => "t".into(),
            HeadParam::Exact(v) => v.to_string(),
        };
        match self.kind {
            LabelKind::T => "[T]".into(),
            LabelKind::P => "[P]".into(),
            LabelKind::Plain => format!("[{p}]"),
            LabelKind::A => format!("[A,{p}]"),
            LabelKind::B => format!("[B,{p}]"),
        }
    }
}

/// A root label plus ordered child-production rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessionSystem {
    name: String,
    root: Label,
    clauses: Vec<Clause>,
    canonical: bool,
}

/// Names accepted by [`builtin_system`], besides `d1(p,q)`.
pub const BUILTIN_SYSTEMS: [&str; 11] =
    ["F1", "F2", "F3", "DER", "H1", "H1STAR", "H2", "H3", "H4", "H3IC", "H5"];

fn builtin_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "F1" => "root=[2]; [T] -> [3],[T],[2]; [t] -> [t+1],[T],[3..t]",
        "F2" => "root=[2]; [T] -> [T],[3],[2]; [t] -> [T],[3..t+1]",
        "F3" | "DER" => "root=[2]; [T] -> [T],[2],[3]; [t] -> [T],[3..t+1]",
        "H1" => "root=[T]; [T] -> [T],[3],[3]@2; [t] -> [T],[3..t+1]",
        "H1STAR" | "H3" => "root=[A,2]; [A,t] -> [B,3..t+1],[A,t+1]; [B,t] -> [B,3..t],[A,1],[A,t]",
        "H2" => "root=[A,2]; [A,t] -> [A,t+1],[B,3..t+1]; [B,t] -> [A,t],[B,3..t],[A,1]",
        "H4" => "root=[A,2]; [A,t] -> [B,3..t+1],[A,t+1]; [B,t] -> [B,3..t],[A,t],[A,1]",
        "H3IC" => "root=[A,2]; [P] -> [A,2]; [A,t] -> [B,t+1],[A,3..t+1]; [B,t] -> [B,3],[A,3],[P]^t-2",
        "H5" => "root=[A,2]; [P] -> [A,2]; [A,t] -> [A,t+1],[B,t+1],[A,3..t]; [B,t] -> [A,3],[B,3],[P]^t-2",
        _ => return None,
    })
}

/// Built-in systems by name (case-insensitive), or `d1(p,q)`.
pub fn builtin_system(name: &str) -> Result<SuccessionSystem> {
    let key = name.trim().to_ascii_uppercase();
    if let Some(args) = key.strip_prefix("D1(").and_then(|r| r.strip_suffix(')')) {
        let (p, q) = args.split_once(',').ok_or_else(|| Error::UnknownName(name.into()))?;
        let p = p.trim().parse().map_err(|_| Error::UnknownName(name.into()))?;
        let q = q.trim().parse().map_err(|_| Error::UnknownName(name.into()))?;
        return make_d1(FineParams::new(p, q)?);
    }
    let text = builtin_text(&key).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    let mut sys: SuccessionSystem = text.parse().expect("built-in systems parse");
    sys.name = key;
    Ok(sys)
}

/// The system generating `(p, q)` words:
/// `root=[P]; [T] -> [T],[3],[q]@(q-1); [t] -> [T],[3..t+1]` with `P = p`, or `q` when `p = 0`.
/// Needs `q >= 2` so that the jump child lies strictly below its parent.
pub fn make_d1(params: FineParams) -> Result<SuccessionSystem> {
    let (p, q) = (params.p(), params.q());
    if q < 2 {
        return Err(Error::InvalidParams { p, q });
    }
    let root = if p >= 1 { p } else { q };
    let text = format!("root=[{root}]; [T] -> [T],[3],[{q}]@{}; [t] -> [T],[3..t+1]", q - 1);
    let mut sys: SuccessionSystem = text.parse()?;
    sys.name = format!("d1({p},{q})");
    Ok(sys)
}

impl SuccessionSystem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn root(&self) -> Label {
        self.root
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Ordered children of a node labelled `label`.
    pub fn children(&self, label: &Label) -> Result<Vec<ChildSpec>> {
        let exact = self
            .clauses
            .iter()
            .find(|c| c.kind == label.kind && matches!(c.param, HeadParam::Exact(v) if Some(v) == label.param));
        let clause = exact
            .or_else(|| {
                self.clauses
                    .iter()
                    .find(|c| c.kind == label.kind && !matches!(c.param, HeadParam::Exact(_)))
            })
            .ok_or_else(|| Error::Consistency(format!("{} has no rule for {label}", self.name)))?;
        let mut out = Vec::new();
        for tpl in &clause.children {
            tpl.expand(label.param, &mut out)?;
        }
        if self.canonical {
            out.sort_by_key(|c| (c.label, c.delay));
        }
        Ok(out)
    }

    /// Labels reachable from the root within `levels` levels.
    pub fn reachable_labels(&self, levels: usize) -> Result<BTreeSet<Label>> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([(self.root, 1usize)]);
        seen.insert(self.root);
        while let Some((label, level)) = queue.pop_front() {
            for c in self.children(&label)? {
                let lvl = level + c.delay as usize;
                if lvl <= levels && seen.insert(c.label) {
                    queue.push_back((c.label, lvl));
                }
            }
        }
        Ok(seen)
    }

    fn kinds(&self, levels: usize) -> Result<BTreeSet<LabelKind>> {
        Ok(self.reachable_labels(levels)?.iter().map(Label::kind).collect())
    }
}

impl fmt::Display for SuccessionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root={}", self.root)?;
        for c in &self.clauses {
            let kids: Vec<String> = c.children.iter().map(|k| k.to_string()).collect();
            write!(f, "; {} -> {}", c.head(), kids.join(","))?;
        }
        Ok(())
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_kind_and_rest(inner: &str) -> (LabelKind, &str) {
    let inner = inner.trim();
    if inner == "T" {
        (LabelKind::T, "")
    } else if inner == "P" {
        (LabelKind::P, "")
    } else if let Some(r) = inner.strip_prefix("A,") {
        (LabelKind::A, r.trim())
    } else if let Some(r) = inner.strip_prefix("B,") {
        (LabelKind::B, r.trim())
    } else {
        (LabelKind::Plain, inner)
    }
}

fn parse_head(s: &str) -> Result<(LabelKind, HeadParam)> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad rule head {s:?}")))?;
    let (kind, rest) = parse_kind_and_rest(inner);
    let param = if !kind.has_param() {
        HeadParam::None
    } else if rest == "t" {
        HeadParam::Any
    } else {
        HeadParam::Exact(rest.parse().map_err(|_| Error::Parse(format!("bad rule head {s:?}")))?)
    };
    Ok((kind, param))
}

fn parse_child(s: &str) -> Result<ChildTemplate> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad child {s:?}"));
    let close = s.find(']').ok_or_else(bad)?;
    let inner = s.strip_prefix('[').ok_or_else(bad)?;
    let inner = &inner[..close - 1];
    let mut suffix = &s[close + 1..];
    let (kind, rest) = parse_kind_and_rest(inner);
    let param = if !kind.has_param() {
        ParamTemplate::None
    } else if let Some((a, b)) = rest.split_once("..") {
        ParamTemplate::Range(Expr::parse(a)?, Expr::parse(b)?)
    } else {
        ParamTemplate::One(Expr::parse(rest)?)
    };
    let mut delay = 1;
    if let Some((before, d)) = suffix.split_once('@') {
        delay = d.trim().parse().map_err(|_| bad())?;
        if delay == 0 {
            return Err(Error::Parse(format!("delay must be at least 1 in {s:?}")));
        }
        suffix = before;
    }
    let suffix = suffix.trim();
    let repeat = match suffix.strip_prefix('^') {
        Some(e) => Expr::parse(e)?,
        None if suffix.is_empty() => Expr::Const(1),
        None => return Err(bad()),
    };
    Ok(ChildTemplate { kind, param, repeat, delay })
}

impl FromStr for SuccessionSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut root = None;
        let mut clauses = Vec::new();
        for stmt in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some(r) = stmt.strip_prefix("root") {
                let r = r.trim_start().strip_prefix('=').ok_or_else(|| Error::Parse(format!("bad root {stmt:?}")))?;
                root = Some(r.trim().parse::<Label>()?);
                continue;
            }
            let (head, body) = stmt.split_once("->").ok_or_else(|| Error::Parse(format!("missing `->` in {stmt:?}")))?;
            let (kind, param) = parse_head(head)?;
            let children = split_top_level(body, ',')
                .into_iter()
                .filter(|c| !c.trim().is_empty())
                .map(parse_child)
                .collect::<Result<Vec<_>>>()?;
            clauses.push(Clause { kind, param, children });
        }
        let root = root.ok_or_else(|| Error::Parse("missing root".into()))?;
        Ok(SuccessionSystem { name: "custom".into(), root, clauses, canonical: false })
    }
}

/// Sorts every rule's children by `(label, delay)`; delay-1 children are ordinary already.
pub fn normalize(sys: &SuccessionSystem) -> SuccessionSystem {
    SuccessionSystem { canonical: true, ..sys.clone() }
}

/// Per-level node counts and label multisets; level 1 is the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelProfile {
    pub counts: Vec<BigUint>,
    pub label_multisets: Vec<BTreeMap<Label, BigUint>>,
}

impl LevelProfile {
    pub fn counts_u64(&self) -> Vec<u64> {
        self.counts.iter().map(|c| u64::try_from(c).unwrap_or(u64::MAX)).collect()
    }
}

/// Breadth-first expansion with a pending queue for delayed children.
pub fn expand(sys: &SuccessionSystem, depth: usize) -> Result<LevelProfile> {
    let mut pending: BTreeMap<usize, BTreeMap<Label, BigUint>> = BTreeMap::new();
    pending.entry(1).or_default().insert(sys.root, BigUint::one());
    let mut counts = Vec::with_capacity(depth);
    let mut multisets = Vec::with_capacity(depth);
    let mut rules: BTreeMap<Label, Vec<ChildSpec>> = BTreeMap::new();
    for level in 1..=depth {
        let here = pending.remove(&level).unwrap_or_default();
        for (label, n) in &here {
            if !rules.contains_key(label) {
                rules.insert(*label, sys.children(label)?);
            }
            for c in &rules[label] {
                let target = level + c.delay as usize;
                if target <= depth {
                    *pending.entry(target).or_default().entry(c.label).or_insert_with(BigUint::zero) += n;
                }
            }
        }
        counts.push(here.values().sum());
        multisets.push(here);
    }
    Ok(LevelProfile { counts, label_multisets: multisets })
}

/// Counts of `a` at level `l + shift_a` equal those of `b` at `l + shift_b` for `l = 1..=depth`.
pub fn level_equiv(a: &SuccessionSystem, b: &SuccessionSystem, shift_a: usize, shift_b: usize, depth: usize) -> Result<bool> {
    let ea = expand(a, depth + shift_a)?;
    let eb = expand(b, depth + shift_b)?;
    Ok((0..depth).all(|l| ea.counts[l + shift_a] == eb.counts[l + shift_b]))
}

/// A label-kind correspondence (parameters kept) between two systems, after
/// descending each root `shift` times through forced single children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub kind_map: Vec<(LabelKind, LabelKind)>,
    pub shift_a: usize,
    pub shift_b: usize,
}

impl Isomorphism {
    pub fn map_kind(&self, k: LabelKind) -> Option<LabelKind> {
        self.kind_map.iter().find(|(a, _)| *a == k).map(|&(_, b)| b)
    }

    pub fn unmap_kind(&self, k: LabelKind) -> Option<LabelKind> {
        self.kind_map.iter().find(|(_, b)| *b == k).map(|&(a, _)| a)
    }

    pub fn map_label(&self, l: &Label) -> Option<Label> {
        self.map_kind(l.kind).map(|k| l.with_kind(k))
    }

    pub fn unmap_label(&self, l: &Label) -> Option<Label> {
        self.unmap_kind(l.kind).map(|k| l.with_kind(k))
    }

    pub fn inverse(&self) -> Isomorphism {
        Isomorphism {
            kind_map: self.kind_map.iter().map(|&(a, b)| (b, a)).collect(),
            shift_a: self.shift_b,
            shift_b: self.shift_a,
        }
    }
}

/// Labels along the chain of forced single delay-1 children, starting at the root.
pub fn forced_chain(sys: &SuccessionSystem, max: usize) -> Result<Vec<Label>> {
    let mut chain = vec![sys.root];
    while chain.len() <= max {
        let kids = sys.children(chain.last().unwrap())?;
        match kids.as_slice() {
            [only] if only.delay == 1 => chain.push(only.label),
            _ => break,
        }
    }
    Ok(chain)
}

const ISO_LEVELS: usize = 12;
const MAX_ROOT_SHIFT: usize = 2;

fn sorted_children(sys: &SuccessionSystem, l: &Label) -> Result<Vec<ChildSpec>> {
    let mut v = sys.children(l)?;
    v.sort();
    Ok(v)
}

fn permutations(items: &[LabelKind]) -> Vec<Vec<LabelKind>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

// Checks the map on every label reachable from `ra` within ISO_LEVELS levels.
fn check_map(a: &SuccessionSystem, b: &SuccessionSystem, ra: Label, rb: Label, iso: &Isomorphism) -> Result<bool> {
    if iso.map_label(&ra) != Some(rb) {
        return Ok(false);
    }
    let mut seen = BTreeSet::from([ra]);
    let mut queue = VecDeque::from([(ra, 1usize)]);
    while let Some((la, level)) = queue.pop_front() {
        let Some(lb) = iso.map_label(&la) else { return Ok(false) };
        let mut ka: Vec<ChildSpec> = Vec::new();
        for c in a.children(&la)? {
            let Some(l) = iso.map_label(&c.label) else { return Ok(false) };
            ka.push(ChildSpec::new(l, c.delay));
            let lvl = level + c.delay as usize;
            if lvl <= ISO_LEVELS && seen.insert(c.label) {
                queue.push_back((c.label, lvl));
            }
        }
        ka.sort();
        if ka != sorted_children(b, &lb)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for a kind bijection under which both systems produce the same
/// child multisets (delays included) on all reachable labels.
pub fn rule_isomorphic(a: &SuccessionSystem, b: &SuccessionSystem) -> Result<Option<Isomorphism>> {
    let chain_a = forced_chain(a, MAX_ROOT_SHIFT)?;
    let chain_b = forced_chain(b, MAX_ROOT_SHIFT)?;
    let mut shifts: Vec<(usize, usize)> = (0..chain_a.len())
        .flat_map(|sa| (0..chain_b.len()).map(move |sb| (sa, sb)))
        .collect();
    shifts.sort_by_key(|&(sa, sb)| (sa + sb, sa));
    for (sa, sb) in shifts {
        let ka: Vec<LabelKind> = a.kinds(ISO_LEVELS)?.into_iter().collect();
        let kb: Vec<LabelKind> = b.kinds(ISO_LEVELS)?.into_iter().collect();
        if ka.len() != kb.len() {
            continue;
        }
        for perm in permutations(&kb) {
            if ka.iter().zip(&perm).any(|(x, y)| x.has_param() != y.has_param()) {
                continue;
            }
            let iso = Isomorphism { kind_map: ka.iter().copied().zip(perm).collect(), shift_a: sa, shift_b: sb };
            if check_map(a, b, chain_a[sa], chain_b[sb], &iso)? {
                return Ok(Some(iso));
            }
        }
    }
    Ok(None)
}

/// A node of an explicitly expanded label tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelNode {
    pub id: usize,
    pub level: usize,
    pub label: Label,
    pub parent: Option<usize>,
    pub delay: u32,
}

/// Every node down to `depth`, parents before children, siblings in rule order.
pub fn expand_tree(sys: &SuccessionSystem, depth: usize, limits: &Limits) -> Result<Vec<LabelNode>> {
    Limits::check("tree depth", depth, limits.depth)?;
    let mut nodes = vec![LabelNode { id: 0, level: 1, label: sys.root, parent: None, delay: 0 }];
    let mut i = 0;
    while i < nodes.len() {
        let (level, label) = (nodes[i].level, nodes[i].label);
        for c in sys.children(&label)? {
            let lvl = level + c.delay as usize;
            if lvl <= depth {
                let id = nodes.len();
                nodes.push(LabelNode { id, level: lvl, label: c.label, parent: Some(i), delay: c.delay });
            }
        }
        i += 1;
    }
    Ok(nodes)
}
