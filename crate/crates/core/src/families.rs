//! Object-level generating trees: pattern-avoiding permutations grown by
//! inserting the maximum, 321-avoiding derangements, and generalized Fine words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::patterns::PatternSet;
use crate::perm::{enumerate_avoiders, enumerate_derangements_avoiding_321, Permutation};
use crate::succession::{builtin_system, expand, make_d1, ChildSpec, Label, SuccessionSystem};
use crate::words::{enumerate_fine_words, validate_fine_word, FineParams, FineWord};

/// Sites `1..=n+1` where inserting `n+1` keeps `pi` inside the class.
pub fn active_sites(pi: &Permutation, set: &PatternSet) -> Result<Vec<usize>> {
    if !pi.avoids_all(set) {
        return Err(Error::NotInFamily { family: set.to_string(), object: pi.to_string() });
    }
    Ok(sites_unchecked(pi, set))
}

fn sites_unchecked(pi: &Permutation, set: &PatternSet) -> Vec<usize> {
    (1..=pi.len() + 1)
        .filter(|&s| pi.insert_max_at(s).map(|x| x.avoids_all(set)).unwrap_or(false))
        .collect()
}

/// Splices `n+1` in front of position `site`.
pub fn insert_at(pi: &Permutation, site: usize) -> Result<Permutation> {
    pi.insert_max_at(site)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    Pattern(PatternSet),
    Derangement,
    Word(FineParams),
}

/// A node of an object-level tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeObject {
    Perm(Permutation),
    Word(FineWord),
}

impl TreeObject {
    pub fn as_perm(&self) -> Option<&Permutation> {
        match self {
            TreeObject::Perm(p) => Some(p),
            TreeObject::Word(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&FineWord> {
        match self {
            TreeObject::Word(w) => Some(w),
            TreeObject::Perm(_) => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TreeObject::Perm(p) => p.len(),
            TreeObject::Word(w) => w.len(),
        }
    }
}

impl fmt::Display for TreeObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeObject::Perm(p) => p.fmt(f),
            TreeObject::Word(w) => w.fmt(f),
        }
    }
}

impl Serialize for TreeObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeChild {
    pub object: TreeObject,
    pub label: Label,
    pub delay: u32,
}

/// A concrete family with its labeler, tree construction and claimed system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    name: String,
    kind: FamilyKind,
    system: SuccessionSystem,
}

/// Family names accepted by [`FamilySpec::builtin`], besides `WORD(p,q)`.
pub const BUILTIN_FAMILIES: [&str; 11] =
    ["F1", "F2", "F3", "DER", "H1", "H1STAR", "H2", "H3", "H4", "H3IC", "H5"];

impl FamilySpec {
    /// `F1`..`H5`, `DER`, or `WORD(p,q)`; case-insensitive.
    pub fn builtin(name: &str) -> Result<Self> {
        let key = name.trim().to_ascii_uppercase();
        if let Some(args) = key.strip_prefix("WORD(").and_then(|r| r.strip_suffix(')')) {
            let (p, q) = args.split_once(',').ok_or_else(|| Error::UnknownName(name.into()))?;
            let p = p.trim().parse().map_err(|_| Error::UnknownName(name.into()))?;
            let q = q.trim().parse().map_err(|_| Error::UnknownName(name.into()))?;
            return FamilySpec::word(FineParams::new(p, q)?);
        }
        if key == "DER" {
            return Ok(FamilySpec { name: key, kind: FamilyKind::Derangement, system: builtin_system("DER")? });
        }
        let set = PatternSet::builtin(&key)?;
        Ok(FamilySpec { name: key.clone(), kind: FamilyKind::Pattern(set), system: builtin_system(&key)? })
    }

    pub fn word(params: FineParams) -> Result<Self> {
        Ok(FamilySpec {
            name: format!("WORD({},{})", params.p(), params.q()),
            kind: FamilyKind::Word(params),
            system: make_d1(params)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn system(&self) -> &SuccessionSystem {
        &self.system
    }

    pub fn pattern_set(&self) -> Option<&PatternSet> {
        match &self.kind {
            FamilyKind::Pattern(s) => Some(s),
            _ => None,
        }
    }

    /// Size of the objects at tree level `level` (the root is level 1).
    /// For `p = 0` words this is the length of the bare tree word.
    pub fn object_size(&self, level: usize) -> usize {
        match &self.kind {
            FamilyKind::Pattern(_) => level,
            FamilyKind::Derangement => level + 1,
            FamilyKind::Word(fp) if fp.p() == 0 => level - 1,
            FamilyKind::Word(fp) => level + fp.p() as usize - 1,
        }
    }

    pub fn level_of(&self, obj: &TreeObject) -> usize {
        let n = obj.size();
        match &self.kind {
            FamilyKind::Pattern(_) => n,
            FamilyKind::Derangement => n - 1,
            FamilyKind::Word(fp) if fp.p() == 0 => n + 1,
            FamilyKind::Word(fp) => n + 1 - fp.p() as usize,
        }
    }

    pub fn root(&self) -> TreeObject {
        match &self.kind {
            FamilyKind::Pattern(_) => TreeObject::Perm(Permutation::identity(1)),
            FamilyKind::Derangement => TreeObject::Perm("21".parse().expect("literal")),
            FamilyKind::Word(fp) => TreeObject::Word(FineWord::tree_word((0..fp.p()).collect(), *fp)),
        }
    }

    /// Reads an object in this family's text form; membership is checked.
    pub fn parse_object(&self, s: &str) -> Result<TreeObject> {
        let obj = match &self.kind {
            FamilyKind::Word(fp) => TreeObject::Word(FineWord::parse_tree_word(s, *fp)?),
            _ => TreeObject::Perm(s.parse()?),
        };
        self.require(&obj)?;
        Ok(obj)
    }

    pub fn contains(&self, obj: &TreeObject) -> bool {
        match (&self.kind, obj) {
            (FamilyKind::Pattern(set), TreeObject::Perm(p)) => !p.is_empty() && p.avoids_all(set),
            (FamilyKind::Derangement, TreeObject::Perm(p)) => {
                p.len() >= 2 && p.is_derangement() && !p.contains(&Permutation::from_vec_unchecked(vec![3, 2, 1]))
            }
            (FamilyKind::Word(fp), TreeObject::Word(w)) => {
                w.params() == *fp
                    && if fp.p() == 0 {
                        validate_fine_word(&normalized_letters(w.letters(), fp.q()), *fp)
                    } else {
                        validate_fine_word(w.letters(), *fp)
                    }
            }
            _ => false,
        }
    }

    fn require(&self, obj: &TreeObject) -> Result<()> {
        if self.contains(obj) {
            Ok(())
        } else {
            Err(Error::NotInFamily { family: self.name.clone(), object: obj.to_string() })
        }
    }

    pub fn is_root(&self, obj: &TreeObject) -> bool {
        *obj == self.root()
    }

    /// The label a node carries in this family's tree.
    pub fn label_of(&self, obj: &TreeObject) -> Result<Label> {
        self.require(obj)?;
        if self.is_root(obj) {
            return Ok(self.system.root());
        }
        Ok(match (&self.kind, obj) {
            (FamilyKind::Pattern(set), TreeObject::Perm(p)) => pattern_label(&self.name, p, set),
            (FamilyKind::Derangement, TreeObject::Perm(p)) => der_label(p),
            (FamilyKind::Word(fp), TreeObject::Word(w)) => word_label(w.letters(), *fp),
            _ => unreachable!("membership checked"),
        })
    }

    /// Children in construction order, each with its label and level delay.
    pub fn children_of(&self, obj: &TreeObject) -> Result<Vec<TreeChild>> {
        let label = self.label_of(obj)?;
        match (&self.kind, obj) {
            (FamilyKind::Pattern(set), TreeObject::Perm(p)) => self.pattern_children(p, label, set),
            (FamilyKind::Derangement, TreeObject::Perm(p)) => Ok(der_children(p, label)),
            (FamilyKind::Word(fp), TreeObject::Word(w)) => Ok(word_children(w, label, *fp)),
            _ => unreachable!("membership checked"),
        }
    }

    fn pattern_children(&self, p: &Permutation, label: Label, set: &PatternSet) -> Result<Vec<TreeChild>> {
        let perm_child = |x: Permutation, delay| TreeChild {
            label: pattern_label(&self.name, &x, set),
            object: TreeObject::Perm(x),
            delay,
        };
        if self.name == "H1" && label == Label::T {
            let first = p.insert_max_at(1)?;
            let jump = first.insert_max_at(3)?;
            return Ok(vec![perm_child(first, 1), perm_child(p.insert_max_at(2)?, 1), perm_child(jump, 2)]);
        }
        sites_unchecked(p, set)
            .into_iter()
            .map(|s| Ok(perm_child(p.insert_max_at(s)?, 1)))
            .collect()
    }

    /// The unique parent and its label.
    pub fn father_of(&self, obj: &TreeObject) -> Result<(TreeObject, Label)> {
        self.require(obj)?;
        if self.is_root(obj) {
            return Err(Error::RootHasNoFather(self.name.clone()));
        }
        let father = match (&self.kind, obj) {
            (FamilyKind::Pattern(_), TreeObject::Perm(p)) => {
                let v = p.values();
                let n = v.len() as u32;
                if self.name == "H1" && n >= 3 && v[0] == n - 1 && v[2] == n {
                    TreeObject::Perm(p.remove_max().remove_max())
                } else {
                    TreeObject::Perm(p.remove_max())
                }
            }
            (FamilyKind::Derangement, TreeObject::Perm(p)) => TreeObject::Perm(der_father(p)),
            (FamilyKind::Word(fp), TreeObject::Word(w)) => {
                TreeObject::Word(FineWord::tree_word(word_father_letters(w.letters(), *fp), *fp))
            }
            _ => unreachable!("membership checked"),
        };
        let label = self.label_of(&father)?;
        Ok((father, label))
    }

    /// Brute-force listing of the objects at `level`, sorted.
    pub fn oracle_level(&self, level: usize, limits: &Limits) -> Result<Vec<TreeObject>> {
        let n = self.object_size(level);
        let mut out: Vec<TreeObject> = match &self.kind {
            FamilyKind::Pattern(set) => enumerate_avoiders(n, set, limits)?.into_iter().map(TreeObject::Perm).collect(),
            FamilyKind::Derangement => {
                enumerate_derangements_avoiding_321(n, limits)?.into_iter().map(TreeObject::Perm).collect()
            }
            FamilyKind::Word(fp) if fp.p() == 0 => {
                let q = fp.q() as usize;
                enumerate_fine_words(n + q, *fp, limits)?
                    .into_iter()
                    .map(|w| TreeObject::Word(FineWord::tree_word(w.letters()[q..].to_vec(), *fp)))
                    .collect()
            }
            FamilyKind::Word(fp) => enumerate_fine_words(n, *fp, limits)?
                .into_iter()
                .map(|w| TreeObject::Word(FineWord::tree_word(w.into_letters(), *fp)))
                .collect(),
        };
        out.sort();
        Ok(out)
    }

    /// How boundary cases of the labeling are resolved.
    pub fn labeling_notes(&self) -> Vec<String> {
        let s: &[&str] = match self.name.as_str() {
            "F1" => &["[T] iff pi(2) = n"],
            "F2" | "F3" | "H1" => &["[T] iff pi(1) = n"],
            "H1STAR" | "H3" => &["[A,t] iff i < j, else [B,t]"],
            "H2" => &["[A,t] iff j = 1 or 1 < i < j, else [B,t]"],
            "H4" => &["[A,t] iff i < j or t = 2, else [B,t]"],
            "H3IC" => &["[P] iff i = 1 and j > 2", "[B,t] iff j = 1 and t != 2", "[A,t] otherwise"],
            "H5" => &["[B,t] iff j = 2", "[P] iff 1 < i < j", "[A,t] otherwise"],
            "DER" => &["[T] iff pi(n-1) = n and pi(n) != n-1, else [n+1-pos(n)]", "middle insertions at positions i+1..n-1"],
            _ => &["[q] after a completed forced ascent, [T] iff the last letter is 1, else [last+1]"],
        };
        let mut v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
        if matches!(self.kind, FamilyKind::Pattern(_)) {
            v.push("i = pos(n-1), j = pos(n), t = number of active sites; root label taken from the system".into());
        }
        v
    }
}

fn pattern_label(name: &str, p: &Permutation, set: &PatternSet) -> Label {
    let n = p.len() as u32;
    let t = sites_unchecked(p, set).len() as u32;
    let v = p.values();
    let i = p.position_of(n.saturating_sub(1)).unwrap_or(0);
    let j = p.position_of(n).unwrap_or(0);
    match name {
        "F1" => if n >= 2 && v[1] == n { Label::T } else { Label::plain(t) },
        "F2" | "F3" | "H1" => if n >= 2 && v[0] == n { Label::T } else { Label::plain(t) },
        "H1STAR" | "H3" => if i < j { Label::a(t) } else { Label::b(t) },
        "H2" => if j == 1 || (1 < i && i < j) { Label::a(t) } else { Label::b(t) },
        "H4" => if i < j || t == 2 { Label::a(t) } else { Label::b(t) },
        "H3IC" => {
            if i == 1 && j > 2 {
                Label::P
            } else if j == 1 && t != 2 {
                Label::b(t)
            } else {
                Label::a(t)
            }
        }
        "H5" => {
            if j == 2 {
                Label::b(t)
            } else if 1 < i && i < j {
                Label::P
            } else {
                Label::a(t)
            }
        }
        _ => Label::plain(t),
    }
}

fn der_label(p: &Permutation) -> Label {
    let v = p.values();
    let n = v.len();
    let nn = n as u32;
    if v[n - 2] == nn && v[n - 1] != nn - 1 {
        Label::T
    } else {
        Label::plain(nn + 1 - p.position_of(nn).expect("max present") as u32)
    }
}

fn der_children(p: &Permutation, label: Label) -> Vec<TreeChild> {
    let v = p.values();
    let n = v.len();
    let nn = n as u32;
    let perm = |x: Vec<u32>| TreeObject::Perm(Permutation::from_vec_unchecked(x));
    let child = |x: Vec<u32>, label| TreeChild { object: perm(x), label, delay: 1 };
    let insert = |site: usize| {
        let mut x = v.to_vec();
        x.insert(site - 1, nn + 1);
        x
    };
    let mut out = vec![child(insert(n), Label::T)];
    if label == Label::T {
        let head = &v[..n - 2];
        let mut b = head.to_vec();
        b.extend([v[n - 1], nn + 1, nn]);
        out.push(child(b, Label::plain(2)));
        let mut c = head.to_vec();
        c.extend([nn + 1, v[n - 1], nn]);
        out.push(child(c, Label::plain(3)));
    } else {
        let i = p.position_of(nn).expect("max present");
        for k in i + 1..n {
            out.push(child(insert(k), Label::plain((n + 2 - k) as u32)));
        }
        let mut x: Vec<u32> = v.iter().map(|&a| if a == nn { nn + 1 } else { a }).collect();
        x.push(nn);
        out.push(child(x, Label::plain(label.param().unwrap_or(0) + 1)));
    }
    out
}

fn der_father(p: &Permutation) -> Permutation {
    let v = p.values();
    let n = v.len();
    let nn = n as u32;
    if v[n - 2] == nn && v[n - 1] == nn - 1 {
        let mut x = v[..n - 3].to_vec();
        x.extend([nn - 1, v[n - 3]]);
        Permutation::from_vec_unchecked(x)
    } else if v[n - 1] == nn - 1 {
        let x = v[..n - 1].iter().map(|&a| if a == nn { nn - 1 } else { a }).collect();
        Permutation::from_vec_unchecked(x)
    } else {
        p.remove_max()
    }
}

/// `0,1,..,q-1` followed by the tree word.
pub(crate) fn normalized_letters(tree: &[u32], q: u32) -> Vec<u32> {
    (0..q).chain(tree.iter().copied()).collect()
}

// Whether the word ends with a constrained zero followed by its full ascent 1..q-1.
fn ends_with_jump(w: &[u32], fp: FineParams) -> bool {
    let q = fp.q() as usize;
    let n = w.len();
    if n < q {
        return false;
    }
    let z = n - q;
    let constrained = fp.p() == 0 || z > 0;
    constrained && (0..q).all(|j| w[z + j] == j as u32)
}

fn word_label(w: &[u32], fp: FineParams) -> Label {
    if ends_with_jump(w, fp) {
        Label::plain(fp.q())
    } else if w.last() == Some(&1) {
        Label::T
    } else {
        Label::plain(w.last().map_or(0, |&l| l) + 1)
    }
}

fn word_children(w: &FineWord, label: Label, fp: FineParams) -> Vec<TreeChild> {
    let letters = w.letters();
    let make = |x: Vec<u32>, delay| {
        let label = word_label(&x, fp);
        TreeChild { object: TreeObject::Word(FineWord::tree_word(x, fp)), label, delay }
    };
    let append = |a: u32| {
        let mut x = letters.to_vec();
        x.push(a);
        x
    };
    if label == Label::T {
        let mut jump = letters[..letters.len() - 1].to_vec();
        jump.extend(0..fp.q());
        vec![make(append(1), 1), make(append(2), 1), make(jump, fp.q() - 1)]
    } else {
        (1..=label.param().unwrap_or(0)).map(|a| make(append(a), 1)).collect()
    }
}

fn word_father_letters(w: &[u32], fp: FineParams) -> Vec<u32> {
    if ends_with_jump(w, fp) {
        let mut x = w[..w.len() - fp.q() as usize].to_vec();
        x.push(1);
        x
    } else {
        w[..w.len() - 1].to_vec()
    }
}

/// Outcome of one property over all nodes it applies to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub object_size: usize,
    pub system_count: String,
    pub oracle_count: usize,
    pub tree_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub level: usize,
    pub check: String,
    pub object: String,
    pub detail: String,
}

/// Result of checking that a family's tree realizes its succession system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub system: String,
    pub depth: usize,
    pub levels: Vec<LevelReport>,
    pub properties: Vec<PropertyResult>,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub labeling: Vec<String>,
}

impl FamilyReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0 && self.properties.iter().all(|p| p.failures == 0)
    }
}

const MAX_LISTED_VIOLATIONS: usize = 20;

struct Collector {
    count: usize,
    list: Vec<Violation>,
}

impl Collector {
    fn push(&mut self, level: usize, check: &str, object: impl ToString, detail: String) {
        self.count += 1;
        if self.list.len() < MAX_LISTED_VIOLATIONS {
            self.list.push(Violation { level, check: check.into(), object: object.to_string(), detail });
        }
    }
}

type Property = (&'static str, fn(&FamilySpec, &TreeObject, Label) -> Option<bool>);

fn properties_for(fam: &FamilySpec) -> Vec<Property> {
    fn perm_sites(fam: &FamilySpec, obj: &TreeObject) -> (usize, Vec<usize>) {
        let p = obj.as_perm().expect("pattern family");
        (p.len(), sites_unchecked(p, fam.pattern_set().expect("pattern family")))
    }
    fn param_is_site_count(fam: &FamilySpec, obj: &TreeObject, l: Label) -> Option<bool> {
        let t = l.param()?;
        Some(perm_sites(fam, obj).1.len() == t as usize)
    }
    fn prefix_sites(fam: &FamilySpec, obj: &TreeObject, _: Label) -> Option<bool> {
        let (_, s) = perm_sites(fam, obj);
        Some(s.iter().copied().eq(1..=s.len()))
    }
    fn t_first_three(fam: &FamilySpec, obj: &TreeObject, l: Label) -> Option<bool> {
        (l == Label::T).then(|| perm_sites(fam, obj).1 == [1, 2, 3])
    }
    fn ends_active(fam: &FamilySpec, obj: &TreeObject, _: Label) -> Option<bool> {
        let (n, s) = perm_sites(fam, obj);
        Some(s.first() == Some(&1) && s.last() == Some(&(n + 1)))
    }
    fn f3_t_sites(fam: &FamilySpec, obj: &TreeObject, l: Label) -> Option<bool> {
        (l == Label::T).then(|| {
            let (n, s) = perm_sites(fam, obj);
            s == [1, 2, n + 1]
        })
    }
    fn der_member(_: &FamilySpec, obj: &TreeObject, _: Label) -> Option<bool> {
        let p = obj.as_perm()?;
        Some(p.is_derangement() && !p.contains(&Permutation::from_vec_unchecked(vec![3, 2, 1])))
    }
    fn der_param(_: &FamilySpec, obj: &TreeObject, l: Label) -> Option<bool> {
        let t = l.param()?;
        let p = obj.as_perm()?;
        let n = p.len();
        Some(t as usize == n + 1 - p.position_of(n as u32)?)
    }
    let mut v: Vec<Property> = Vec::new();
    match fam.kind {
        FamilyKind::Pattern(_) => {
            v.push(("label parameter = active sites", param_is_site_count));
            match fam.name.as_str() {
                "F1" | "F2" => {
                    v.push(("active sites form a prefix", prefix_sites));
                    v.push(("[T] nodes have sites 1,2,3", t_first_three));
                }
                "H2" | "H3IC" | "H5" => v.push(("active sites form a prefix", prefix_sites)),
                "F3" => {
                    v.push(("first and last sites active", ends_active));
                    v.push(("[T] nodes have sites 1,2,n+1", f3_t_sites));
                }
                _ => {}
            }
        }
        FamilyKind::Derangement => {
            v.push(("321-avoiding derangement", der_member));
            v.push(("[t] = n+1-pos(n)", der_param));
        }
        FamilyKind::Word(_) => {}
    }
    v
}

fn sorted_specs(mut v: Vec<ChildSpec>) -> Vec<ChildSpec> {
    v.sort();
    v
}

/// Grows the tree to `depth` and checks rules, labels, completeness,
/// uniqueness, father/child duality and the family's site properties.
pub fn verify_family(fam: &FamilySpec, depth: usize, limits: &Limits) -> Result<FamilyReport> {
    Limits::check("tree depth", depth, limits.depth)?;
    let profile = expand(&fam.system, depth)?;
    let props = properties_for(fam);
    let mut prop_results: Vec<PropertyResult> = props
        .iter()
        .map(|(name, _)| PropertyResult { name: name.to_string(), checked: 0, failures: 0, first_failure: None })
        .collect();
    let mut bad = Collector { count: 0, list: Vec::new() };
    let mut pending: BTreeMap<usize, Vec<(TreeObject, Label)>> = BTreeMap::new();
    pending.insert(1, vec![(fam.root(), fam.system.root())]);
    let mut levels = Vec::with_capacity(depth);

    for level in 1..=depth {
        let nodes = pending.remove(&level).unwrap_or_default();
        let oracle = fam.oracle_level(level, limits)?;
        let mut seen = BTreeSet::new();
        for (obj, _) in &nodes {
            if !seen.insert(obj.clone()) {
                bad.push(level, "unicity", obj, "generated twice".into());
            }
        }
        let oracle_set: BTreeSet<TreeObject> = oracle.iter().cloned().collect();
        if let Some(missing) = oracle_set.difference(&seen).next() {
            let k = oracle_set.difference(&seen).count();
            bad.push(level, "completeness", missing, format!("{k} oracle objects not generated"));
        }
        if let Some(extra) = seen.difference(&oracle_set).next() {
            bad.push(level, "membership", extra, "generated object outside the family".into());
        }
        levels.push(LevelReport {
            level,
            object_size: fam.object_size(level),
            system_count: profile.counts[level - 1].to_string(),
            oracle_count: oracle.len(),
            tree_count: nodes.len(),
        });
        if profile.counts[level - 1] != num_bigint::BigUint::from(nodes.len()) {
            bad.push(level, "system count", "-", format!("system gives {}, tree has {}", profile.counts[level - 1], nodes.len()));
        }

        for (obj, assigned) in &nodes {
            match fam.label_of(obj) {
                Ok(l) if l == *assigned => {}
                Ok(l) => bad.push(level, "label", obj, format!("labeler says {l}, construction says {assigned}")),
                Err(e) => bad.push(level, "label", obj, e.to_string()),
            }
            for ((_, check), res) in props.iter().zip(prop_results.iter_mut()) {
                if let Some(ok) = check(fam, obj, *assigned) {
                    res.checked += 1;
                    if !ok {
                        res.failures += 1;
                        res.first_failure.get_or_insert_with(|| format!("{obj} {assigned}"));
                    }
                }
            }
            let kids = match fam.children_of(obj) {
                Ok(k) => k,
                Err(e) => {
                    bad.push(level, "children", obj, e.to_string());
                    continue;
                }
            };
            let got = sorted_specs(kids.iter().map(|c| ChildSpec::new(c.label, c.delay)).collect());
            let want = sorted_specs(fam.system.children(assigned)?);
            if got != want {
                let fmt = |v: &[ChildSpec]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                bad.push(level, "rule", obj, format!("{assigned}: children {} but rule gives {}", fmt(&got), fmt(&want)));
            }
            for c in kids {
                if !fam.contains(&c.object) {
                    bad.push(level, "child membership", &c.object, format!("child of {obj}"));
                    continue;
                }
                match fam.father_of(&c.object) {
                    Ok((f, fl)) if f == *obj && fl == *assigned => {}
                    Ok((f, fl)) => bad.push(level, "father", &c.object, format!("father is {f} {fl}, expected {obj} {assigned}")),
                    Err(e) => bad.push(level, "father", &c.object, e.to_string()),
                }
                let target = level + c.delay as usize;
                if target <= depth {
                    pending.entry(target).or_default().push((c.object, c.label));
                }
            }
        }
    }

    Ok(FamilyReport {
        family: fam.name.clone(),
        system: fam.system.to_string(),
        depth,
        levels,
        properties: prop_results,
        violation_count: bad.count,
        violations: bad.list,
        labeling: fam.labeling_notes(),
    })
}

/// Objects of the explicit tree down to `depth`, parents before children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectNode {
    pub id: usize,
    pub level: usize,
    pub object: TreeObject,
    pub label: Label,
    pub parent: Option<usize>,
    pub delay: u32,
}

pub fn object_tree(fam: &FamilySpec, depth: usize, limits: &Limits) -> Result<Vec<ObjectNode>> {
    Limits::check("tree depth", depth, limits.depth)?;
    let root = fam.root();
    let label = fam.label_of(&root)?;
    let mut nodes = vec![ObjectNode { id: 0, level: 1, object: root, label, parent: None, delay: 0 }];
    let mut i = 0;
    while i < nodes.len() {
        let level = nodes[i].level;
        for c in fam.children_of(&nodes[i].object)? {
            let lvl = level + c.delay as usize;
            if lvl <= depth {
                let id = nodes.len();
                nodes.push(ObjectNode { id, level: lvl, object: c.object, label: c.label, parent: Some(i), delay: c.delay });
            }
        }
        i += 1;
    }
    Ok(nodes)
}
