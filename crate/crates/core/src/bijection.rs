//! Tree paths and transport of objects between families whose trees follow
//! the same rules, plus the symmetry maps between pattern classes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{normalized_letters, FamilySpec, TreeObject};
use crate::limits::Limits;
use crate::perm::Symmetry;
use crate::succession::{forced_chain, normalize, rule_isomorphic, Isomorphism, Label, LabelKind};
use crate::words::{
    relation_from_word, word_from_relation, FineParams, FineWord, SimilarityRelation, SimilarityWord,
};

/// Which child of its father a node is: its label, delay, and rank among
/// siblings sharing both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathKey {
    pub label: Label,
    pub delay: u32,
    pub occurrence: u32,
}

impl fmt::Display for PathKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.label.kind() {
            LabelKind::Plain => "",
            LabelKind::T => "T",
            LabelKind::P => "P",
            LabelKind::A => "A",
            LabelKind::B => "B",
        };
        f.write_str(kind)?;
        if let Some(t) = self.label.param() {
            write!(f, "{t}")?;
        }
        if self.delay != 1 {
            write!(f, "@{}", self.delay)?;
        }
        if self.occurrence != 1 {
            write!(f, "#{}", self.occurrence)?;
        }
        Ok(())
    }
}

impl FromStr for PathKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad path key {s:?}"));
        let (rest, occurrence) = match s.split_once('#') {
            Some((r, o)) => (r, o.parse().map_err(|_| bad())?),
            None => (s, 1),
        };
        let (rest, delay) = match rest.split_once('@') {
            Some((r, d)) => (r, d.parse().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let label = match rest.split_at(rest.len().min(1)) {
            ("T", "") => Label::T,
            ("P", "") => Label::P,
            ("A", t) => Label::a(t.parse().map_err(|_| bad())?),
            ("B", t) => Label::b(t.parse().map_err(|_| bad())?),
            _ => Label::plain(rest.parse().map_err(|_| bad())?),
        };
        if delay == 0 || occurrence == 0 {
            return Err(bad());
        }
        Ok(PathKey { label, delay, occurrence })
    }
}

/// Root-to-node sequence of child keys; text form `T/3/A3/P#2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TreePath(pub Vec<PathKey>);

impl TreePath {
    pub fn keys(&self) -> &[PathKey] {
        &self.0
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join("/"))
    }
}

impl FromStr for TreePath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "/" {
            return Ok(TreePath::default());
        }
        s.split('/').map(str::parse).collect::<Result<Vec<_>>>().map(TreePath)
    }
}

impl Serialize for TreePath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn key_among(children: &[(Label, u32)], index: usize) -> PathKey {
    let (label, delay) = children[index];
    let occurrence = children[..index].iter().filter(|&&c| c == (label, delay)).count() as u32 + 1;
    PathKey { label, delay, occurrence }
}

/// Keys from the root down to `obj`.
pub fn encode_tree_path(obj: &TreeObject, fam: &FamilySpec) -> Result<TreePath> {
    let mut keys = Vec::new();
    let mut cur = obj.clone();
    while !fam.is_root(&cur) {
        let (father, _) = fam.father_of(&cur)?;
        let kids = fam.children_of(&father)?;
        let index = kids
            .iter()
            .position(|c| c.object == cur)
            .ok_or_else(|| Error::Consistency(format!("{cur} is not among the children of its father {father}")))?;
        let specs: Vec<(Label, u32)> = kids.iter().map(|c| (c.label, c.delay)).collect();
        keys.push(key_among(&specs, index));
        cur = father;
    }
    keys.reverse();
    Ok(TreePath(keys))
}

/// Replays `path` from the family's root.
pub fn decode_tree_path(path: &TreePath, fam: &FamilySpec) -> Result<TreeObject> {
    let mut cur = fam.root();
    let mut level = 1;
    for key in path.keys() {
        let kids = fam.children_of(&cur)?;
        let child = kids
            .into_iter()
            .filter(|c| c.label == key.label && c.delay == key.delay)
            .nth(key.occurrence as usize - 1)
            .ok_or_else(|| Error::InvalidTreePath {
                level,
                reason: format!("{cur} has no child {key} in {}", fam.name()),
            })?;
        level += key.delay as usize;
        cur = child.object;
    }
    Ok(cur)
}

/// Father of a word in the `(p, q)` word tree, with the father's label.
pub fn word_father(w: &FineWord) -> Result<(FineWord, Label)> {
    let fam = FamilySpec::word(w.params())?;
    let (f, l) = fam.father_of(&TreeObject::Word(w.clone()))?;
    Ok((f.as_word().expect("word family").clone(), l))
}

/// The child of `w` reached through `key`.
pub fn word_child(w: &FineWord, key: &PathKey) -> Result<FineWord> {
    let fam = FamilySpec::word(w.params())?;
    let kids = fam.children_of(&TreeObject::Word(w.clone()))?;
    kids.into_iter()
        .filter(|c| c.label == key.label && c.delay == key.delay)
        .nth(key.occurrence as usize - 1)
        .and_then(|c| c.object.as_word().cloned())
        .ok_or_else(|| Error::InvalidTreePath { level: 0, reason: format!("{w} has no child {key}") })
}

/// Prepends `0,1,..,q-1` to a `p = 0` tree word.
pub fn normalize_p0_word(tree_word: &FineWord) -> Result<FineWord> {
    let params = tree_word.params();
    if params.p() != 0 {
        return Err(Error::InvalidParams { p: params.p(), q: params.q() });
    }
    let letters = normalized_letters(tree_word.letters(), params.q());
    FineWord::new(letters, params).map_err(|e| Error::Consistency(format!("normalizing {tree_word}: {e}")))
}

/// Inverse of [`normalize_p0_word`].
pub fn denormalize_p0_word(word: &FineWord) -> Result<FineWord> {
    let params = word.params();
    let q = params.q() as usize;
    if params.p() != 0 || !word.is_valid() || word.len() < q || (0..q).any(|i| word.letters()[i] != i as u32) {
        return Err(Error::InvalidWord { word: word.to_string(), reason: "no leading 0,1,..,q-1".into() });
    }
    Ok(FineWord::tree_word(word.letters()[q..].to_vec(), params))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Route {
    Tree { iso: Isomorphism, prefix_from: Vec<PathKey>, prefix_to: Vec<PathKey> },
    Symmetry(Vec<Symmetry>),
}

/// A bijection between two families, prepared once and applied per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transport {
    from: FamilySpec,
    to: FamilySpec,
    route: Route,
}

fn forced_keys(fam: &FamilySpec, shift: usize) -> Result<Vec<PathKey>> {
    let chain = forced_chain(fam.system(), shift)?;
    Ok(chain[1..=shift].iter().map(|&label| PathKey { label, delay: 1, occurrence: 1 }).collect())
}

const SYMMETRY_WORDS: [&[Symmetry]; 7] = [
    &[Symmetry::Mirror],
    &[Symmetry::Complement],
    &[Symmetry::Inverse],
    &[Symmetry::Complement, Symmetry::Inverse],
    &[Symmetry::Inverse, Symmetry::Complement],
    &[Symmetry::Mirror, Symmetry::Complement],
    &[Symmetry::Mirror, Symmetry::Inverse],
];

impl Transport {
    /// Tree transport when the normalized systems are rule-isomorphic;
    /// otherwise a symmetry carrying one pattern set onto the other.
    pub fn new(from: &FamilySpec, to: &FamilySpec) -> Result<Self> {
        let unsupported = || Error::UnsupportedPair { from: from.name().into(), to: to.name().into() };
        if let Some(iso) = rule_isomorphic(&normalize(from.system()), &normalize(to.system()))? {
            let prefix_from = forced_keys(from, iso.shift_a)?;
            let prefix_to = forced_keys(to, iso.shift_b)?;
            return Ok(Transport {
                from: from.clone(),
                to: to.clone(),
                route: Route::Tree { iso, prefix_from, prefix_to },
            });
        }
        let (Some(a), Some(b)) = (from.pattern_set(), to.pattern_set()) else {
            return Err(unsupported());
        };
        let target = b.sorted();
        SYMMETRY_WORDS
            .iter()
            .find(|ops| a.symmetry_set(ops).sorted() == target)
            .map(|ops| Transport { from: from.clone(), to: to.clone(), route: Route::Symmetry(ops.to_vec()) })
            .ok_or_else(unsupported)
    }

    pub fn from(&self) -> &FamilySpec {
        &self.from
    }

    pub fn to(&self) -> &FamilySpec {
        &self.to
    }

    pub fn isomorphism(&self) -> Option<&Isomorphism> {
        match &self.route {
            Route::Tree { iso, .. } => Some(iso),
            Route::Symmetry(_) => None,
        }
    }

    pub fn symmetry(&self) -> Option<&[Symmetry]> {
        match &self.route {
            Route::Symmetry(ops) => Some(ops),
            Route::Tree { .. } => None,
        }
    }

    /// Short description of the route, e.g. `tree (shift 0/1)` or `complement`.
    pub fn describe(&self) -> String {
        match &self.route {
            Route::Tree { iso, .. } => format!("tree (shift {}/{})", iso.shift_a, iso.shift_b),
            Route::Symmetry(ops) => {
                let names: Vec<&str> = ops
                    .iter()
                    .map(|o| match o {
                        Symmetry::Mirror => "mirror",
                        Symmetry::Complement => "complement",
                        Symmetry::Inverse => "inverse",
                    })
                    .collect();
                names.join(" then ")
            }
        }
    }

    /// Level in the target family of an object at `level` in the source.
    pub fn target_level(&self, level: usize) -> Option<usize> {
        match &self.route {
            Route::Tree { iso, .. } => (level > iso.shift_a).then(|| level - iso.shift_a + iso.shift_b),
            Route::Symmetry(_) => Some(level),
        }
    }

    pub fn apply(&self, obj: &TreeObject) -> Result<TreeObject> {
        match &self.route {
            Route::Symmetry(ops) => {
                let p = obj.as_perm().ok_or_else(|| Error::Consistency("symmetry on a non-permutation".into()))?;
                if !self.from.contains(obj) {
                    return Err(Error::NotInFamily { family: self.from.name().into(), object: obj.to_string() });
                }
                Ok(TreeObject::Perm(p.apply_all(ops)))
            }
            Route::Tree { iso, prefix_from, prefix_to } => {
                let path = encode_tree_path(obj, &self.from)?;
                let keys = path.keys();
                if keys.len() < prefix_from.len() || keys[..prefix_from.len()] != prefix_from[..] {
                    return Err(Error::UnsupportedPair {
                        from: format!("{} object {obj} above the shared subtree", self.from.name()),
                        to: self.to.name().into(),
                    });
                }
                let mut out = prefix_to.clone();
                for k in &keys[prefix_from.len()..] {
                    let label = iso.map_label(&k.label).ok_or_else(|| Error::Consistency(format!("no image for {}", k.label)))?;
                    out.push(PathKey { label, ..*k });
                }
                decode_tree_path(&TreePath(out), &self.to)
            }
        }
    }

    pub fn inverse(&self) -> Result<Transport> {
        Transport::new(&self.to, &self.from)
    }
}

/// One-shot transport; see [`Transport`].
pub fn transport(obj: &TreeObject, from: &FamilySpec, to: &FamilySpec) -> Result<TreeObject> {
    Transport::new(from, to)?.apply(obj)
}

fn nonsingular_family() -> FamilySpec {
    FamilySpec::word(FineParams::NONSINGULAR).expect("(0,2) is valid")
}

/// Maps an object of any family sharing the `(0,2)` word tree's rules to its
/// nonsingular similarity relation.
pub fn to_relation(obj: &TreeObject, from: &FamilySpec) -> Result<SimilarityRelation> {
    let words = nonsingular_family();
    let tree_word = Transport::new(from, &words)?.apply(obj)?;
    let word = normalize_p0_word(tree_word.as_word().expect("word family"))?;
    Ok(relation_from_word(&SimilarityWord::new(word.into_letters())?))
}

/// Inverse of [`to_relation`].
pub fn from_relation(rel: &SimilarityRelation, to: &FamilySpec) -> Result<TreeObject> {
    if !rel.is_nonsingular() {
        return Err(Error::InvalidRelation(format!("{rel} is singular")));
    }
    let word = word_from_relation(rel)?;
    let fine = FineWord::new(word.letters().to_vec(), FineParams::NONSINGULAR)?;
    let tree_word = TreeObject::Word(denormalize_p0_word(&fine)?);
    Transport::new(&nonsingular_family(), to)?.apply(&tree_word)
}

/// Result of checking a transport level by level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub from: String,
    pub to: String,
    pub route: String,
    pub depth: usize,
    pub levels: Vec<BijectionLevel>,
    pub violation_count: usize,
    pub first_violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionLevel {
    pub level: usize,
    pub target_level: Option<usize>,
    pub objects: usize,
    pub distinct_images: usize,
    pub target_count: usize,
}

impl BijectionReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }
}

/// Transports every object of `from` down to `depth` and checks that the map
/// is total, label-preserving, injective, onto the matching level of `to`,
/// and inverted by the reverse transport.
pub fn verify_bijection(from: &FamilySpec, to: &FamilySpec, depth: usize, limits: &Limits) -> Result<BijectionReport> {
    Limits::check("tree depth", depth, limits.depth)?;
    let fwd = Transport::new(from, to)?;
    let back = fwd.inverse()?;
    let mut violations = 0usize;
    let mut first = None;
    let mut fail = |msg: String| {
        violations += 1;
        first.get_or_insert(msg);
    };
    let mut levels = Vec::new();
    for level in 1..=depth {
        let objs = from.oracle_level(level, limits)?;
        let Some(tl) = fwd.target_level(level) else {
            levels.push(BijectionLevel { level, target_level: None, objects: objs.len(), distinct_images: 0, target_count: 0 });
            continue;
        };
        let target: BTreeSet<TreeObject> = to.oracle_level(tl, limits)?.into_iter().collect();
        let mut images = BTreeSet::new();
        for obj in &objs {
            let img = match fwd.apply(obj) {
                Ok(i) => i,
                Err(e) => {
                    fail(format!("{obj}: {e}"));
                    continue;
                }
            };
            if !target.contains(&img) {
                fail(format!("{obj} -> {img} is not at level {tl} of {}", to.name()));
            }
            if let Some(iso) = fwd.isomorphism() {
                let (a, b) = (from.label_of(obj)?, to.label_of(&img)?);
                if iso.map_label(&a) != Some(b) {
                    fail(format!("{obj} {a} -> {img} {b}: label not preserved"));
                }
            }
            match back.apply(&img) {
                Ok(ref o) if o == obj => {}
                Ok(o) => fail(format!("{obj} -> {img} -> {o}")),
                Err(e) => fail(format!("{img}: {e}")),
            }
            images.insert(img);
        }
        if images.len() != objs.len() {
            fail(format!("level {level}: {} objects but {} images", objs.len(), images.len()));
        }
        if images.len() != target.len() {
            fail(format!("level {level}: {} images but {} target objects", images.len(), target.len()));
        }
        levels.push(BijectionLevel {
            level,
            target_level: Some(tl),
            objects: objs.len(),
            distinct_images: images.len(),
            target_count: target.len(),
        });
    }
    Ok(BijectionReport {
        from: from.name().into(),
        to: to.name().into(),
        route: fwd.describe(),
        depth,
        levels,
        violation_count: violations,
        first_violation: first,
    })
}

/// Pairs with an object-level bijection among the built-in families.
pub fn registered_pairs() -> Vec<(String, String)> {
    let classes: [&[&str]; 4] = [
        &["F1", "F2", "F3", "DER", "WORD(0,2)"],
        &["H1", "WORD(1,3)"],
        &["H1STAR", "H2", "H3", "H4"],
        &["H3IC", "H5"],
    ];
    let mut out = Vec::new();
    for class in classes {
        for a in class {
            for b in class {
                if a != b {
                    out.push((a.to_string(), b.to_string()));
                }
            }
        }
    }
    out.push(("H1".into(), "H1STAR".into()));
    out.push(("H1STAR".into(), "H1".into()));
    out.push(("H3".into(), "H3IC".into()));
    out.push(("H3IC".into(), "H3".into()));
    out
}
