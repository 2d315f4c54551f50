//! The count, enumerate, map and tree verbs.

use std::io::BufRead;

use num_bigint::BigUint;
use serde_json::{json, Value};

use fine_core::bijection::{denormalize_p0_word, from_relation, normalize_p0_word, to_relation, Transport};
use fine_core::families::{object_tree, FamilyKind};
use fine_core::numbers::{catalan, count_formula, fine};
use fine_core::paths::{enumerate_dyck_paths, path_to_word, word_to_path};
use fine_core::perm::{enumerate_avoiders, enumerate_derangements_avoiding_321};
use fine_core::render::{dot_tree, text_tree, RenderNode};
use fine_core::succession::{builtin_system, expand_tree, make_d1};
use fine_core::words::{enumerate_fine_words, relation_from_word, word_from_relation};
use fine_core::{DyckPath, FamilySpec, FineParams, FineWord, Limits, PatternSet, SimilarityRelation, SimilarityWord, TreeObject};

use crate::{CliError, CliResult, CountArgs, FamilyArg, Format, MapArgs, Selector, TreeArgs};

fn json_line(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize"))
}

fn no_dot(format: Format, verb: &str) -> CliResult<()> {
    if format == Format::Dot {
        Err(CliError::Usage(format!("{verb} has no dot output")))
    } else {
        Ok(())
    }
}

fn pattern_set(sel: &Selector) -> CliResult<PatternSet> {
    let text = sel.set.as_deref().ok_or_else(|| CliError::Usage("avoiders needs --set".into()))?;
    Ok(text.parse()?)
}

fn family_name(sel: &Selector) -> CliResult<String> {
    Ok(match sel.family {
        FamilyArg::Words => format!("words({},{})", sel.p, sel.q),
        FamilyArg::Avoiders => format!("avoiders({})", pattern_set(sel)?),
        FamilyArg::Derangements321 => "derangements321".into(),
        FamilyArg::Paths => "paths".into(),
    })
}

fn formula(sel: &Selector) -> CliResult<Option<BigUint>> {
    let n = u32::try_from(sel.n).map_err(|_| CliError::Usage(format!("n = {} is too large", sel.n)))?;
    Ok(match sel.family {
        FamilyArg::Words => Some(count_formula(n, FineParams::new(sel.p, sel.q)?)),
        FamilyArg::Avoiders => match pattern_set(sel)?.name() {
            Some("F1" | "F2" | "F3") => Some(fine(n)),
            Some(_) => Some(count_formula(n + 1, FineParams::new(1, 3)?)),
            None => None,
        },
        FamilyArg::Derangements321 => (n >= 1).then(|| fine(n - 1)),
        FamilyArg::Paths => Some(catalan(n)),
    })
}

fn objects(sel: &Selector, lim: &Limits) -> CliResult<Vec<String>> {
    let n = sel.n;
    Ok(match sel.family {
        FamilyArg::Words => {
            enumerate_fine_words(n, FineParams::new(sel.p, sel.q)?, lim)?.iter().map(ToString::to_string).collect()
        }
        FamilyArg::Avoiders => enumerate_avoiders(n, &pattern_set(sel)?, lim)?.iter().map(ToString::to_string).collect(),
        FamilyArg::Derangements321 => {
            enumerate_derangements_avoiding_321(n, lim)?.iter().map(ToString::to_string).collect()
        }
        FamilyArg::Paths => {
            if n > lim.word {
                return Err(fine_core::Error::SizeLimit { what: "path semilength", n, limit: lim.word }.into());
            }
            enumerate_dyck_paths(n).iter().map(ToString::to_string).collect()
        }
    })
}

pub fn count(a: &CountArgs, format: Format, lim: &Limits) -> CliResult<String> {
    no_dot(format, "count")?;
    let sel = &a.selector;
    let name = family_name(sel)?;
    let formula = formula(sel)?;
    if !a.both {
        let (count, method) = match formula {
            Some(c) => (c, "formula"),
            None => (BigUint::from(objects(sel, lim)?.len()), "oracle"),
        };
        return Ok(match format {
            Format::Json => json_line(&json!({"family": name, "n": sel.n, "count": count.to_string(), "method": method})),
            _ => format!("{count}\n"),
        });
    }
    let oracle = BigUint::from(objects(sel, lim)?.len());
    let agree = formula.as_ref().map_or(true, |f| *f == oracle);
    let out = match format {
        Format::Json => json_line(&json!({
            "family": name,
            "n": sel.n,
            "formula": formula.as_ref().map(ToString::to_string),
            "oracle": oracle.to_string(),
            "agree": agree,
        })),
        _ => {
            let f = formula.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
            let verdict = if agree { "agree" } else { "MISMATCH" };
            format!("formula {f}\noracle {oracle}\n{verdict}\n")
        }
    };
    if agree {
        Ok(out)
    } else {
        Err(CliError::FailedReport(out))
    }
}

pub fn enumerate(sel: &Selector, format: Format, lim: &Limits) -> CliResult<String> {
    no_dot(format, "enumerate")?;
    let objs = objects(sel, lim)?;
    Ok(match format {
        Format::Json => json_line(&json!({"family": family_name(sel)?, "n": sel.n, "count": objs.len(), "objects": objs})),
        _ => objs.iter().map(|o| format!("{o}\n")).collect(),
    })
}

enum Endpoint {
    Family(FamilySpec),
    Relation,
    Dyck,
}

impl Endpoint {
    fn parse(s: &str) -> CliResult<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "relation" | "relations" => Endpoint::Relation,
            "dyck" | "path" => Endpoint::Dyck,
            _ => Endpoint::Family(FamilySpec::builtin(s)?),
        })
    }

    fn name(&self) -> String {
        match self {
            Endpoint::Family(f) => f.name().to_string(),
            Endpoint::Relation => "relation".into(),
            Endpoint::Dyck => "dyck".into(),
        }
    }
}

fn word_params(f: &FamilySpec) -> Option<FineParams> {
    match f.kind() {
        FamilyKind::Word(fp) => Some(*fp),
        _ => None,
    }
}

fn word_object_to_path(obj: &TreeObject, fp: FineParams) -> CliResult<DyckPath> {
    let w = obj.as_word().expect("word family object");
    let w = if fp.p() == 0 { normalize_p0_word(w)? } else { w.clone() };
    Ok(word_to_path(&w))
}

fn path_to_word_object(path: &DyckPath, fp: FineParams) -> CliResult<TreeObject> {
    let w = path_to_word(path, fp, true)?;
    Ok(TreeObject::Word(if fp.p() == 0 { denormalize_p0_word(&w)? } else { w }))
}

fn relation_to_path(rel: &SimilarityRelation) -> CliResult<DyckPath> {
    let w = word_from_relation(rel)?;
    Ok(word_to_path(&FineWord::new(w.letters().to_vec(), FineParams::NONSINGULAR)?))
}

fn path_to_relation(path: &DyckPath) -> CliResult<SimilarityRelation> {
    let w = path_to_word(path, FineParams::NONSINGULAR, true)?;
    Ok(relation_from_word(&SimilarityWord::new(w.into_letters())?))
}

/// A prepared map between two endpoints.
struct Mapper {
    from: Endpoint,
    to: Endpoint,
    transport: Option<Transport>,
}

impl Mapper {
    fn new(from: Endpoint, to: Endpoint) -> CliResult<Self> {
        let unsupported = || CliError::Failure(format!("no map from {} to {}", from.name(), to.name()));
        let transport = match (&from, &to) {
            (Endpoint::Family(a), Endpoint::Family(b)) => Some(Transport::new(a, b)?),
            (Endpoint::Family(f), Endpoint::Dyck) | (Endpoint::Dyck, Endpoint::Family(f)) => {
                word_params(f).ok_or_else(unsupported)?;
                None
            }
            _ => None,
        };
        Ok(Mapper { from, to, transport })
    }

    fn apply(&self, input: &str) -> CliResult<String> {
        let input = input.trim();
        Ok(match (&self.from, &self.to) {
            (Endpoint::Family(a), Endpoint::Family(_)) => {
                let t = self.transport.as_ref().expect("prepared");
                t.apply(&a.parse_object(input)?)?.to_string()
            }
            (Endpoint::Family(a), Endpoint::Relation) => to_relation(&a.parse_object(input)?, a)?.to_string(),
            (Endpoint::Relation, Endpoint::Family(b)) => from_relation(&input.parse()?, b)?.to_string(),
            (Endpoint::Family(a), Endpoint::Dyck) => {
                word_object_to_path(&a.parse_object(input)?, word_params(a).expect("checked"))?.to_string()
            }
            (Endpoint::Dyck, Endpoint::Family(b)) => {
                path_to_word_object(&input.parse()?, word_params(b).expect("checked"))?.to_string()
            }
            (Endpoint::Relation, Endpoint::Dyck) => relation_to_path(&input.parse()?)?.to_string(),
            (Endpoint::Dyck, Endpoint::Relation) => path_to_relation(&input.parse()?)?.to_string(),
            (Endpoint::Relation, Endpoint::Relation) => input.parse::<SimilarityRelation>()?.to_string(),
            (Endpoint::Dyck, Endpoint::Dyck) => input.parse::<DyckPath>()?.to_string(),
        })
    }
}

// Canonical text of an input so round trips compare like with like.
fn canonical(ep: &Endpoint, input: &str) -> CliResult<String> {
    let input = input.trim();
    Ok(match ep {
        Endpoint::Family(f) => f.parse_object(input)?.to_string(),
        Endpoint::Relation => input.parse::<SimilarityRelation>()?.to_string(),
        Endpoint::Dyck => input.parse::<DyckPath>()?.to_string(),
    })
}

pub fn map(a: &MapArgs, format: Format) -> CliResult<String> {
    no_dot(format, "map")?;
    let inputs: Vec<String> = match &a.input {
        Some(i) => vec![i.clone()],
        None => std::io::stdin()
            .lock()
            .lines()
            .map(|l| l.map_err(|e| CliError::Usage(format!("reading stdin: {e}"))))
            .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
            .collect::<CliResult<_>>()?,
    };
    let fwd = Mapper::new(Endpoint::parse(&a.from)?, Endpoint::parse(&a.to)?)?;
    let back = if a.roundtrip { Some(Mapper::new(Endpoint::parse(&a.to)?, Endpoint::parse(&a.from)?)?) } else { None };
    let mut rows = Vec::with_capacity(inputs.len());
    let mut failures = 0;
    for input in &inputs {
        let image = fwd.apply(input)?;
        let recovered = match &back {
            Some(b) => {
                let r = b.apply(&image)?;
                let ok = r == canonical(&fwd.from, input)?;
                failures += usize::from(!ok);
                Some((r, ok))
            }
            None => None,
        };
        rows.push((input.trim().to_string(), image, recovered));
    }
    let out = match format {
        Format::Json => {
            let route = fwd.transport.as_ref().map(Transport::describe);
            let items: Vec<Value> = rows
                .iter()
                .map(|(i, o, r)| {
                    json!({"input": i, "output": o, "roundtrip": r.as_ref().map(|(r, _)| r), "roundtrip_ok": r.as_ref().map(|(_, ok)| ok)})
                })
                .collect();
            json_line(&json!({
                "from": fwd.from.name(),
                "to": fwd.to.name(),
                "route": route,
                "results": items,
                "roundtrip_failures": failures,
            }))
        }
        _ => rows
            .iter()
            .map(|(_, o, r)| match r {
                Some((r, false)) => format!("{o}\tROUNDTRIP FAILED: {r}\n"),
                _ => format!("{o}\n"),
            })
            .collect(),
    };
    if failures == 0 {
        Ok(out)
    } else {
        Err(CliError::FailedReport(out))
    }
}

pub fn tree(a: &TreeArgs, format: Format, lim: &Limits) -> CliResult<String> {
    if a.depth == 0 {
        return Err(CliError::Usage("depth must be at least 1".into()));
    }
    let (name, nodes, json_nodes): (String, Vec<RenderNode>, Vec<Value>) = match (&a.family, &a.system) {
        (Some(f), None) => {
            let fam = FamilySpec::builtin(f)?;
            let nodes = object_tree(&fam, a.depth, lim)?;
            let js = nodes
                .iter()
                .map(|n| {
                    json!({
                        "id": n.id, "level": n.level, "parent": n.parent, "delay": n.delay,
                        "label": n.label.to_string(), "object": n.object.to_string(),
                    })
                })
                .collect();
            (fam.name().to_string(), nodes.iter().map(RenderNode::from).collect(), js)
        }
        (None, Some(s)) => {
            let sys = if s.eq_ignore_ascii_case("d1") {
                make_d1(FineParams::new(a.p, a.q)?)?
            } else {
                builtin_system(s)?
            };
            let nodes = expand_tree(&sys, a.depth, lim)?;
            let js = nodes
                .iter()
                .map(|n| json!({"id": n.id, "level": n.level, "parent": n.parent, "delay": n.delay, "label": n.label.to_string()}))
                .collect();
            (sys.name().to_string(), nodes.iter().map(RenderNode::from).collect(), js)
        }
        _ => return Err(CliError::Usage("tree needs exactly one of --family or --system".into())),
    };
    Ok(match format {
        Format::Text => text_tree(&nodes),
        Format::Dot => dot_tree(&name, &nodes),
        Format::Json => json_line(&json!({"name": name, "depth": a.depth, "nodes": json_nodes})),
    })
}
