//! The verify verb: oracle comparisons collected into one report shape.

use num_bigint::BigUint;
use serde::Serialize;

use fine_core::bijection::{from_relation, to_relation, verify_bijection, BijectionReport};
use fine_core::families::{verify_family, FamilyReport, PropertyResult};
use fine_core::numbers::{check_shapiro, count_formula, fine};
use fine_core::perm::{enumerate_avoiders, enumerate_derangements_avoiding_321};
use fine_core::succession::{expand, make_d1};
use fine_core::words::enumerate_fine_words;
use fine_core::{FamilySpec, FineParams, Limits, PatternSet};

use crate::{CliError, CliResult, Format, VerifyArgs};

#[derive(Debug, Serialize)]
pub struct Row {
    pub at: usize,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub clean: bool,
    pub rows: Vec<Row>,
    pub properties: Vec<PropertyResult>,
    pub first_counterexample: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub clean: bool,
    pub sections: Vec<Section>,
}

impl Section {
    fn counts(name: impl Into<String>, rows: Vec<Row>) -> Section {
        let first_counterexample = rows
            .iter()
            .find(|r| !r.ok)
            .map(|r| format!("at {}: expected {}, observed {}", r.at, r.expected, r.observed));
        Section {
            name: name.into(),
            clean: first_counterexample.is_none(),
            rows,
            properties: Vec::new(),
            first_counterexample,
            notes: Vec::new(),
        }
    }
}

fn row(at: usize, expected: impl ToString, observed: impl ToString) -> Row {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    Row { at, ok: expected == observed, expected, observed }
}

fn fp(p: u32, q: u32) -> CliResult<FineParams> {
    Ok(FineParams::new(p, q)?)
}

fn n32(n: usize) -> u32 {
    u32::try_from(n).expect("bounded by limits")
}

fn family_section(r: FamilyReport) -> Section {
    let rows = r
        .levels
        .iter()
        .map(|l| {
            let ok = l.system_count == l.oracle_count.to_string() && l.oracle_count == l.tree_count;
            Row { at: l.level, expected: l.system_count.clone(), observed: l.oracle_count.to_string(), ok }
        })
        .collect();
    let first_counterexample = r
        .violations
        .first()
        .map(|v| format!("level {} {}: {} ({})", v.level, v.check, v.object, v.detail))
        .or_else(|| {
            r.properties
                .iter()
                .find(|p| p.failures > 0)
                .map(|p| format!("{}: {}", p.name, p.first_failure.clone().unwrap_or_default()))
        });
    Section {
        name: format!("succession {}", r.family),
        clean: r.is_clean(),
        rows,
        properties: r.properties,
        first_counterexample,
        notes: std::iter::once(format!("system: {}", r.system)).chain(r.labeling).collect(),
    }
}

fn bijection_section(r: BijectionReport) -> Section {
    let rows = r
        .levels
        .iter()
        .map(|l| {
            let ok = l.objects == l.distinct_images && l.distinct_images == l.target_count;
            Row { at: l.level, expected: l.target_count.to_string(), observed: l.distinct_images.to_string(), ok }
        })
        .collect();
    Section {
        name: format!("bijection {} -> {}", r.from, r.to),
        clean: r.is_clean(),
        rows,
        properties: Vec::new(),
        first_counterexample: r.first_violation,
        notes: vec![format!("route: {}", r.route)],
    }
}

fn builtin(name: &str) -> CliResult<FamilySpec> {
    Ok(FamilySpec::builtin(name)?)
}

fn families(names: &[&str], depth: usize, lim: &Limits) -> CliResult<Vec<Section>> {
    names.iter().map(|n| Ok(family_section(verify_family(&builtin(n)?, depth, lim)?))).collect()
}

fn bijections(pairs: &[(&str, &str)], depth: usize, lim: &Limits) -> CliResult<Vec<Section>> {
    pairs
        .iter()
        .map(|(a, b)| Ok(bijection_section(verify_bijection(&builtin(a)?, &builtin(b)?, depth, lim)?)))
        .collect()
}

fn shapiro(max_n: usize) -> Section {
    let r = check_shapiro(n32(max_n));
    let rows = r.rows.iter().map(|x| Row { at: x.n as usize, expected: x.rhs.clone(), observed: x.lhs.clone(), ok: x.holds }).collect();
    Section::counts("2 fine(n) + fine(n-1) = catalan(n+1)", rows)
}

fn formula(max_n: usize, lim: &Limits) -> CliResult<Vec<Section>> {
    let mut out = Vec::new();
    for q in 1..=4 {
        for p in 0..q {
            let rows = (1..=max_n)
                .map(|n| Ok(row(n, count_formula(n32(n), fp(p, q)?), enumerate_fine_words(n, fp(p, q)?, lim)?.len())))
                .collect::<CliResult<_>>()?;
            out.push(Section::counts(format!("formula vs words ({p},{q})"), rows));
        }
    }
    Ok(out)
}

fn d1_levels(depth: usize, lim: &Limits) -> CliResult<Vec<Section>> {
    let mut out = Vec::new();
    for q in 2..=4 {
        for p in 0..q {
            let prof = expand(&make_d1(fp(p, q)?)?, depth)?;
            let rows = prof
                .counts
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let level = i + 1;
                    let len = if p == 0 { level + q as usize - 1 } else { level + p as usize - 1 };
                    Ok(row(level, c, enumerate_fine_words(len, fp(p, q)?, lim)?.len()))
                })
                .collect::<CliResult<_>>()?;
            out.push(Section::counts(format!("d1({p},{q}) levels vs words"), rows));
        }
    }
    Ok(out)
}

fn avoider_counts(names: &[&str], offset: usize, max_n: usize, expected: impl Fn(usize) -> BigUint, lim: &Limits) -> CliResult<Vec<Section>> {
    names
        .iter()
        .map(|name| {
            let set = PatternSet::builtin(name)?;
            let rows = (1 + offset..=max_n)
                .map(|n| Ok(row(n, expected(n), enumerate_avoiders(n - offset, &set, lim)?.len())))
                .collect::<CliResult<_>>()?;
            let label = if offset == 0 { format!("|S_n({name})|") } else { format!("|S_(n-{offset})({name})|") };
            Ok(Section::counts(label, rows))
        })
        .collect()
}

fn relation_round_trip(depth: usize, lim: &Limits) -> CliResult<Section> {
    let der = builtin("DER")?;
    let mut rows = Vec::new();
    let mut first = None;
    for level in 1..=depth {
        let objs = der.oracle_level(level, lim)?;
        let mut back = 0;
        let mut rels = std::collections::BTreeSet::new();
        for o in &objs {
            let rel = to_relation(o, &der)?;
            if from_relation(&rel, &der)? == *o {
                back += 1;
            } else if first.is_none() {
                first = Some(format!("{o} -> {rel} does not map back"));
            }
            rels.insert(rel.to_string());
        }
        let ok = back == objs.len() && rels.len() == objs.len();
        rows.push(Row { at: level + 1, expected: objs.len().to_string(), observed: back.min(rels.len()).to_string(), ok });
    }
    let mut s = Section::counts("D_n(321) -> nonsingular relations -> D_n(321)", rows);
    if first.is_some() {
        s.first_counterexample = first;
    }
    Ok(s)
}

fn run_check(check: &str, max_n: Option<usize>, depth: Option<usize>, lim: &Limits) -> CliResult<Vec<Section>> {
    let depth_or = |d| depth.unwrap_or(d);
    let n_or = |n| max_n.unwrap_or(n);
    if let Some(fam) = check.strip_prefix("succession:") {
        return families(&[fam], depth_or(7), lim);
    }
    if let Some(pair) = check.strip_prefix("bijection:") {
        let (a, b) = pair.split_once(':').ok_or_else(|| CliError::Usage(format!("expected bijection:<from>:<to>, got {check}")))?;
        return bijections(&[(a, b)], depth_or(7), lim);
    }
    Ok(match check {
        "shapiro" => vec![shapiro(n_or(15))],
        "formula" => formula(n_or(12), lim)?,
        "thm1" => {
            let mut s = d1_levels(n_or(10), lim)?;
            s.extend(families(&["WORD(0,2)", "WORD(1,2)", "WORD(1,3)", "WORD(2,3)", "WORD(1,4)"], depth_or(7), lim)?);
            s
        }
        "thm2" => {
            let rows = (2..=n_or(9))
                .map(|n| Ok(row(n, fine(n32(n) - 1), enumerate_derangements_avoiding_321(n, lim)?.len())))
                .collect::<CliResult<_>>()?;
            let mut s = vec![Section::counts("|D_n(321)| = fine(n-1)", rows)];
            s.extend(families(&["DER"], depth_or(7), lim)?);
            s.extend(bijections(&[("DER", "WORD(0,2)"), ("WORD(0,2)", "DER")], depth_or(7), lim)?);
            s.push(relation_round_trip(depth_or(7), lim)?);
            s
        }
        "thm3" => {
            let mut s = avoider_counts(&["F1", "F2", "F3"], 0, n_or(8), |n| fine(n32(n)), lim)?;
            s.extend(families(&["F1", "F2", "F3"], depth_or(7), lim)?);
            s.extend(bijections(&[("F1", "F2"), ("F2", "F3"), ("F3", "WORD(0,2)")], depth_or(7), lim)?);
            s
        }
        "thm4" => {
            let sets = ["H1", "H1STAR", "H2", "H3", "H4", "H3IC", "H5"];
            let one_three = FineParams::new(1, 3)?;
            let mut s = avoider_counts(&sets, 1, n_or(9), |n| count_formula(n32(n), one_three), lim)?;
            s.extend(families(&sets, depth_or(7), lim)?);
            let pairs = [
                ("H1", "WORD(1,3)"),
                ("H1", "H1STAR"),
                ("H1STAR", "H2"),
                ("H2", "H3"),
                ("H3", "H4"),
                ("H3", "H3IC"),
                ("H3IC", "H5"),
            ];
            s.extend(bijections(&pairs, depth_or(7), lim)?);
            s
        }
        other => return Err(CliError::Usage(format!("unknown check {other:?}"))),
    })
}

fn render_text(r: &Report) -> String {
    let verdict = |clean| if clean { "clean" } else { "VIOLATION" };
    let mut out = format!("check {}: {}\n", r.check, verdict(r.clean));
    for s in &r.sections {
        out += &format!("{}: {}\n", s.name, verdict(s.clean));
        for x in &s.rows {
            let mark = if x.ok { "" } else { "  <-- mismatch" };
            out += &format!("  {:>3}  expected {}  observed {}{mark}\n", x.at, x.expected, x.observed);
        }
        for p in &s.properties {
            out += &format!("  property {}: {} checked, {} failed\n", p.name, p.checked, p.failures);
        }
        for n in &s.notes {
            out += &format!("  note: {n}\n");
        }
        if let Some(c) = &s.first_counterexample {
            out += &format!("  first counterexample: {c}\n");
        }
    }
    out
}

pub fn verify(a: &VerifyArgs, format: Format, lim: &Limits) -> CliResult<String> {
    if format == Format::Dot {
        return Err(CliError::Usage("verify has no dot output".into()));
    }
    let sections = run_check(a.check.trim(), a.max_n, a.depth, lim)?;
    let report = Report { check: a.check.trim().to_string(), clean: sections.iter().all(|s| s.clean), sections };
    let out = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")),
        _ => render_text(&report),
    };
    if report.clean {
        Ok(out)
    } else {
        Err(CliError::FailedReport(out))
    }
}
