//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use fine_core::bijection::{registered_pairs, verify_bijection};
use fine_core::families::{verify_family, FamilySpec, BUILTIN_FAMILIES};
use fine_core::numbers::{ballot, check_shapiro, count_formula, fine};
use fine_core::paths::{first_rise_transform, path_to_word, word_to_path};
use fine_core::patterns::BUILTIN_SETS;
use fine_core::perm::{enumerate_avoiders, enumerate_derangements_avoiding_321};
use fine_core::succession::{builtin_system, expand, make_d1, normalize, rule_isomorphic};
use fine_core::words::{enumerate_fine_words, enumerate_similarity_words, relation_from_word, word_from_relation};
use fine_core::{FineParams, Limits, PatternSet, Symmetry};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fp(p: u32, q: u32) -> FineParams {
    FineParams::new(p, q).unwrap()
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

fn fine_values() -> Check {
    let got: Vec<BigUint> = (1..=8).map(fine).collect();
    let want: Vec<BigUint> = [1u32, 2, 6, 18, 57, 186, 622, 2120].into_iter().map(BigUint::from).collect();
    ensure(got == want, || format!("got {got:?}"))
}

fn formula_vs_oracle() -> Check {
    let lim = Limits::default();
    for q in 1..=4 {
        for p in 0..q {
            for n in 1..=12u32 {
                let listed = enumerate_fine_words(n as usize, fp(p, q), &lim).map_err(|e| e.to_string())?.len();
                let formula = count_formula(n, fp(p, q));
                ensure(formula == big(listed), || format!("(n,p,q)=({n},{p},{q}): formula {formula}, words {listed}"))?;
            }
        }
    }
    Ok(())
}

fn shapiro() -> Check {
    let r = check_shapiro(15);
    ensure(r.is_clean() && r.rows.len() == 14, || format!("first failure at n = {:?}", r.first_failure))
}

fn f_counts() -> Check {
    let lim = Limits::default();
    for name in ["F1", "F2", "F3"] {
        let set = PatternSet::builtin(name).unwrap();
        for n in 1..=8 {
            let c = enumerate_avoiders(n, &set, &lim).map_err(|e| e.to_string())?.len();
            ensure(big(c) == fine(n as u32), || format!("|S_{n}({name})| = {c}, fine = {}", fine(n as u32)))?;
        }
    }
    Ok(())
}

fn h_counts() -> Check {
    let lim = Limits::default();
    for name in ["H1", "H1STAR", "H2", "H3", "H4", "H3IC", "H5"] {
        let set = PatternSet::builtin(name).unwrap();
        for n in 2..=9u32 {
            let c = enumerate_avoiders(n as usize - 1, &set, &lim).map_err(|e| e.to_string())?.len();
            let want = count_formula(n, fp(1, 3));
            ensure(big(c) == want, || format!("|S_{}({name})| = {c}, formula {want}", n - 1))?;
        }
    }
    Ok(())
}

fn derangement_counts() -> Check {
    let lim = Limits::default();
    for n in 2..=9usize {
        let c = enumerate_derangements_avoiding_321(n, &lim).map_err(|e| e.to_string())?.len();
        ensure(big(c) == fine(n as u32 - 1), || format!("|D_{n}(321)| = {c}"))?;
    }
    Ok(())
}

fn succession_verification() -> Check {
    let lim = Limits::default();
    for name in BUILTIN_FAMILIES {
        let fam = FamilySpec::builtin(name).unwrap();
        let r = verify_family(&fam, 7, &lim).map_err(|e| e.to_string())?;
        ensure(r.is_clean(), || {
            let prop = r.properties.iter().find(|p| p.failures > 0);
            format!("{name}: {} violations, first {:?}, property {:?}", r.violation_count, r.violations.first(), prop)
        })?;
    }
    Ok(())
}

fn engine_consistency() -> Check {
    let lim = Limits::unbounded();
    for (p, q) in [(0, 2), (1, 2), (1, 3), (2, 3), (1, 4)] {
        let prof = expand(&make_d1(fp(p, q)).map_err(|e| e.to_string())?, 10).map_err(|e| e.to_string())?;
        for (i, count) in prof.counts.iter().enumerate() {
            let level = i + 1;
            let len = if p == 0 { level + q as usize - 1 } else { level + p as usize - 1 };
            let words = enumerate_fine_words(len, fp(p, q), &lim).map_err(|e| e.to_string())?.len();
            ensure(*count == big(words), || format!("d1({p},{q}) level {level}: {count} vs {words} words"))?;
        }
    }
    Ok(())
}

fn round_trips() -> Check {
    let lim = Limits::default();
    for (a, b) in registered_pairs() {
        let r = verify_bijection(&FamilySpec::builtin(&a).unwrap(), &FamilySpec::builtin(&b).unwrap(), 7, &lim)
            .map_err(|e| e.to_string())?;
        ensure(r.is_clean(), || format!("{a} -> {b}: {:?}", r.first_violation))?;
    }
    for q in 2..=4 {
        for p in 0..q {
            for n in 1..=12 {
                for w in enumerate_fine_words(n, fp(p, q), &lim).map_err(|e| e.to_string())? {
                    let back = path_to_word(&word_to_path(&w), fp(p, q), true).map_err(|e| e.to_string())?;
                    ensure(back == w, || format!("word {w} came back as {back}"))?;
                }
            }
        }
    }
    for n in 1..=12 {
        for w in enumerate_similarity_words(n) {
            let back = word_from_relation(&relation_from_word(&w)).map_err(|e| e.to_string())?;
            ensure(back == w, || format!("relation of {w} came back as {back}"))?;
        }
    }
    Ok(())
}

fn rule_isomorphisms() -> Check {
    let sys = |n: &str| normalize(&builtin_system(n).unwrap());
    let classes: Vec<Vec<(String, fine_core::SuccessionSystem)>> = vec![
        ["F1", "F2", "F3", "DER", "d1(0,2)"].iter().map(|n| (n.to_string(), sys(n))).collect(),
        ["H1STAR", "H2", "H3", "H4"].iter().map(|n| (n.to_string(), sys(n))).collect(),
        ["H3IC", "H5"].iter().map(|n| (n.to_string(), sys(n))).collect(),
        ["H1", "d1(1,3)"].iter().map(|n| (n.to_string(), sys(n))).collect(),
    ];
    for class in &classes {
        for (na, a) in class {
            for (nb, b) in class {
                let iso = rule_isomorphic(a, b).map_err(|e| e.to_string())?;
                ensure(iso.is_some(), || format!("{na} and {nb} not found isomorphic"))?;
            }
        }
    }
    let iso = rule_isomorphic(&sys("H1"), &sys("d1(1,3)")).map_err(|e| e.to_string())?.unwrap();
    ensure((iso.shift_a, iso.shift_b) == (0, 1), || format!("H1 ~ d1(1,3) with shifts {iso:?}"))?;
    let cross = rule_isomorphic(&sys("H1STAR"), &sys("H3IC")).map_err(|e| e.to_string())?;
    ensure(cross.is_none(), || "H1STAR and H3IC reported isomorphic".into())
}

fn symmetry_invariance() -> Check {
    let lim = Limits::default();
    let ops: [&[Symmetry]; 4] = [
        &[Symmetry::Mirror],
        &[Symmetry::Complement],
        &[Symmetry::Inverse],
        &[Symmetry::Complement, Symmetry::Inverse],
    ];
    for name in BUILTIN_SETS {
        let set = PatternSet::builtin(name).unwrap();
        for n in 1..=7 {
            let base = enumerate_avoiders(n, &set, &lim).map_err(|e| e.to_string())?.len();
            for o in ops {
                let c = enumerate_avoiders(n, &set.symmetry_set(o), &lim).map_err(|e| e.to_string())?.len();
                ensure(c == base, || format!("{name} under {o:?} at n = {n}: {c} vs {base}"))?;
            }
        }
    }
    let h3ic = PatternSet::builtin("H3").unwrap().symmetry_set(&[Symmetry::Complement, Symmetry::Inverse]);
    let printed: PatternSet = "1324;2134;2143;2314;2413;3214".parse().unwrap();
    ensure(h3ic.sorted() == printed.sorted(), || format!("complement-then-inverse of H3 is {h3ic}"))
}

fn first_rise_distribution() -> Check {
    let lim = Limits::default();
    for (p, q) in [(0u32, 2u32), (1, 3)] {
        for n in 1..=10usize {
            let words = enumerate_fine_words(n, fp(p, q), &lim).map_err(|e| e.to_string())?;
            let mut by_rise = vec![0usize; n + 1];
            for w in &words {
                let t = first_rise_transform(&word_to_path(w), fp(p, q)).map_err(|e| e.to_string())?;
                by_rise[t.first_rise()] += 1;
            }
            for (r, &c) in by_rise.iter().enumerate() {
                let on_grid = r >= p as usize && (r - p as usize) % q as usize == 0;
                let want = if on_grid { ballot(n as u32, r as u32) } else { BigUint::from(0u32) };
                ensure(big(c) == want, || format!("(p,q)=({p},{q}) n={n} rise {r}: {c} vs {want}"))?;
            }
        }
    }
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "Fine values 1..8", budget: secs(1), run: fine_values },
        Criterion { id: 2, name: "formula vs word enumeration, p<q<=4, n<=12", budget: secs(30), run: formula_vs_oracle },
        Criterion { id: 3, name: "2F(n)+F(n-1) = C(n+1), n<=15", budget: secs(1), run: shapiro },
        Criterion { id: 4, name: "|S_n(F_i)| = fine(n), n<=8", budget: secs(60), run: f_counts },
        Criterion { id: 5, name: "|S_(n-1)(H_i)| = count(n,1,3), n<=9", budget: secs(60), run: h_counts },
        Criterion { id: 6, name: "|D_n(321)| = fine(n-1), n<=9", budget: None, run: derangement_counts },
        Criterion { id: 7, name: "insertion trees realize their systems, depth 7", budget: None, run: succession_verification },
        Criterion { id: 8, name: "d1(p,q) level counts = word counts, depth 10", budget: None, run: engine_consistency },
        Criterion { id: 9, name: "transport and coding round trips", budget: None, run: round_trips },
        Criterion { id: 10, name: "rule isomorphism classes", budget: None, run: rule_isomorphisms },
        Criterion { id: 11, name: "symmetry invariance and complement-inverse of H3", budget: None, run: symmetry_invariance },
        Criterion { id: 12, name: "first-rise distribution = ballot numbers", budget: None, run: first_rise_distribution },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(()), Some(b)) if took > b => Err(format!("took {took:.2?}, budget {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("acceptance {:>2} PASS  {}  ({:.2?})", c.id, c.name, took),
            Err(e) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {}  ({:.2?}): {e}", c.id, c.name, took);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
