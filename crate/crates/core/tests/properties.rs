use proptest::prelude::*;

use fine_core::bijection::{encode_tree_path, decode_tree_path, Transport};
use fine_core::families::FamilySpec;
use fine_core::numbers::{ballot, count_formula};
use fine_core::paths::{first_rise_transform, first_rise_untransform, path_to_word, word_to_path};
use fine_core::perm::filter_permutations;
use fine_core::words::{enumerate_fine_words, relation_from_word, word_from_relation};
use fine_core::{FineParams, Limits, PatternSet, Permutation, SimilarityWord, Symmetry};

fn permutation(max_len: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_len)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

// Letter i is chosen among 0..=prev+1.
fn similarity_word(max_len: usize) -> impl Strategy<Value = SimilarityWord> {
    prop::collection::vec(any::<u32>(), 0..max_len).prop_map(|choices| {
        let mut letters = vec![0u32];
        for c in choices {
            let prev = *letters.last().unwrap();
            letters.push(c % (prev + 2));
        }
        SimilarityWord::new(letters).unwrap()
    })
}

fn params() -> impl Strategy<Value = FineParams> {
    prop_oneof![Just((0, 2)), Just((1, 3)), Just((1, 2)), Just((2, 3)), Just((0, 3)), Just((1, 4))]
        .prop_map(|(p, q)| FineParams::new(p, q).unwrap())
}

fn symmetry() -> impl Strategy<Value = Symmetry> {
    prop_oneof![Just(Symmetry::Mirror), Just(Symmetry::Complement), Just(Symmetry::Inverse)]
}

proptest! {
    #[test]
    fn symmetries_are_involutions(p in permutation(9), s in symmetry()) {
        prop_assert_eq!(p.apply(s).apply(s), p);
    }

    #[test]
    fn avoidance_passes_to_patterns(p in permutation(8), set in prop::sample::select(fine_core::patterns::BUILTIN_SETS.to_vec())) {
        let set = PatternSet::builtin(set).unwrap();
        if p.avoids_all(&set) {
            for i in 0..p.len() {
                let mut v = p.values().to_vec();
                v.remove(i);
                prop_assert!(Permutation::standardize(&v).avoids_all(&set));
            }
        }
    }

    #[test]
    fn symmetry_preserves_avoidance(p in permutation(8), s in symmetry(), set in prop::sample::select(fine_core::patterns::BUILTIN_SETS.to_vec())) {
        let set = PatternSet::builtin(set).unwrap();
        prop_assert_eq!(p.avoids_all(&set), p.apply(s).avoids_all(&set.symmetry_set(&[s])));
    }

    #[test]
    fn relation_coding_round_trips(w in similarity_word(14)) {
        let r = relation_from_word(&w);
        prop_assert!(r.has_interval_property());
        prop_assert_eq!(r.is_nonsingular(), w.is_nonsingular());
        prop_assert_eq!(word_from_relation(&r).unwrap(), w.clone());
        prop_assert_eq!(r.to_string().parse::<fine_core::SimilarityRelation>().unwrap(), r);
    }

    #[test]
    fn word_paths_round_trip(fp in params(), n in 1usize..=10, pick in any::<prop::sample::Index>()) {
        let words = enumerate_fine_words(n, fp, &Limits::default()).unwrap();
        prop_assume!(!words.is_empty());
        let w = pick.get(&words);
        let path = word_to_path(w);
        prop_assert_eq!(path.semilength(), n);
        prop_assert_eq!(&path_to_word(&path, fp, true).unwrap(), w);
        let comps = path.primitive_components();
        let min_first = if fp.p() == 0 { fp.q() } else { fp.p() } as usize;
        prop_assert!(comps[0].first_rise() >= min_first);
        prop_assert!(comps[1..].iter().all(|c| c.first_rise() >= fp.q() as usize));
        let t = first_rise_transform(&path, fp).unwrap();
        let r = t.first_rise();
        prop_assert!(r >= fp.p() as usize && (r - fp.p() as usize) % fp.q() as usize == 0);
        prop_assert_eq!(first_rise_untransform(&t, fp).unwrap(), path);
    }

    #[test]
    fn formula_matches_enumeration(fp in params(), n in 1u32..=10) {
        let listed = enumerate_fine_words(n as usize, fp, &Limits::default()).unwrap().len();
        prop_assert_eq!(count_formula(n, fp), num_bigint::BigUint::from(listed));
    }

    #[test]
    fn tree_paths_round_trip(
        name in prop::sample::select(vec!["F1", "F2", "F3", "DER", "H1", "H1STAR", "H2", "H3", "H4", "H3IC", "H5", "WORD(1,3)", "WORD(2,3)"]),
        level in 1usize..=6,
        pick in any::<prop::sample::Index>(),
    ) {
        let fam = FamilySpec::builtin(name).unwrap();
        let objs = fam.oracle_level(level, &Limits::default()).unwrap();
        let obj = pick.get(&objs);
        let path = encode_tree_path(obj, &fam).unwrap();
        prop_assert_eq!(&decode_tree_path(&path, &fam).unwrap(), obj);
        if let Ok((father, _)) = fam.father_of(obj) {
            prop_assert!(fam.children_of(&father).unwrap().iter().any(|c| &c.object == obj));
        }
    }

    #[test]
    fn transport_round_trips(
        pair in prop::sample::select(fine_core::bijection::registered_pairs()),
        level in 2usize..=6,
        pick in any::<prop::sample::Index>(),
    ) {
        let (a, b) = (FamilySpec::builtin(&pair.0).unwrap(), FamilySpec::builtin(&pair.1).unwrap());
        let t = Transport::new(&a, &b).unwrap();
        let objs = a.oracle_level(level, &Limits::default()).unwrap();
        let obj = pick.get(&objs);
        let img = t.apply(obj).unwrap();
        prop_assert!(b.contains(&img));
        prop_assert_eq!(&t.inverse().unwrap().apply(&img).unwrap(), obj);
    }
}

#[test]
fn ballot_rows_sum_to_catalan() {
    for n in 1..=12u32 {
        let s: num_bigint::BigUint = (1..=n).map(|k| ballot(n, k)).sum();
        assert_eq!(s, fine_core::numbers::catalan(n));
    }
}

#[test]
fn ballot_matches_path_filter() {
    for n in 1..=9usize {
        let paths = fine_core::paths::enumerate_dyck_paths(n);
        for k in 0..=n {
            let c = paths.iter().filter(|p| p.first_rise() == k).count();
            assert_eq!(ballot(n as u32, k as u32), num_bigint::BigUint::from(c), "n={n} k={k}");
        }
    }
}

#[test]
fn similarity_words_are_catalan() {
    for n in 1..=10 {
        let c = fine_core::words::enumerate_similarity_words(n).len();
        assert_eq!(num_bigint::BigUint::from(c), fine_core::numbers::catalan(n as u32));
    }
}

#[test]
fn symmetric_classes_have_equal_counts() {
    let lim = Limits::default();
    let all = filter_permutations(6, |_| true);
    assert_eq!(all.len(), 720);
    for name in fine_core::patterns::BUILTIN_SETS {
        let set = PatternSet::builtin(name).unwrap();
        let base = fine_core::perm::enumerate_avoiders(6, &set, &lim).unwrap().len();
        for ops in [[Symmetry::Mirror], [Symmetry::Complement], [Symmetry::Inverse]] {
            let other = fine_core::perm::enumerate_avoiders(6, &set.symmetry_set(&ops), &lim).unwrap().len();
            assert_eq!(base, other, "{name} {ops:?}");
        }
    }
}
