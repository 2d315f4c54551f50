use fine_core::bijection::{
    decode_tree_path, encode_tree_path, from_relation, registered_pairs, to_relation, verify_bijection, Transport,
};
use fine_core::families::FamilySpec;
use fine_core::words::relation_from_word;
use fine_core::{Limits, SimilarityWord};

fn fam(n: &str) -> FamilySpec {
    FamilySpec::builtin(n).unwrap()
}

#[test]
fn registered_pairs_are_bijective_to_depth_seven() {
    let lim = Limits::default();
    for (a, b) in registered_pairs() {
        let r = verify_bijection(&fam(&a), &fam(&b), 7, &lim).unwrap();
        assert!(r.is_clean(), "{a} -> {b}: {:?}", r.first_violation);
    }
}

#[test]
fn paths_round_trip_in_every_family() {
    let lim = Limits::default();
    for name in ["F1", "DER", "H1", "H3IC", "WORD(1,3)", "WORD(0,2)"] {
        let f = fam(name);
        for level in 1..=6 {
            for obj in f.oracle_level(level, &lim).unwrap() {
                let path = encode_tree_path(&obj, &f).unwrap();
                assert_eq!(path.keys().iter().map(|k| k.delay as usize).sum::<usize>(), level - 1);
                assert_eq!(decode_tree_path(&path, &f).unwrap(), obj);
                assert_eq!(path.to_string().parse::<fine_core::TreePath>().unwrap(), path);
            }
        }
    }
}

#[test]
fn derangements_match_nonsingular_relations() {
    let lim = Limits::default();
    let der = fam("DER");
    for level in 1..=6 {
        let n = level + 1;
        let mut images = Vec::new();
        for d in der.oracle_level(level, &lim).unwrap() {
            let rel = to_relation(&d, &der).unwrap();
            assert_eq!(rel.n(), n);
            assert!(rel.is_nonsingular() && rel.has_interval_property());
            assert_eq!(from_relation(&rel, &der).unwrap(), d);
            images.push(rel.to_string());
        }
        let mut all: Vec<String> = fine_core::words::enumerate_similarity_words(n)
            .into_iter()
            .filter(SimilarityWord::is_nonsingular)
            .map(|w| relation_from_word(&w).to_string())
            .collect();
        images.sort();
        all.sort();
        assert_eq!(images, all, "n = {n}");
    }
}

#[test]
fn inverse_transport_undoes_forward() {
    let t = Transport::new(&fam("H2"), &fam("H4")).unwrap();
    let back = t.inverse().unwrap();
    for obj in fam("H2").oracle_level(6, &Limits::default()).unwrap() {
        assert_eq!(back.apply(&t.apply(&obj).unwrap()).unwrap(), obj);
    }
}
