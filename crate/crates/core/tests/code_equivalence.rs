mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semiso::code::{
    ccz_equivalent_planar, code_from_function, coordinate_signatures, monomial_equivalent, weight_enumerator,
    EquivalenceVerdict, LinearCode, SearchCaps,
};
use semiso::fmap::PolyMap;
use semiso::gf::Elem;

fn verdict_matches_oracle(f: &PolyMap, g: &PolyMap) {
    let oracle = oracle_affine_equivalent(f, g).is_some();
    let v = ccz_equivalent_planar(f, g, &SearchCaps::default()).unwrap();
    assert!(
        !matches!(v, EquivalenceVerdict::Unknown { .. }),
        "{f} vs {g}: unknown"
    );
    assert_eq!(v.is_equivalent(), oracle, "{f} vs {g}: engine {v:?}");
    if let Some(cert) = v.certificate() {
        assert!(cert.verify(&code_from_function(f), &code_from_function(g)));
    }
}

#[test]
fn f27_monomials_against_oracle() {
    let k = f27();
    let x2 = PolyMap::monomial(&k, Elem::ONE, 2);
    let x4 = PolyMap::monomial(&k, Elem::ONE, 4);
    let x10 = PolyMap::monomial(&k, Elem::ONE, 10);
    assert!(oracle_affine_equivalent(&x2, &x4).is_none());
    assert!(oracle_affine_equivalent(&x4, &x10).is_some());
    verdict_matches_oracle(&x2, &x4);
    verdict_matches_oracle(&x4, &x10);
    verdict_matches_oracle(&x2, &x10);
}

#[test]
fn f27_random_planar_pairs_against_oracle() {
    let k = f27();
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let fs = planar_do_candidates(&k, &mut rng, 4);
    let x2 = PolyMap::monomial(&k, Elem::ONE, 2);
    for f in &fs {
        verdict_matches_oracle(&x2, f);
        let g = random_ea_transform(f, &mut rng);
        verdict_matches_oracle(f, &g);
    }
    verdict_matches_oracle(&fs[0], &fs[1]);
    verdict_matches_oracle(&fs[2], &fs[3]);
}

#[test]
fn f9_positive_controls() {
    let k = f9();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = PolyMap::monomial(&k, Elem::ONE, 2);
    let c1 = code_from_function(&f);
    let we1 = weight_enumerator(&c1, 16).unwrap();
    for _ in 0..10 {
        let g = random_ea_transform(&f, &mut rng);
        let c2 = code_from_function(&g);
        let v = monomial_equivalent(&c1, &c2, &SearchCaps::default()).unwrap();
        let cert = v.certificate().expect("EA transforms are equivalent");
        assert!(cert.verify(&c1, &c2));
        // the weight distribution of the transformed generator is unchanged
        let moved = LinearCode::new(cert.apply(c1.generator()));
        assert_eq!(weight_enumerator(&moved, 16).unwrap(), we1);
        assert_eq!(weight_enumerator(&c2, 16).unwrap(), we1);
    }
}

#[test]
fn signature_multiset_is_invariant_under_linear_permutations() {
    let k = f27();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = PolyMap::from_int_terms(&k, &[(4, 1), (2, 1)]);
    let sorted = |c: &LinearCode| {
        let mut s = coordinate_signatures(c, 16).unwrap();
        s.sort();
        s
    };
    let base = sorted(&code_from_function(&f));
    for _ in 0..5 {
        let l = random_linear_permutation(&k, &mut rng);
        let g = f.compose(&l).unwrap();
        assert_eq!(sorted(&code_from_function(&g)), base);
    }
}

#[test]
fn non_planar_input_is_rejected() {
    let k = f9();
    let x2 = PolyMap::monomial(&k, Elem::ONE, 2);
    let x4 = PolyMap::monomial(&k, Elem::ONE, 4);
    assert!(ccz_equivalent_planar(&x2, &x4, &SearchCaps::default()).is_err());
}

#[test]
fn verdict_json_roundtrip() {
    let k = f9();
    let f = PolyMap::monomial(&k, Elem::ONE, 2);
    let g = PolyMap::monomial(&k, Elem(4), 2);
    let v = ccz_equivalent_planar(&f, &g, &SearchCaps::default()).unwrap();
    let s = serde_json::to_string(&v).unwrap();
    assert!(s.contains("\"verdict\":\"equivalent\""));
    let back: EquivalenceVerdict = serde_json::from_str(&s).unwrap();
    assert_eq!(back, v);
}
