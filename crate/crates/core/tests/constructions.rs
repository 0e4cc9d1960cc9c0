use benign_core::constructions::{
    a, b, build_ks, build_ms, c, c_exponent_sums, code_alphabet, codeword, d, e, fstar_endomorphisms, h, ms_britton,
    u_shift_endomorphism, v_element, KsNormaliser, NS_J,
};
use benign_core::godel::words_of_length;
use benign_core::smallcancel::{Encoder, JPrimeEncoder};
use benign_core::subgroup::graph_rank;
use benign_core::{IntegerSet, Word};
use proptest::prelude::*;

#[test]
fn shift_moves_v_elements_along() {
    for l in 4..=8 {
        let m = u_shift_endomorphism(l).unwrap();
        for s in -20..=20 {
            let shifted = m.substitute(&v_element(l, s).unwrap()).unwrap();
            assert_eq!(shifted, v_element(l, s + 1).unwrap(), "l = {l}, s = {s}");
        }
    }
}

#[test]
fn fstar_maps_keep_c_sums_divisible_by_ten() {
    for l in [4, 7, 13] {
        for (lambda, gamma, map) in fstar_endomorphisms(l).unwrap() {
            let mut gens = vec![a(), b(), e(), h()];
            gens.extend((0..=l).map(c));
            for x in gens {
                let sums = c_exponent_sums(map.get(&x).unwrap(), l);
                assert!(sums.iter().all(|s| s % 10 == 0), "{lambda:?} {x}: {sums:?}");
            }
            let sums = c_exponent_sums(map.get(&d()).unwrap(), l);
            assert!(sums.iter().all(|&s| s == gamma), "{lambda:?} d: {sums:?}");
        }
    }
}

#[test]
fn codewords_up_to_length_three_are_a_free_basis() {
    let gs: Vec<Word> = (0..=3)
        .flat_map(|n| words_of_length(n, &code_alphabet()))
        .map(|w| codeword(&w, 4).unwrap())
        .collect();
    assert_eq!(gs.len(), 85);
    assert_eq!(graph_rank(&gs), 85);
}

fn arb_set() -> impl Strategy<Value = IntegerSet> {
    prop::collection::btree_set(-8i64..=8, 0..6).prop_map(IntegerSet::with_zero)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn v_elements_freely_generate(set in arb_set(), l in 4usize..9) {
        let vs: Vec<Word> = set.values().iter().map(|&s| v_element(l, s).unwrap()).collect();
        prop_assert_eq!(graph_rank(&vs), set.len());
    }

    #[test]
    fn conjugated_v_elements_land_in_h_exactly_on_s(set in arb_set()) {
        let l = 13;
        let enc = JPrimeEncoder::new(l, set.clone(), NS_J).unwrap();
        let ks = build_ks(l, enc.presentation(), enc.marked()).unwrap();
        let hnn = ms_britton(&build_ms(l, &ks, enc.marked()).unwrap()).unwrap();
        let norm = KsNormaliser::new(l, &enc);
        let t = Word::letter(hnn.stable());
        for s in -10..=10 {
            let reduced = hnn.britton_reduce(&v_element(l, s).unwrap().conjugate_by(&t));
            let in_h = norm.in_h(&reduced).unwrap();
            prop_assert_eq!(in_h, enc.is_identity(&enc.diagonal(s)).unwrap());
            prop_assert_eq!(in_h, set.contains(s), "s = {}", s);
        }
    }
}
