use std::collections::{HashMap, HashSet};

use benign_core::britton::{ascending_image_graphs, BrittonHNN};
use benign_core::godel::{decode, encode, words_of_length, CodeAlphabet};
use benign_core::homology::{boundary_certificate, cayley_ball, find_certificate, verify_certificate, FiniteOracle};
use benign_core::presentation::{
    abelianized_relation_matrix, amalgamated_product, canonical_relator, direct_product, hnn_extend,
    tietze_eliminate,
};
use benign_core::smallcancel::{c16_is_identity, dehn_reduce};
use benign_core::subgroup::graph_rank;
use benign_core::{Alphabet, Generator, GeneratorMap, HNNDescriptor, Letter, Presentation, Sign, SubgroupGraph, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn g(name: &str) -> Generator {
    Generator::plain(name)
}

fn w(text: &str) -> Word {
    text.parse().unwrap()
}

fn alphabet(names: &[&str]) -> Alphabet {
    names.iter().map(|n| g(n)).collect()
}

fn word_over(names: &'static [&'static str], max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..names.len(), any::<bool>()), 0..=max_len).prop_map(move |letters| {
        Word::from_letters(
            letters
                .into_iter()
                .map(|(i, neg)| Letter::new(g(names[i]), if neg { Sign::Neg } else { Sign::Pos })),
        )
    })
}

fn random_word(rng: &mut ChaCha8Rng, names: &[&str], len: usize) -> Word {
    Word::from_letters((0..len).map(|_| {
        let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
        Letter::new(g(names[rng.gen_range(0..names.len())]), sign)
    }))
}

fn presentation(names: &[&str], relators: &[Word]) -> Presentation {
    let mut p = Presentation::free(names.iter().map(|n| g(n)));
    for r in relators {
        p.add_relator(r).unwrap();
    }
    p
}

// Torsion factors and free rank of the abelianization.
fn abelian_type(p: &Presentation) -> (usize, Vec<i64>) {
    let m = abelianized_relation_matrix(p, 0);
    let inv = m.smith_invariants().unwrap();
    let torsion = inv.iter().map(|d| d.abs()).filter(|&d| d != 1).collect();
    (m.cols() - inv.len(), torsion)
}

// t⁻¹ a t = b², t⁻¹ (b a b⁻¹) t = a³ over the free group on a, b.
const A_GENS: [&str; 2] = ["a", "b a b'"];
const B_GENS: [&str; 2] = ["b^2", "a^3"];

fn hnn() -> BrittonHNN {
    let pairs: Vec<(Word, Word)> = A_GENS.iter().zip(B_GENS).map(|(x, y)| (w(x), w(y))).collect();
    BrittonHNN::new(alphabet(&["a", "b"]), g("t"), &pairs).unwrap()
}

// Words rich in pinches: stable letters wrapped around associated-subgroup
// elements, interleaved with noise.
fn pinchy_word(rng: &mut ChaCha8Rng, depth: usize) -> Word {
    let mut out = Word::empty();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(0..4);
        let piece = match rng.gen_range(0..4) {
            0 => random_word(rng, &["a", "b"], len),
            1 | 2 if depth > 0 => {
                let (gens, outer) = if rng.gen_bool(0.5) { (&A_GENS, "t'") } else { (&B_GENS, "t") };
                let mut inner = Word::empty();
                for _ in 0..rng.gen_range(0..3) {
                    inner = inner.mul(&w(gens[rng.gen_range(0..2)]).pow(if rng.gen_bool(0.5) { 1 } else { -1 }));
                }
                if rng.gen_bool(0.3) {
                    inner = inner.mul(&pinchy_word(rng, depth - 1));
                }
                let t = w(outer);
                t.mul(&inner).mul(&t.inverse())
            }
            _ => random_word(rng, &["a", "b", "t"], len % 3),
        };
        out = out.concat(&piece);
    }
    out
}

#[test]
fn pinch_order_never_changes_the_decision() {
    let h = hnn();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb417);
    let mut trivial = 0;
    for _ in 0..10_000 {
        let mut x = pinchy_word(&mut rng, 3);
        while x.len() > 30 {
            x = pinchy_word(&mut rng, 2);
        }
        let expected = h.hnn_is_identity(&x);
        trivial += expected as usize;
        let mut pinches = 0;
        let mut order = ChaCha8Rng::seed_from_u64(rng.gen());
        let r = h.britton_reduce_by(&x, |n| {
            pinches += 1;
            order.gen_range(0..n)
        });
        assert_eq!(r.is_empty(), expected, "{x}");
        assert_eq!(h.stable_count(&x.reduce()), h.stable_count(&r) + 2 * pinches, "{x}");
        assert_eq!(h.britton_reduce(&x).is_empty(), expected);
    }
    assert!(trivial > 100, "only {trivial} trivial samples");
}

#[test]
fn dehn_agrees_with_rewriting_graph() {
    // a² b a b⁻¹ a c: every cyclic two-letter subword of it and its inverse
    // is distinct, so pieces have length 1 and 1/7 < 1/6.
    let r = w("a^2 b a b' a c");
    let p = presentation(&["a", "b", "c"], std::slice::from_ref(&r));
    let bound = 7;
    let letters: Vec<(usize, i8)> = (0..3).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let names = ["a", "b", "c"];

    // cyclic conjugates of r and r⁻¹ as letter vectors
    let to_vec = |x: &Word| -> Vec<(usize, i8)> {
        x.letters()
            .map(|l| (names.iter().position(|n| g(n) == l.generator).unwrap(), l.sign.value() as i8))
            .collect()
    };
    let mut cycles = Vec::new();
    for base in [to_vec(&r), to_vec(&r.inverse())] {
        for k in 0..base.len() {
            let mut c = base[k..].to_vec();
            c.extend_from_slice(&base[..k]);
            cycles.push(c);
        }
    }
    let reduce = |v: Vec<(usize, i8)>| -> Vec<(usize, i8)> {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for x in v {
            if out.last() == Some(&(x.0, -x.1)) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    };

    // every freely reduced word of length ≤ bound
    let mut words: Vec<Vec<(usize, i8)>> = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..bound {
        let mut next = Vec::new();
        for v in &layer {
            for &x in &letters {
                if v.last() == Some(&(x.0, -x.1)) {
                    continue;
                }
                let mut u: Vec<(usize, i8)> = v.clone();
                u.push(x);
                next.push(u);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let index: HashMap<Vec<(usize, i8)>, usize> = words.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    // replace a subword u by v whenever u v⁻¹ is a cyclic conjugate of r^±1
    for (i, v) in words.iter().enumerate() {
        for start in 0..=v.len() {
            for c in &cycles {
                for cut in 0..=c.len() {
                    let (u, rest) = c.split_at(cut);
                    if start + u.len() > v.len() || &v[start..start + u.len()] != u {
                        continue;
                    }
                    let replacement: Vec<(usize, i8)> = rest.iter().rev().map(|&(gi, s)| (gi, -s)).collect();
                    let mut out = v[..start].to_vec();
                    out.extend(replacement);
                    out.extend_from_slice(&v[start + u.len()..]);
                    let out = reduce(out);
                    if let Some(&j) = index.get(&out) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
        }
    }

    let identity = find(&mut parent, 0);
    let mut trivial = 0;
    for (i, v) in words.iter().enumerate() {
        let bfs = find(&mut parent, i) == identity;
        trivial += bfs as usize;
        let word = Word::from_letters(
            v.iter().map(|&(gi, s)| Letter::new(g(names[gi]), if s > 0 { Sign::Pos } else { Sign::Neg })),
        );
        assert_eq!(c16_is_identity(&p, &word).unwrap(), bfs, "{word}");
    }
    // the empty word and the 14 cyclic conjugates of r^±1
    assert_eq!(trivial, 15);
}

#[test]
fn godel_codes_exhaustive_to_length_six() {
    let alphabet = CodeAlphabet::plain();
    let mut seen = HashSet::new();
    for n in 0..=6 {
        for word in words_of_length(n, &alphabet) {
            let code = encode(&word).unwrap();
            assert!(code.digits().iter().all(|d| (1..=4).contains(d)));
            assert_eq!(code.digits().len(), n);
            assert_eq!(decode(&code), word);
            assert!(seen.insert(code.to_string()), "collision at {word}");
        }
    }
    assert_eq!(seen.len(), (0..=6).map(|n| 4usize.pow(n)).sum::<usize>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stable_letters_drop_in_pairs(x in word_over(&["a", "b", "t"], 30)) {
        let h = hnn();
        let r = h.britton_reduce(&x);
        let before = h.stable_count(&x.reduce());
        prop_assert!(h.stable_count(&r) <= before);
        prop_assert_eq!((before - h.stable_count(&r)) % 2, 0);
        prop_assert!(h.hnn_is_identity(&r.mul(&h.britton_reduce(&x).inverse())));
    }

    #[test]
    fn conjugating_a_member_applies_the_isomorphism(
        picks in prop::collection::vec((0..2usize, any::<bool>()), 0..8),
    ) {
        let h = hnn();
        let mut x = Word::empty();
        let mut image = Word::empty();
        for (i, neg) in picks {
            let k = if neg { -1 } else { 1 };
            x = x.mul(&w(A_GENS[i]).pow(k));
            image = image.mul(&w(B_GENS[i]).pow(k));
        }
        let t = w("t");
        prop_assert!(h.hnn_is_identity(&t.inverse().mul(&x).mul(&t).mul(&image.inverse())));
        prop_assert!(h.hnn_is_identity(&t.mul(&image).mul(&t.inverse()).mul(&x.inverse())));
    }

    #[test]
    fn ascending_membership_matches_direct_folds(u in word_over(&["a", "b"], 6), x in word_over(&["a", "b"], 10)) {
        let base = alphabet(&["a", "b"]);
        let phi: GeneratorMap = [(g("a"), w("a b")), (g("b"), w("b a b"))].into_iter().collect();
        let graphs = ascending_image_graphs(&base, &phi, 3).unwrap();
        let mut image = u.clone();
        let mut gens = vec![w("a"), w("b")];
        for graph in &graphs {
            image = phi.substitute(&image).unwrap();
            gens = gens.iter().map(|y| phi.substitute(y).unwrap()).collect();
            let direct = SubgroupGraph::fold(&gens);
            prop_assert!(graph.contains(&image));
            prop_assert_eq!(graph.contains(&x), direct.contains(&x));
        }
    }

    #[test]
    fn redundant_generators_keep_the_rank(gens in prop::collection::vec(word_over(&["a", "b", "c"], 6), 1..5),
                                          i in 0usize..5, j in 0usize..5) {
        let rank = graph_rank(&gens);
        prop_assert!(rank <= gens.len());
        let mut more = gens.clone();
        more.push(gens[i % gens.len()].mul(&gens[j % gens.len()]));
        prop_assert_eq!(graph_rank(&more), rank);
        prop_assert!(SubgroupGraph::fold(&more).same_graph(&SubgroupGraph::fold(&gens)));
    }

    #[test]
    fn powers_of_distinct_generators_are_free(ks in prop::collection::vec(1i64..5, 3)) {
        let gens: Vec<Word> = ["a", "b", "c"].iter().zip(&ks).map(|(n, &k)| Word::power(&g(n), k)).collect();
        prop_assert_eq!(graph_rank(&gens), 3);
    }

    #[test]
    fn hnn_adds_one_relator_per_pair(rels in prop::collection::vec(word_over(&["a", "b", "c"], 6), 0..4),
                                     images in prop::collection::vec(word_over(&["a", "b", "c"], 4), 1..4)) {
        // an empty image makes t⁻¹ x t cyclically equal to x, which may
        // coincide with a base relator
        prop_assume!(images.iter().all(|y| !y.reduce().is_empty()));
        let base = presentation(&["a", "b", "c"], &rels);
        let pairs: Vec<(Word, Word)> = ["a", "b", "c"].iter().zip(images).map(|(n, y)| (w(n), y)).collect();
        let n = pairs.len();
        let d = HNNDescriptor::new(base.clone(), g("t"), pairs).unwrap();
        let out = hnn_extend(&d).unwrap();
        prop_assert_eq!(out.relators().len(), base.relators().len() + n);
    }

    #[test]
    fn direct_product_is_symmetric(pr in prop::collection::vec(word_over(&["a", "b"], 5), 0..3),
                                   qr in prop::collection::vec(word_over(&["x", "y"], 5), 0..3)) {
        let p = presentation(&["a", "b"], &pr);
        let q = presentation(&["x", "y"], &qr);
        let pq = direct_product(&p, &q).unwrap();
        let qp = direct_product(&q, &p).unwrap();
        let gens = |s: &Presentation| s.generators().iter().cloned().collect::<HashSet<_>>();
        let rels = |s: &Presentation| {
            let mut v: Vec<String> = s.relators().iter().map(|r| canonical_relator(r).to_string()).collect();
            v.sort();
            v
        };
        prop_assert_eq!(gens(&pq), gens(&qp));
        prop_assert_eq!(rels(&pq), rels(&qp));
    }

    #[test]
    fn amalgams_contain_pair_relators(a1 in word_over(&["a", "b"], 4), b1 in word_over(&["x", "y"], 4),
                                      a2 in word_over(&["a", "b"], 4), b2 in word_over(&["x", "y"], 4)) {
        let p = presentation(&["a", "b"], &[]);
        let q = presentation(&["x", "y"], &[w("x^3")]);
        let pairs = vec![(a1, b1), (a2, b2)];
        let out = amalgamated_product(&p, &q, &pairs).unwrap();
        for (a, b) in &pairs {
            let r = a.mul(&b.inverse()).reduce();
            prop_assert!(r.is_empty() || out.has_relator(&r));
        }
    }

    #[test]
    fn tietze_preserves_the_abelianization(d in word_over(&["x", "z"], 5),
                                           rels in prop::collection::vec(word_over(&["x", "y", "z"], 6), 0..3)) {
        let mut all = rels;
        all.push(w("y").mul(&d.inverse()));
        let p = presentation(&["x", "y", "z"], &all);
        let q = tietze_eliminate(&p, &g("y"), &d).unwrap();
        prop_assert!(!q.generators().contains(&g("y")));
        prop_assert_eq!(abelian_type(&p), abelian_type(&q));
    }

    #[test]
    fn dehn_is_shortening_and_stable(x in word_over(&["a", "b", "c"], 24), rot in 0usize..24) {
        let p = presentation(&["a", "b", "c"], &[w("a^2 b a b' a c")]);
        let r = dehn_reduce(&p, &x).unwrap();
        prop_assert!(r.len() <= x.reduce().len());
        prop_assert_eq!(dehn_reduce(&p, &r).unwrap(), r.clone());
        let trivial = c16_is_identity(&p, &x).unwrap();
        prop_assert_eq!(trivial, r.is_empty());
        let y = x.rotate_left(rot % (x.len() + 1));
        prop_assert_eq!(c16_is_identity(&p, &y).unwrap(), trivial);
        prop_assert_eq!(c16_is_identity(&p, &x.inverse()).unwrap(), trivial);
    }

    #[test]
    fn trivial_words_lie_in_the_relation_span(conj in prop::collection::vec((word_over(&["a", "b", "c"], 4), any::<bool>()), 1..4),
                                             noise in word_over(&["a", "b", "c"], 3)) {
        let r = w("a^2 b a b' a c");
        let p = presentation(&["a", "b", "c"], std::slice::from_ref(&r));
        let mut x = Word::empty();
        for (u, neg) in conj {
            x = x.mul(&r.pow(if neg { -1 } else { 1 }).conjugate_by(&u));
        }
        let m = abelianized_relation_matrix(&p, 0);
        for candidate in [x.clone(), x.mul(&noise)] {
            if c16_is_identity(&p, &candidate).unwrap() {
                prop_assert!(m.solve_row_combination(&p.exponent_vector(&candidate)).unwrap().is_some());
            }
        }
        prop_assert!(c16_is_identity(&p, &x).unwrap());
    }

    #[test]
    fn presentations_print_and_parse_back(rels in prop::collection::vec(word_over(&["a", "b", "c"], 8), 0..4)) {
        let p = presentation(&["a", "b", "c"], &rels);
        let text = p.to_string();
        let q: Presentation = text.parse().unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(q.to_string(), text);
    }

    #[test]
    fn godel_codes_concatenate(u in word_over(&["a", "b"], 20), v in word_over(&["a", "b"], 20)) {
        let joined = encode(&u.concat(&v)).unwrap();
        prop_assert_eq!(joined, encode(&u).unwrap().concat(&encode(&v).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // S₃ = ⟨a, b | a³, b², (ab)²⟩ with all relators designated.
    #[test]
    fn certificates_are_sound_and_monotone(conj in prop::collection::vec((0usize..3, word_over(&["a", "b"], 2)), 1..3)) {
        let names = ["a", "b"];
        let rels = vec![w("a^3"), w("b^2"), w("a b a b")];
        let alpha = alphabet(&names);
        let oracle = FiniteOracle::new(&alpha, &rels, 100).unwrap();
        let mut target = Word::empty();
        for (i, u) in &conj {
            target = target.mul(&rels[*i].conjugate_by(u));
        }
        let cert = find_certificate(&alpha, &rels, &oracle, &target, 3).unwrap();
        prop_assert!(verify_certificate(&alpha, &rels, &oracle, &cert).unwrap());

        let bigger = cayley_ball(&alpha, &rels, &oracle, cert.radius + 1).unwrap();
        prop_assert!(boundary_certificate(&bigger, &target).unwrap().is_some());

        // exponent sums of the target lie in the span of the designated rows
        let p = presentation(&names, &rels);
        let m = abelianized_relation_matrix(&p, 0);
        prop_assert!(m.solve_row_combination(&p.exponent_vector(&target)).unwrap().is_some());

        // a tampered chain is rejected
        if let Some(first) = cert.cells.first() {
            let mut forged = cert.clone();
            forged.cells.push(benign_core::homology::CellCoefficient { coefficient: 1, ..first.clone() });
            prop_assert!(!verify_certificate(&alpha, &rels, &oracle, &forged).unwrap());
        }
    }
}
