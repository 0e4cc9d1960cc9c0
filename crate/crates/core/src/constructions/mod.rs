//! The groups, subgroups and maps of the embedding construction.
//!
//! Generators are namespaced by stage: `F.` for the free group
//! `F = ⟨a, b, c_0 … c_l, d, e, h⟩`, `J.` for the encoder, `M.` for the
//! stable letters `t` and `u`, `Fstar.` for the four `u_λ`, `GH.` for the
//! centralizing letter and `rope.` for the rope-trick letter.

mod groups;
mod normaliser;
mod pipeline;

use crate::britton::BrittonHNN;
use crate::error::{Error, Result};
use crate::godel::{encode_with, CodeAlphabet};
use crate::presentation::Presentation;
use crate::words::{Alphabet, Generator, GeneratorMap, Letter, Sign, Word};

pub use groups::{
    approximate_normal_closure, build_gh, build_ks, build_ms, build_ys, compute_sn, embed_two_generator,
    jprime_presentation, ms_britton, rope_trick, RopeTrick, SubgroupInput, TwoGeneratorEmbedding,
};
pub use normaliser::{KsNormaliser, KsSyllable};
pub use pipeline::{run_pipeline, Certificate, PipelineBounds, PipelineBundle, SubgroupData, STAGES};

pub const NS_F: &str = "F";
pub const NS_J: &str = "J";
pub const NS_M: &str = "M";
pub const NS_FSTAR: &str = "Fstar";
pub const NS_GH: &str = "GH";
pub const NS_ROPE: &str = "rope";
pub const NS_QUOTIENT: &str = "FmodR";

pub fn a() -> Generator {
    Generator::new(NS_F, "a", None)
}

pub fn b() -> Generator {
    Generator::new(NS_F, "b", None)
}

pub fn c(i: usize) -> Generator {
    Generator::indexed(NS_F, "c", i as u32)
}

pub fn d() -> Generator {
    Generator::new(NS_F, "d", None)
}

pub fn e() -> Generator {
    Generator::new(NS_F, "e", None)
}

pub fn h() -> Generator {
    Generator::new(NS_F, "h", None)
}

pub fn j(i: usize) -> Generator {
    Generator::indexed(NS_J, "j", i as u32)
}

/// Gödel alphabet `{F.a, F.b}`.
pub fn code_alphabet() -> CodeAlphabet {
    CodeAlphabet::new(a(), b())
}

fn check_l(l: usize) -> Result<()> {
    if l < 4 {
        return Err(Error::InvalidParameter(format!("l must be at least 4, got {l}")));
    }
    Ok(())
}

/// `c_0 … c_l, d, e`: the free group `H` carrying the `v_s`.
pub fn h_alphabet(l: usize) -> Alphabet {
    (0..=l).map(c).chain([d(), e()]).collect()
}

/// `a, b, c_0 … c_l, d, e, h`.
pub fn f_alphabet(l: usize) -> Alphabet {
    [a(), b()].into_iter().chain((0..=l).map(c)).chain([d(), e(), h()]).collect()
}

/// `v_s = c_0^s c_1^s ⋯ c_l^s d e^s`.
pub fn v_element(l: usize, s: i64) -> Result<Word> {
    check_l(l)?;
    let cs: Vec<Generator> = (0..=l).map(c).collect();
    let mut w = Word::empty();
    for g in &cs {
        w.push_reduced(g, s);
    }
    w.push_reduced(&d(), 1);
    w.push_reduced(&e(), s);
    Ok(w)
}

/// `c_0^k c_1^k ⋯ c_{i-1}^k`.
fn c_prefix(i: usize, k: i64) -> Word {
    let mut w = Word::empty();
    for m in 0..i {
        w.push_reduced(&c(m), k);
    }
    w
}

/// The endomorphism `x ↦ u⁻¹ x u` of `H`:
/// `c_i ↦ c_0 ⋯ c_{i-1} c_i c_{i-1}⁻¹ ⋯ c_0⁻¹`, `d ↦ c_0 ⋯ c_l d e`, `e ↦ e`.
pub fn u_shift_endomorphism(l: usize) -> Result<GeneratorMap> {
    check_l(l)?;
    let mut map = GeneratorMap::new();
    for i in 0..=l {
        let p = c_prefix(i, 1);
        map.insert(c(i), p.mul(&Word::letter(&c(i))).mul(&p.inverse()));
    }
    map.insert(d(), c_prefix(l + 1, 1).mul(&Word::letter(&d())).mul(&Word::letter(&e())));
    map.insert(e(), Word::letter(&e()));
    Ok(map)
}

/// The ascending extension `⟨H, u | u⁻¹ x u = φ_u(x)⟩`.
pub fn u_extension(l: usize) -> Result<BrittonHNN> {
    BrittonHNN::ascending(h_alphabet(l), Generator::new(NS_M, "u", None), &u_shift_endomorphism(l)?)
}

/// `γ(w)` for a word over `{F.a, F.b}`, as an integer.
pub fn gamma(w: &Word) -> Result<i64> {
    encode_with(w, &code_alphabet())?.to_i64().ok_or(Error::Overflow)
}

/// `g_w = w h c_0^γ c_1^γ ⋯ c_l^γ d e^γ` with `γ = γ(w)`. The code is
/// taken from `w` as spelled, so unreduced spellings give distinct
/// codewords.
pub fn codeword(w: &Word, l: usize) -> Result<Word> {
    check_l(l)?;
    let g = gamma(w)?;
    let mut tail = Word::letter(&h());
    for i in 0..=l {
        tail.push_reduced(&c(i), g);
    }
    tail.push_reduced(&d(), 1);
    tail.push_reduced(&e(), g);
    Ok(w.mul(&tail))
}

/// `(λ, γ(λ), φ_λ)` for `λ = a, b, a⁻¹, b⁻¹`, where `φ_λ(x) = u_λ⁻¹ x u_λ`.
pub fn fstar_endomorphisms(l: usize) -> Result<Vec<(Letter, i64, GeneratorMap)>> {
    check_l(l)?;
    let lambdas = [
        Letter::new(a(), Sign::Pos),
        Letter::new(b(), Sign::Pos),
        Letter::new(a(), Sign::Neg),
        Letter::new(b(), Sign::Neg),
    ];
    let mut out = Vec::new();
    for (k, lambda) in lambdas.into_iter().enumerate() {
        let g = k as i64 + 1;
        let lw = Word::from_letters([lambda.clone()]);
        let mut map = GeneratorMap::new();
        map.insert(a(), Word::letter(&a()));
        map.insert(b(), Word::letter(&b()));
        for i in 0..=l {
            let p = c_prefix(i, g);
            map.insert(c(i), p.mul(&Word::power(&c(i), 10)).mul(&p.inverse()));
        }
        let mut dimg = c_prefix(l + 1, g);
        dimg.push_reduced(&d(), 1);
        dimg.push_reduced(&e(), g);
        map.insert(d(), dimg);
        map.insert(e(), Word::power(&e(), 10));
        map.insert(h(), lw.mul(&Word::letter(&h())));
        out.push((lambda, g, map));
    }
    Ok(out)
}

/// Stable letter `u_λ` of `F*`.
pub fn fstar_stable(lambda: &Letter) -> Generator {
    let name = match (lambda.generator.name(), lambda.sign) {
        ("a", Sign::Pos) => "ua",
        ("b", Sign::Pos) => "ub",
        ("a", Sign::Neg) => "uA",
        _ => "uB",
    };
    Generator::new(NS_FSTAR, name, None)
}

/// `F*` as four single-letter ascending extensions of `F`, in the order
/// `u_a, u_b, u_{a⁻¹}, u_{b⁻¹}`.
pub fn fstar_extensions(l: usize) -> Result<Vec<(Letter, BrittonHNN)>> {
    fstar_endomorphisms(l)?
        .into_iter()
        .map(|(lambda, _, map)| {
            let hnn = BrittonHNN::ascending(f_alphabet(l), fstar_stable(&lambda), &map)?;
            Ok((lambda, hnn))
        })
        .collect()
}

/// `F*`: `F` with the four stable letters `u_λ` and the relators
/// `u_λ⁻¹ x u_λ = φ_λ(x)`.
pub fn fstar_presentation(l: usize) -> Result<Presentation> {
    let mut p = Presentation::free(f_alphabet(l));
    for (lambda, _, map) in fstar_endomorphisms(l)? {
        let u = Word::letter(&fstar_stable(&lambda));
        p.add_generator(fstar_stable(&lambda))?;
        for (x, y) in map.iter() {
            p.add_relator(&Word::letter(x).conjugate_by(&u).mul(&y.inverse()))?;
        }
    }
    Ok(p)
}

/// Exponent sums of `c_0 … c_l` in `w`.
pub fn c_exponent_sums(w: &Word, l: usize) -> Vec<i64> {
    (0..=l).map(|i| w.exponent_sum(&c(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::godel::words_of_length;
    use crate::subgroup::graph_rank;

    fn f(s: &str) -> Word {
        // spell F-words without the namespace
        let w: Word = s.parse().unwrap();
        w.map_generators(|g| g.with_namespace(NS_F))
    }

    #[test]
    fn v_elements() {
        assert_eq!(v_element(4, 0).unwrap(), f("d"));
        assert_eq!(v_element(4, 1).unwrap(), f("c_0 c_1 c_2 c_3 c_4 d e"));
        assert_eq!(v_element(4, -1).unwrap(), f("c_0' c_1' c_2' c_3' c_4' d e'"));
        assert!(v_element(3, 1).is_err());
    }

    #[test]
    fn shift_map() {
        let m = u_shift_endomorphism(4).unwrap();
        assert_eq!(m.get(&c(0)).unwrap(), &f("c_0"));
        assert_eq!(m.get(&c(2)).unwrap(), &f("c_0 c_1 c_2 c_1' c_0'"));
        for s in -10..=10 {
            assert_eq!(m.substitute(&v_element(4, s).unwrap()).unwrap(), v_element(4, s + 1).unwrap());
        }
    }

    #[test]
    fn u_extension_pinches() {
        let hnn = u_extension(4).unwrap();
        let u = Word::letter(hnn.stable());
        let conj = |x: &Word| u.inverse().mul(x).mul(&u);
        assert_eq!(hnn.britton_reduce(&conj(&f("d"))), f("c_0 c_1 c_2 c_3 c_4 d e"));
        assert_eq!(hnn.britton_reduce(&conj(&v_element(4, 2).unwrap())), v_element(4, 3).unwrap());
        assert!(hnn.hnn_is_identity(&conj(&f("d")).mul(&f("c_0 c_1 c_2 c_3 c_4 d e").inverse())));
        assert!(!hnn.hnn_is_identity(&u));
    }

    #[test]
    fn codewords() {
        assert_eq!(codeword(&Word::empty(), 4).unwrap(), f("h d"));
        assert_eq!(codeword(&f("a"), 4).unwrap(), f("a h c_0 c_1 c_2 c_3 c_4 d e"));
        assert_eq!(codeword(&f("b"), 4).unwrap(), f("b h c_0^2 c_1^2 c_2^2 c_3^2 c_4^2 d e^2"));
        assert!(codeword(&f("h"), 4).is_err());
    }

    #[test]
    fn fstar_maps() {
        let maps = fstar_endomorphisms(4).unwrap();
        assert_eq!(maps[0].2.get(&h()).unwrap(), &f("a h"));
        assert_eq!(maps[1].2.get(&e()).unwrap(), &f("e^10"));
        assert_eq!(maps[3].1, 4);
    }

    #[test]
    fn codeword_composition() {
        let maps = fstar_endomorphisms(4).unwrap();
        let g0 = codeword(&Word::empty(), 4).unwrap();
        for n in 0..=4 {
            for w in words_of_length(n, &code_alphabet()) {
                // apply φ_{λ_1} first, then φ_{λ_2}, …
                let mut x = g0.clone();
                for l in w.letters() {
                    let (_, _, m) = maps.iter().find(|(lam, _, _)| *lam == l).unwrap();
                    x = m.substitute(&x).unwrap();
                }
                assert_eq!(x, codeword(&w, 4).unwrap(), "w = {w}");
            }
        }
    }

    #[test]
    fn fstar_pinch_recovers_prefix() {
        let ext = fstar_extensions(4).unwrap();
        for (lambda, hnn) in &ext {
            let u = Word::letter(hnn.stable());
            for w in words_of_length(2, &code_alphabet()) {
                let wl = w.concat(&Word::from_letters([lambda.clone()]));
                let x = u.mul(&codeword(&wl, 4).unwrap()).mul(&u.inverse());
                assert_eq!(hnn.britton_reduce(&x), codeword(&w, 4).unwrap());
            }
            // a codeword whose word does not end in λ stays outside F
            let other = if lambda.generator == a() { f("b") } else { f("a") };
            let x = u.mul(&codeword(&other, 4).unwrap()).mul(&u.inverse());
            assert_eq!(hnn.stable_count(&hnn.britton_reduce(&x)), 2);
        }
    }

    #[test]
    fn free_generation() {
        let vs: Vec<Word> = (-3..=3).map(|s| v_element(4, s).unwrap()).collect();
        assert_eq!(graph_rank(&vs), 7);
        let gs: Vec<Word> = (0..=2)
            .flat_map(|n| words_of_length(n, &code_alphabet()))
            .map(|w| codeword(&w, 4).unwrap())
            .collect();
        assert_eq!(gs.len(), 21);
        assert_eq!(graph_rank(&gs), 21);
        let reduced: Vec<Word> = (0..=2)
            .flat_map(|n| words_of_length(n, &code_alphabet()))
            .filter(Word::is_reduced)
            .map(|w| codeword(&w, 4).unwrap())
            .collect();
        assert_eq!(graph_rank(&reduced), 17);
    }
}
