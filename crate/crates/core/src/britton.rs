//! Britton reduction in HNN extensions of free groups with finitely
//! generated associated subgroups.
//!
//! Convention: the pair `(a_i, b_i)` means `t⁻¹·a_i·t = b_i`, so a pinch
//! `t⁻¹·x·t` needs `x ∈ A` and a pinch `t·y·t⁻¹` needs `y ∈ B`.

use crate::error::{Error, Result};
use crate::subgroup::SubgroupGraph;
use crate::words::{Alphabet, Generator, GeneratorMap, Word};

#[derive(Clone, Debug)]
pub struct BrittonHNN {
    base: Alphabet,
    stable: Generator,
    a: SubgroupGraph,
    b: SubgroupGraph,
    forward: GeneratorMap,
    backward: GeneratorMap,
}

/// A word cut at its stable letters: `segs[0] t^signs[0] segs[1] … segs[k]`.
#[derive(Clone, Debug)]
struct Split {
    segs: Vec<Word>,
    signs: Vec<i8>,
}

impl Split {
    fn join(&self, stable: &Generator) -> Word {
        let mut out = self.segs[0].clone();
        for (sign, seg) in self.signs.iter().zip(&self.segs[1..]) {
            out = out.mul(&Word::power(stable, *sign as i64)).mul(seg);
        }
        out
    }
}

impl BrittonHNN {
    /// Builds the extension `⟨base, t | t⁻¹ a_i t = b_i⟩`. Both lists must
    /// be free bases of the subgroups they generate.
    pub fn new(base: Alphabet, stable: Generator, pairs: &[(Word, Word)]) -> Result<Self> {
        if base.contains(&stable) {
            return Err(Error::Collision(stable));
        }
        for (x, y) in pairs {
            for g in x.generators().into_iter().chain(y.generators()) {
                if !base.contains(&g) {
                    return Err(Error::UndeclaredGenerator(g));
                }
            }
        }
        let left: Vec<Word> = pairs.iter().map(|p| p.0.clone()).collect();
        let right: Vec<Word> = pairs.iter().map(|p| p.1.clone()).collect();
        let a = SubgroupGraph::fold(&left);
        let b = SubgroupGraph::fold(&right);
        if a.rank() != pairs.len() || b.rank() != pairs.len() {
            return Err(Error::NotAnIsomorphism {
                left: a.rank(),
                right: b.rank(),
                pairs: pairs.len(),
            });
        }
        let forward = b.record_map();
        let backward = a.record_map();
        Ok(BrittonHNN { base, stable, a, b, forward, backward })
    }

    /// The ascending extension `t⁻¹ x t = φ(x)` for every base generator.
    pub fn ascending(base: Alphabet, stable: Generator, phi: &GeneratorMap) -> Result<Self> {
        let pairs = base
            .iter()
            .map(|g| {
                let image = phi.get(g).cloned().ok_or_else(|| Error::UnmappedGenerator(g.clone()))?;
                Ok((Word::letter(g), image))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, stable, &pairs)
    }

    pub fn stable(&self) -> &Generator {
        &self.stable
    }

    pub fn base_alphabet(&self) -> &Alphabet {
        &self.base
    }

    pub fn assoc_a(&self) -> &SubgroupGraph {
        &self.a
    }

    pub fn assoc_b(&self) -> &SubgroupGraph {
        &self.b
    }

    /// The isomorphism `A → B` applied to a member of `A`.
    pub fn phi(&self, x: &Word) -> Result<Word> {
        self.forward.substitute(&self.a.express(x)?)
    }

    /// The inverse isomorphism `B → A`.
    pub fn phi_inverse(&self, y: &Word) -> Result<Word> {
        self.backward.substitute(&self.b.express(y)?)
    }

    fn split(&self, w: &Word) -> Split {
        let mut segs = vec![Word::empty()];
        let mut signs = Vec::new();
        for s in w.reduce().syllables() {
            if *s.generator() == self.stable {
                let sign = s.exponent().signum() as i8;
                for _ in 0..s.exponent().unsigned_abs() {
                    signs.push(sign);
                    segs.push(Word::empty());
                }
            } else {
                let last = segs.last_mut().expect("nonempty");
                last.push_reduced(s.generator(), s.exponent());
            }
        }
        Split { segs, signs }
    }

    // The replacement for `t^first · x · t^-first`, if that is a pinch.
    fn pinch(&self, first: i8, x: &Word) -> Option<Word> {
        if first < 0 {
            self.a.contains(x).then(|| self.phi(x).expect("member"))
        } else {
            self.b.contains(x).then(|| self.phi_inverse(x).expect("member"))
        }
    }

    /// Removes every pinch, scanning leftmost-innermost. The result is a
    /// reduced word equal to `w` in the extension.
    pub fn britton_reduce(&self, w: &Word) -> Word {
        let split = self.split(w);
        let mut segs: Vec<Word> = vec![split.segs[0].clone()];
        let mut signs: Vec<i8> = Vec::new();
        for (sign, seg) in split.signs.iter().zip(&split.segs[1..]) {
            if let Some(&prev) = signs.last() {
                if prev == -sign {
                    let middle = segs.last().expect("segment");
                    if let Some(image) = self.pinch(prev, middle) {
                        segs.pop();
                        signs.pop();
                        let left = segs.pop().expect("segment");
                        segs.push(left.mul(&image).mul(seg));
                        continue;
                    }
                }
            }
            signs.push(*sign);
            segs.push(seg.clone());
        }
        Split { segs, signs }.join(&self.stable)
    }

    /// Britton reduction where `choose(n)` picks which of the `n` currently
    /// available pinches to apply next.
    pub fn britton_reduce_by(&self, w: &Word, mut choose: impl FnMut(usize) -> usize) -> Word {
        let mut split = self.split(w);
        loop {
            let candidates: Vec<(usize, Word)> = (0..split.signs.len().saturating_sub(1))
                .filter(|&i| split.signs[i] == -split.signs[i + 1])
                .filter_map(|i| self.pinch(split.signs[i], &split.segs[i + 1]).map(|img| (i, img)))
                .collect();
            if candidates.is_empty() {
                return split.join(&self.stable);
            }
            let (i, image) = &candidates[choose(candidates.len()) % candidates.len()];
            let i = *i;
            let merged = split.segs[i].mul(image).mul(&split.segs[i + 2]);
            split.segs.splice(i..i + 3, [merged]);
            split.signs.drain(i..i + 2);
        }
    }

    /// Number of stable letters in `w`.
    pub fn stable_count(&self, w: &Word) -> usize {
        w.occurrences(&self.stable)
    }

    /// Whether `w` is trivial, for a free base.
    pub fn hnn_is_identity(&self, w: &Word) -> bool {
        self.britton_reduce(w).is_empty()
    }

    /// Whether `w` is trivial, with `base_is_identity` deciding the word
    /// problem of the base group on stable-free words.
    pub fn hnn_is_identity_with(
        &self,
        w: &Word,
        base_is_identity: impl Fn(&Word) -> Result<bool>,
    ) -> Result<bool> {
        let r = self.britton_reduce(w);
        if r.contains_generator(&self.stable) {
            return Ok(false);
        }
        base_is_identity(&r)
    }
}

/// Graphs of `φ(F), φ²(F), …, φᵏ(F)` for an endomorphism of the free group
/// on `base`; membership in the k-th image is `contains` on entry `k - 1`.
pub fn ascending_image_graphs(base: &Alphabet, phi: &GeneratorMap, k: usize) -> Result<Vec<SubgroupGraph>> {
    let mut images: Vec<Word> = base.iter().map(Word::letter).collect();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        images = images.iter().map(|w| phi.substitute(w)).collect::<Result<_>>()?;
        out.push(SubgroupGraph::fold(&images));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn alphabet(names: &[&str]) -> Alphabet {
        names.iter().map(|n| Generator::plain(n)).collect()
    }

    // Baumslag–Solitar BS(1,2): t⁻¹ a t = a².
    fn bs12() -> BrittonHNN {
        BrittonHNN::new(alphabet(&["a"]), Generator::plain("t"), &[(w("a"), w("a^2"))]).unwrap()
    }

    #[test]
    fn pinches_in_bs12() {
        let h = bs12();
        assert_eq!(h.britton_reduce(&w("t' a t")), w("a^2"));
        assert_eq!(h.britton_reduce(&w("t a^4 t'")), w("a^2"));
        // a is not in B = ⟨a²⟩
        assert_eq!(h.britton_reduce(&w("t a t'")), w("t a t'"));
        assert!(h.hnn_is_identity(&w("t' a t a^-2")));
        assert!(h.hnn_is_identity(&w("t' t' a t t a^-4")));
        assert!(!h.hnn_is_identity(&w("t")));
        assert!(!h.hnn_is_identity(&w("t a t' a'")));
    }

    #[test]
    fn stable_letters_only_drop_in_pairs() {
        let h = bs12();
        let x = w("t' t' a t a t t a^-2");
        let r = h.britton_reduce(&x);
        assert_eq!((h.stable_count(&x) - h.stable_count(&r)) % 2, 0);
    }

    #[test]
    fn rejects_non_isomorphisms() {
        let base = alphabet(&["a", "b"]);
        let err = BrittonHNN::new(base.clone(), Generator::plain("t"), &[(w("a"), w("b")), (w("a^2"), w("b"))]);
        assert!(matches!(err, Err(Error::NotAnIsomorphism { .. })));
        assert!(matches!(
            BrittonHNN::new(base.clone(), Generator::plain("a"), &[]),
            Err(Error::Collision(_))
        ));
        assert!(matches!(
            BrittonHNN::new(base, Generator::plain("t"), &[(w("c"), w("a"))]),
            Err(Error::UndeclaredGenerator(_))
        ));
    }

    #[test]
    fn no_pinch_outside_a() {
        let h = BrittonHNN::new(alphabet(&["a", "b"]), Generator::plain("t"), &[(w("a"), w("a"))]).unwrap();
        assert_eq!(h.britton_reduce(&w("t' b t")), w("t' b t"));
        assert_eq!(h.britton_reduce(&w("t' a^3 t")), w("a^3"));
    }

    #[test]
    fn scan_order_does_not_matter() {
        let h = bs12();
        let x = w("t' a t t' a t t a^2 t' t' a^3 t");
        let left = h.britton_reduce(&x);
        for seed in 0..20usize {
            let mut k = seed;
            let r = h.britton_reduce_by(&x, |n| {
                k = k.wrapping_mul(31).wrapping_add(7);
                k % n
            });
            assert!(h.hnn_is_identity(&r.mul(&left.inverse())));
        }
    }

    #[test]
    fn image_graphs_of_doubling() {
        let base = alphabet(&["a"]);
        let phi: GeneratorMap = [(Generator::plain("a"), w("a^2"))].into_iter().collect();
        let graphs = ascending_image_graphs(&base, &phi, 3).unwrap();
        assert!(graphs[2].contains(&w("a^8")));
        assert!(!graphs[2].contains(&w("a^4")));
    }
}
