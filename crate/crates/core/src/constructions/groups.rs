use crate::britton::BrittonHNN;
use crate::error::{Error, Result};
use crate::godel::words_of_length;
use crate::presentation::{
    canonical_relator, direct_product, free_product, hnn_extend, tietze_eliminate, HNNDescriptor, IntegerSet,
    Presentation, RelatorSchema,
};
use crate::subgroup::SubgroupGraph;
use crate::words::{fresh_generator, Generator, GeneratorMap, Word};

use super::{a, b, c, check_l, code_alphabet, d, e, gamma, h, v_element, NS_GH, NS_M, NS_QUOTIENT, NS_ROPE};

/// `J'(l, S) = ⟨j_1 … j_l | j_1^s ⋯ j_l^s, s ∈ S⟩`, with plain generator
/// names. The `s = 0` instance is empty and dropped.
pub fn jprime_presentation(l: usize, set: &IntegerSet) -> Result<Presentation> {
    check_l(l)?;
    let gens: Vec<Generator> = (1..=l as u32).map(|i| Generator::indexed("", "j", i)).collect();
    let mut p = Presentation::free(gens.clone());
    p.add_schema(RelatorSchema::new(gens.into_iter().map(|g| (g, 1)).collect(), set.clone())?)?;
    Ok(p)
}

fn check_marked(l: usize, p: &Presentation, marked: &[Generator]) -> Result<()> {
    if marked.len() != l {
        return Err(Error::InvalidParameter(format!(
            "encoder marks {} generators but l = {l}",
            marked.len()
        )));
    }
    if let Some(g) = marked.iter().find(|g| !p.generators().contains(*g)) {
        return Err(Error::UndeclaredGenerator((*g).clone()));
    }
    Ok(())
}

/// `K(S) = ⟨c_0, d, e⟩ * (⟨c_1 … c_l⟩ × J)`: the encoder's relators plus
/// `[c_i, x]` for every `i ≥ 1` and every encoder generator `x`.
pub fn build_ks(l: usize, encoder: &Presentation, marked: &[Generator]) -> Result<Presentation> {
    check_l(l)?;
    check_marked(l, encoder, marked)?;
    let outer = Presentation::free([c(0), d(), e()]);
    let inner = Presentation::free((1..=l).map(c));
    free_product(&outer, &direct_product(&inner, encoder)?)
}

/// `M(S)`: stable letter `t` with `t⁻¹c_0t = c_0`, `t⁻¹c_it = c_i j_i`,
/// `t⁻¹dt = d`, `t⁻¹et = e`.
pub fn build_ms(l: usize, ks: &Presentation, marked: &[Generator]) -> Result<HNNDescriptor> {
    check_l(l)?;
    check_marked(l, ks, marked)?;
    let mut pairs = vec![(Word::letter(&c(0)), Word::letter(&c(0)))];
    for i in 1..=l {
        if !ks.generators().contains(&c(i)) {
            return Err(Error::UndeclaredGenerator(c(i)));
        }
        pairs.push((Word::letter(&c(i)), Word::letter(&c(i)).mul(&Word::letter(&marked[i - 1]))));
    }
    pairs.push((Word::letter(&d()), Word::letter(&d())));
    pairs.push((Word::letter(&e()), Word::letter(&e())));
    HNNDescriptor::new(ks.clone(), Generator::new(NS_M, "t", None), pairs)
}

/// Britton reduction for `M(S)`, treating `K(S)` as free on its
/// generators. Pinches found this way are genuine; words whose base
/// segments need the relators of `K(S)` to expose a pinch are outside its
/// reach (see [`super::KsNormaliser`]).
pub fn ms_britton(ms: &HNNDescriptor) -> Result<BrittonHNN> {
    BrittonHNN::new(ms.base.generators().clone(), ms.stable.clone(), &ms.pairs)
}

/// `G_H = ⟨G, t | t⁻¹ h t = h, h ∈ H⟩`.
pub fn build_gh(g: &Presentation, h_gens: &[Word]) -> Result<Presentation> {
    let t = fresh_generator(g.generators(), NS_GH, "t");
    let pairs = h_gens.iter().map(|x| (x.clone(), x.clone())).collect();
    hnn_extend(&HNNDescriptor::new(g.clone(), t, pairs)?)
}

/// How the subgroup `N ≤ L = ⟨a, b⟩` is given.
#[derive(Clone, Debug)]
pub enum SubgroupInput {
    /// A finitely generated subgroup, decided by its Stallings graph.
    Folded(SubgroupGraph),
    /// The normal closure of the relators. Membership is undecidable in
    /// general, so this form is refused; fold finitely many conjugates
    /// with [`approximate_normal_closure`] instead.
    NormalClosure(Vec<Word>),
}

/// The subgroup generated by `w r w⁻¹` for every relator and every reduced
/// `w` over `{a, b}` with `|w| ≤ conjugator_length`.
pub fn approximate_normal_closure(relators: &[Word], conjugator_length: usize) -> SubgroupGraph {
    let conjugators: Vec<Word> = (0..=conjugator_length)
        .flat_map(|n| words_of_length(n, &code_alphabet()))
        .filter(Word::is_reduced)
        .collect();
    let mut gens = Vec::new();
    for r in relators {
        for w in &conjugators {
            let x = w.mul(r).mul(&w.inverse());
            if !x.is_empty() && !gens.contains(&x) {
                gens.push(x);
            }
        }
    }
    SubgroupGraph::fold(&gens)
}

/// `{γ(w) : |w| ≤ length_bound, w ∈_L N}` over all spellings `w`, reduced
/// or not.
pub fn compute_sn(n: &SubgroupInput, length_bound: usize) -> Result<IntegerSet> {
    let graph = match n {
        SubgroupInput::Folded(g) => g,
        SubgroupInput::NormalClosure(_) => {
            return Err(Error::Refused(
                "membership in a normal closure is undecidable in general; pass a folded \
                 approximation instead"
                    .into(),
            ))
        }
    };
    if length_bound > 18 {
        return Err(Error::InvalidParameter(format!(
            "length bound {length_bound} exceeds 18, past which codes overflow 64 bits"
        )));
    }
    if let Some(g) = graph.alphabet().iter().find(|g| **g != a() && **g != b()) {
        return Err(Error::NotInCodeAlphabet(g.clone()));
    }
    let mut out = vec![0];
    for len in 1..=length_bound {
        for w in words_of_length(len, &code_alphabet()) {
            if graph.contains(&w.reduce()) {
                out.push(gamma(&w)?);
            }
        }
    }
    IntegerSet::new(out)
}

/// Free basis `a, b, h, v_s (s ∈ S)` of `Y_S = ⟨a, b, h⟩ * V_S`.
pub fn build_ys(l: usize, set: &IntegerSet) -> Result<Vec<Word>> {
    let mut out = vec![Word::letter(&a()), Word::letter(&b()), Word::letter(&h())];
    for &s in set.values() {
        out.push(v_element(l, s)?);
    }
    Ok(out)
}

/// Output of [`rope_trick`].
#[derive(Clone, Debug)]
pub struct RopeTrick {
    /// `H × F/R` with the stable letter and its relators.
    pub before: Presentation,
    /// The same group after eliminating every generator of `F/R`.
    pub after: Presentation,
    pub stable: Generator,
    /// Eliminated generators with their defining words, in order.
    pub eliminated: Vec<(Generator, Word)>,
    /// Relators of `H`.
    pub h_relators: Vec<Word>,
}

impl RopeTrick {
    /// Relators of `after` that are not relators of `H`.
    pub fn extra_relators(&self) -> Vec<Word> {
        self.after
            .relators()
            .iter()
            .filter(|r| !self.h_relators.contains(r))
            .cloned()
            .collect()
    }

    /// The substitution that expresses each eliminated generator in the
    /// generators that remain.
    pub fn back_substitution(&self) -> Result<GeneratorMap> {
        let mut map = GeneratorMap::identity(self.after.generators());
        for (g, def) in self.eliminated.iter().rev() {
            let image = map.substitute(def)?;
            map.insert(g.clone(), image);
        }
        Ok(map)
    }

    /// Re-checks the elimination: `H`'s relators survive untouched, every
    /// relator of `before` maps under the back-substitution to the empty
    /// word or to a relator of `after`, and each defining relator maps to
    /// the empty word.
    pub fn verify(&self) -> Result<bool> {
        if self.h_relators.iter().any(|r| !self.after.has_relator(r)) {
            return Ok(false);
        }
        if self.eliminated.iter().any(|(g, _)| self.after.generators().contains(g)) {
            return Ok(false);
        }
        let map = self.back_substitution()?;
        for r in self.before.relators() {
            let image = canonical_relator(&map.substitute(r)?);
            if !image.is_empty() && !self.after.has_relator(&image) {
                return Ok(false);
            }
        }
        for (g, def) in &self.eliminated {
            let defining = Word::letter(g).mul(&def.inverse());
            if !map.substitute(&defining)?.reduce().is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `K = ⟨H × F/R, s | s⁻¹(l,1)s = (l, φ(l)), l ∈ L⟩` with every generator
/// of `F/R` then eliminated. `l_gens` lists generators of `L ≤ H` with
/// their images in `F/R`.
pub fn rope_trick(h_pres: &Presentation, fmodr: &Presentation, l_gens: &[(Word, Word)]) -> Result<RopeTrick> {
    for (x, y) in l_gens {
        if let Some(g) = x.generators().into_iter().find(|g| !h_pres.generators().contains(g)) {
            return Err(Error::UndeclaredGenerator(g));
        }
        if let Some(g) = y.generators().into_iter().find(|g| !fmodr.generators().contains(g)) {
            return Err(Error::UndeclaredGenerator(g));
        }
    }
    let mut before = direct_product(h_pres, fmodr)?;
    let stable = fresh_generator(before.generators(), NS_ROPE, "s");
    before.add_generator(stable.clone())?;
    let s = Word::letter(&stable);
    for (x, y) in l_gens {
        before.add_relator(&x.conjugate_by(&s).mul(&x.mul(y).inverse()))?;
    }

    let mut current = before.clone();
    let mut eliminated = Vec::new();
    for g in fmodr.generators() {
        let rel = current
            .relators()
            .iter()
            .find(|r| r.contains_generator(&stable) && r.occurrences(g) == 1)
            .cloned()
            .ok_or_else(|| Error::NoDefiningRelator(g.clone()))?;
        let letters: Vec<_> = rel.letters().collect();
        let k = letters.iter().position(|l| l.generator == *g).expect("occurs once");
        let rest = Word::from_letters(letters[k + 1..].iter().chain(&letters[..k]).cloned());
        let def = if letters[k].sign.value() > 0 { rest.inverse() } else { rest };
        current = tietze_eliminate(&current, g, &def)?;
        eliminated.push((g.clone(), def));
    }
    Ok(RopeTrick {
        before,
        after: current,
        stable,
        eliminated,
        h_relators: h_pres.relators().to_vec(),
    })
}

/// Data of the embedding of a finitely generated group into a quotient of
/// `L = ⟨a, b⟩`.
#[derive(Clone, Debug)]
pub struct TwoGeneratorEmbedding {
    /// `x_i ↦ w_i(a, b)`.
    pub images: GeneratorMap,
    /// Images of the input relators; `N` is their normal closure.
    pub relators: Vec<Word>,
    /// `L/N`, written over the quotient namespace.
    pub quotient: Presentation,
}

/// `x_i ↦ b^{-(i-1)} a^i b^{i-1}`. The images are pairwise non-conjugate
/// and freely independent; injectivity of the induced map to `L/N` is
/// not certified here.
pub fn embed_two_generator(p: &Presentation) -> Result<TwoGeneratorEmbedding> {
    let mut images = GeneratorMap::new();
    for (i, g) in p.generators().iter().enumerate() {
        let conj = Word::power(&b(), i as i64);
        images.insert(g.clone(), Word::power(&a(), i as i64 + 1).conjugate_by(&conj.inverse()).reduce());
    }
    let mut relators = Vec::new();
    let mut seen = Vec::new();
    for r in p.all_relators(None) {
        let image = images.substitute(&r)?;
        if !image.is_empty() && !seen.contains(&canonical_relator(&image)) {
            seen.push(canonical_relator(&image));
            relators.push(image);
        }
    }
    let mut quotient = Presentation::free([a(), b()]);
    for r in &relators {
        quotient.add_relator(r)?;
    }
    let quotient = quotient.map_generators(|g| g.with_namespace(NS_QUOTIENT))?;
    Ok(TwoGeneratorEmbedding { images, relators, quotient })
}
