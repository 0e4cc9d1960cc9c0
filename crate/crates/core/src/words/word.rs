use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::Generator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn of(exponent: i64) -> Sign {
        if exponent < 0 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A generator or its inverse. Letters order by generator, then positive
/// before negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: Generator,
    pub sign: Sign,
}

impl Letter {
    pub fn new(generator: Generator, sign: Sign) -> Self {
        Letter { generator, sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter::new(self.generator.clone(), self.sign.flip())
    }
}

/// A maximal run `g^k` inside a word; `k` is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    generator: Generator,
    exponent: i64,
}

impl Syllable {
    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }
}

/// A finite sequence of letters, stored run-length encoded.
///
/// Adjacent runs of the same generator with the same sign are always
/// merged, so two words are equal exactly when their letter sequences are
/// equal. Runs of the same generator with opposite signs are kept apart
/// until [`Word::reduce`] is called, which lets unreduced spellings such
/// as `a a'` exist as values.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(g: &Generator) -> Self {
        Word::power(g, 1)
    }

    pub fn power(g: &Generator, k: i64) -> Self {
        let mut w = Word::empty();
        w.push_raw(g, k);
        w
    }

    /// Builds a word from `(generator, exponent)` runs, without reducing.
    pub fn from_runs<'a>(runs: impl IntoIterator<Item = (&'a Generator, i64)>) -> Self {
        let mut w = Word::empty();
        for (g, k) in runs {
            w.push_raw(g, k);
        }
        w
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push_raw(&l.generator, l.sign.value());
        }
        w
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs() as usize)
            .sum()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let letter = Letter::new(s.generator.clone(), Sign::of(s.exponent));
            std::iter::repeat_n(letter, s.exponent.unsigned_abs() as usize)
        })
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.syllables
            .first()
            .map(|s| Letter::new(s.generator.clone(), Sign::of(s.exponent)))
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.syllables
            .last()
            .map(|s| Letter::new(s.generator.clone(), Sign::of(s.exponent)))
    }

    /// Appends `g^k`, merging only with a run of the same sign.
    pub fn push_raw(&mut self, g: &Generator, k: i64) {
        if k == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if &last.generator == g && Sign::of(last.exponent) == Sign::of(k) {
                last.exponent = last.exponent.checked_add(k).expect("exponent overflow");
                return;
            }
        }
        self.syllables.push(Syllable {
            generator: g.clone(),
            exponent: k,
        });
    }

    /// Appends `g^k` with free cancellation against the end of the word.
    /// Only meaningful when `self` is already reduced.
    pub fn push_reduced(&mut self, g: &Generator, k: i64) {
        if k == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if &last.generator == g {
                last.exponent = last.exponent.checked_add(k).expect("exponent overflow");
                if last.exponent == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable {
            generator: g.clone(),
            exponent: k,
        });
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push_raw(&s.generator, s.exponent);
        }
        w
    }

    /// The freely reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.reduce();
        for s in &other.syllables {
            w.push_reduced(&s.generator, s.exponent);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator.clone(),
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    /// The unique freely reduced word equal to `self`.
    pub fn reduce(&self) -> Word {
        let mut w = Word::empty();
        for s in &self.syllables {
            w.push_reduced(&s.generator, s.exponent);
        }
        w
    }

    pub fn is_reduced(&self) -> bool {
        self.syllables
            .windows(2)
            .all(|p| p[0].generator != p[1].generator)
    }

    /// Reduced power `self^k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let (core, conj) = base.reduce().cyclic_reduce();
        let mut w = conj.clone();
        if let [single] = core.syllables.as_slice() {
            let e = single.exponent.checked_mul(k.abs()).expect("exponent overflow");
            w.push_reduced(&single.generator, e);
        } else {
            for _ in 0..k.unsigned_abs() {
                for s in &core.syllables {
                    w.push_reduced(&s.generator, s.exponent);
                }
            }
        }
        w.mul(&conj.inverse())
    }

    /// Returns `(core, conjugator)` with `self = conjugator · core ·
    /// conjugator⁻¹` freely and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut core = self.reduce().syllables;
        let mut conj = Word::empty();
        let mut start = 0;
        while core.len() - start >= 2 {
            let end = core.len() - 1;
            let (first, last) = (&core[start], &core[end]);
            if first.generator != last.generator
                || Sign::of(first.exponent) == Sign::of(last.exponent)
            {
                break;
            }
            let g = first.generator.clone();
            let t = first.exponent.abs().min(last.exponent.abs());
            let step = Sign::of(first.exponent).value() * t;
            conj.push_raw(&g, step);
            core[start].exponent -= step;
            core[end].exponent += step;
            if core[end].exponent == 0 {
                core.pop();
            }
            if core[start].exponent == 0 {
                start += 1;
            }
        }
        let core = Word {
            syllables: core.split_off(start),
        };
        (core, conj)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        match (self.first_letter(), self.last_letter()) {
            (Some(f), Some(l)) => self.syllables.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Sum of the signs of the occurrences of `g`.
    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.syllables
            .iter()
            .filter(|s| &s.generator == g)
            .map(|s| s.exponent)
            .sum()
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.syllables.iter().map(|s| s.generator.clone()).collect()
    }

    pub fn contains_generator(&self, g: &Generator) -> bool {
        self.syllables.iter().any(|s| &s.generator == g)
    }

    /// Number of occurrences of `g` or its inverse.
    pub fn occurrences(&self, g: &Generator) -> usize {
        self.syllables
            .iter()
            .filter(|s| &s.generator == g)
            .map(|s| s.exponent.unsigned_abs() as usize)
            .sum()
    }

    /// Replaces every occurrence of `g` by `by` and reduces.
    pub fn replace_generator(&self, g: &Generator, by: &Word) -> Word {
        let mut w = Word::empty();
        for s in &self.syllables {
            if &s.generator == g {
                for t in by.pow(s.exponent).syllables {
                    w.push_reduced(&t.generator, t.exponent);
                }
            } else {
                w.push_reduced(&s.generator, s.exponent);
            }
        }
        w
    }

    /// Reduced `by⁻¹ · self · by`.
    pub fn conjugate_by(&self, by: &Word) -> Word {
        by.inverse().mul(self).mul(by)
    }

    /// Reduced commutator `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// Rotation moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: usize) -> Word {
        let letters: Vec<Letter> = self.letters().collect();
        if letters.is_empty() {
            return Word::empty();
        }
        let k = k % letters.len();
        Word::from_letters(letters[k..].iter().chain(&letters[..k]).cloned())
    }

    pub fn cmp_letters(&self, other: &Word) -> Ordering {
        self.letters().cmp(other.letters())
    }

    /// Maps every generator through `f`, without reducing.
    pub fn map_generators(&self, mut f: impl FnMut(&Generator) -> Generator) -> Word {
        let mut w = Word::empty();
        for s in &self.syllables {
            w.push_raw(&f(&s.generator), s.exponent);
        }
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match s.exponent {
                1 => write!(f, "{}", s.generator)?,
                -1 => write!(f, "{}'", s.generator)?,
                k => write!(f, "{}^{}", s.generator, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Word {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::syntax::parse_word(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("a b b' a").reduce(), w("a^2"));
        assert_eq!(Word::empty().reduce(), Word::empty());
        assert_eq!(w("c_0 c_1 c_1' c_0' d").reduce(), w("d"));
    }

    #[test]
    fn raw_words_keep_cancelling_pairs() {
        let raw = w("a a'");
        assert_eq!(raw.len(), 2);
        assert!(!raw.is_reduced());
        assert!(raw.reduce().is_empty());
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("a b a'").cyclic_reduce(), (w("b"), w("a")));
        let (core, _) = w("b a b' b a' b'").cyclic_reduce();
        assert!(core.is_empty());
        assert_eq!(
            w("j_1 j_2 j_1' j_1").cyclic_reduce(),
            (w("j_1 j_2"), Word::empty())
        );
    }

    #[test]
    fn cyclic_reduce_partial_runs() {
        let word = w("a^3 b a^-2");
        let (core, conj) = word.cyclic_reduce();
        assert_eq!(core, w("a b"));
        assert_eq!(conj, w("a^2"));
        assert_eq!(conj.mul(&core).mul(&conj.inverse()), word);
        assert!(w("a b a").is_cyclically_reduced());
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w("c_0 c_1 c_0'").exponent_sum(&Generator::indexed("", "c", 0)), 0);
        assert_eq!(w("e^10").exponent_sum(&Generator::plain("e")), 10);
        let g_a = w("a h c_0 c_1 c_2 c_3 c_4 d e");
        assert_eq!(g_a.exponent_sum(&Generator::indexed("", "c", 2)), 1);
    }

    #[test]
    fn powers() {
        assert_eq!(w("a b").pow(2), w("a b a b"));
        assert_eq!(w("a b a'").pow(3), w("a b^3 a'"));
        assert_eq!(w("a b").pow(-1), w("b' a'"));
        assert_eq!(w("c^2").pow(-3), w("c^-6"));
        assert!(w("a").pow(0).is_empty());
    }

    #[test]
    fn rotation_and_order() {
        assert_eq!(w("a b c").rotate_left(1), w("b c a"));
        assert_eq!(w("a b").cmp_letters(&w("a b'")), Ordering::Less);
        assert_eq!(w("a").cmp_letters(&w("a b")), Ordering::Less);
    }

    #[test]
    fn replace_generator_reduces() {
        let r = w("y^2 x^-4");
        let x2 = w("x^2");
        assert!(r.replace_generator(&Generator::plain("y"), &x2).is_empty());
    }
}
