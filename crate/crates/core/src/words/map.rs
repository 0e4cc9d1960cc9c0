use indexmap::IndexMap;

use crate::error::{Error, Result};

use super::{Alphabet, Generator, Word};

/// A homomorphism of free groups given by the images of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct GeneratorMap {
    images: IndexMap<Generator, Word>,
}

impl GeneratorMap {
    pub fn new() -> Self {
        GeneratorMap::default()
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        alphabet
            .iter()
            .map(|g| (g.clone(), Word::letter(g)))
            .collect()
    }

    pub fn insert(&mut self, g: Generator, image: Word) {
        self.images.insert(g, image.reduce());
    }

    pub fn get(&self, g: &Generator) -> Option<&Word> {
        self.images.get(g)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Generator> {
        self.images.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, &Word)> {
        self.images.iter()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Generators used by the images.
    pub fn codomain(&self) -> Alphabet {
        let mut out = Alphabet::new();
        for w in self.images.values() {
            out.extend(w.generators());
        }
        out
    }

    /// Image of `w`, freely reduced.
    pub fn substitute(&self, w: &Word) -> Result<Word> {
        let mut out = Word::empty();
        for s in w.syllables() {
            let image = self
                .images
                .get(s.generator())
                .ok_or_else(|| Error::UnmappedGenerator(s.generator().clone()))?;
            for t in image.pow(s.exponent()).syllables() {
                out.push_reduced(t.generator(), t.exponent());
            }
        }
        Ok(out)
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &GeneratorMap) -> Result<GeneratorMap> {
        inner
            .images
            .iter()
            .map(|(g, w)| Ok((g.clone(), self.substitute(w)?)))
            .collect()
    }
}

impl FromIterator<(Generator, Word)> for GeneratorMap {
    fn from_iter<I: IntoIterator<Item = (Generator, Word)>>(iter: I) -> Self {
        let mut m = GeneratorMap::new();
        for (g, w) in iter {
            m.insert(g, w);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn identity_map_reduces() {
        let alphabet: Alphabet = ["a", "b"].iter().map(|n| Generator::plain(n)).collect();
        let id = GeneratorMap::identity(&alphabet);
        assert_eq!(id.substitute(&w("a b b' a")).unwrap(), w("a^2"));
    }

    #[test]
    fn unmapped_generator_is_an_error() {
        let m: GeneratorMap = [(Generator::plain("a"), w("b"))].into_iter().collect();
        assert!(matches!(
            m.substitute(&w("a c")),
            Err(Error::UnmappedGenerator(g)) if g == Generator::plain("c")
        ));
    }

    #[test]
    fn negative_powers_use_inverse_images() {
        let m: GeneratorMap = [
            (Generator::plain("a"), w("a b")),
            (Generator::plain("b"), w("b")),
        ]
        .into_iter()
        .collect();
        assert_eq!(m.substitute(&w("a^-2")).unwrap(), w("b' a' b' a'"));
        let sq = m.compose(&m).unwrap();
        assert_eq!(sq.get(&Generator::plain("a")).unwrap(), &w("a b^2"));
    }
}
