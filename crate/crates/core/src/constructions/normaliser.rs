//! Free-product normal forms in `K(S) = ⟨c_0, d, e⟩ * (⟨c_1 … c_l⟩ × J)`.

use crate::error::{Error, Result};
use crate::smallcancel::Encoder;
use crate::words::{Generator, Word};

use super::{c, d, e};

/// A syllable of the free-product normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KsSyllable {
    /// A nontrivial element of `⟨c_0, d, e⟩`.
    Outer(Word),
    /// A nontrivial element `(c, j)` of `⟨c_1 … c_l⟩ × J`.
    Inner { c_part: Word, j_part: Word },
}

/// Normal forms in `K(S)`, with the encoder deciding the `J` coordinates.
pub struct KsNormaliser<'a> {
    l: usize,
    encoder: &'a dyn Encoder,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Factor {
    Outer,
    Inner,
}

impl<'a> KsNormaliser<'a> {
    pub fn new(l: usize, encoder: &'a dyn Encoder) -> Self {
        KsNormaliser { l, encoder }
    }

    fn factor(&self, g: &Generator) -> Result<(Factor, bool)> {
        if *g == c(0) || *g == d() || *g == e() {
            return Ok((Factor::Outer, false));
        }
        if (1..=self.l).any(|i| *g == c(i)) {
            return Ok((Factor::Inner, false));
        }
        if self.encoder.presentation().generators().contains(g) {
            return Ok((Factor::Inner, true));
        }
        Err(Error::UndeclaredGenerator(g.clone()))
    }

    fn runs(&self, w: &Word) -> Result<Vec<(Factor, Word)>> {
        let mut runs: Vec<(Factor, Word)> = Vec::new();
        for s in w.reduce().syllables() {
            let (f, _) = self.factor(s.generator())?;
            match runs.last_mut() {
                Some((last, word)) if *last == f => word.push_reduced(s.generator(), s.exponent()),
                _ => runs.push((f, Word::power(s.generator(), s.exponent()))),
            }
        }
        Ok(runs)
    }

    fn split_inner(&self, w: &Word) -> Result<(Word, Word)> {
        let mut cp = Word::empty();
        let mut jp = Word::empty();
        for s in w.syllables() {
            let (_, is_j) = self.factor(s.generator())?;
            if is_j {
                jp.push_reduced(s.generator(), s.exponent());
            } else {
                cp.push_reduced(s.generator(), s.exponent());
            }
        }
        Ok((cp, jp))
    }

    /// Reduced free-product form of `w`: trivial syllables are removed and
    /// their neighbours merged until none remain.
    pub fn normal_form(&self, w: &Word) -> Result<Vec<KsSyllable>> {
        let mut runs = self.runs(w)?;
        loop {
            let mut removed = None;
            for (i, (f, word)) in runs.iter().enumerate() {
                let trivial = match f {
                    Factor::Outer => word.reduce().is_empty(),
                    Factor::Inner => {
                        let (cp, jp) = self.split_inner(word)?;
                        cp.is_empty() && self.encoder.is_identity(&jp)?
                    }
                };
                if trivial {
                    removed = Some(i);
                    break;
                }
            }
            let Some(i) = removed else { break };
            runs.remove(i);
            if i > 0 && i < runs.len() && runs[i - 1].0 == runs[i].0 {
                let (_, right) = runs.remove(i);
                runs[i - 1].1 = runs[i - 1].1.mul(&right);
            }
        }
        runs.into_iter()
            .map(|(f, word)| match f {
                Factor::Outer => Ok(KsSyllable::Outer(word)),
                Factor::Inner => {
                    let (c_part, j_part) = self.split_inner(&word)?;
                    Ok(KsSyllable::Inner { c_part, j_part })
                }
            })
            .collect()
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.normal_form(w)?.is_empty())
    }

    /// Whether `w` lies in `H = ⟨c_0 … c_l, d, e⟩`: every inner syllable
    /// must have trivial `J` coordinate.
    pub fn in_h(&self, w: &Word) -> Result<bool> {
        for s in self.normal_form(w)? {
            if let KsSyllable::Inner { j_part, .. } = s {
                if !self.encoder.is_identity(&j_part)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `w` rewritten with every inner syllable as its `c` part followed by
    /// its `J` part.
    pub fn collect(&self, w: &Word) -> Result<Word> {
        let mut out = Word::empty();
        for s in self.normal_form(w)? {
            match s {
                KsSyllable::Outer(x) => out = out.mul(&x),
                KsSyllable::Inner { c_part, j_part } => out = out.mul(&c_part).mul(&j_part),
            }
        }
        Ok(out)
    }
}
