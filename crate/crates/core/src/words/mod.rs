//! Free-group words over namespaced generators.

mod generator;
mod map;
pub(crate) mod syntax;
mod word;

pub use generator::{fresh_generator, Alphabet, Generator};
pub use map::GeneratorMap;
pub use syntax::{parse_generator, parse_word};
pub use word::{Letter, Sign, Syllable, Word};

/// Dense letter encoding used by the inner loops of folding and Dehn
/// reduction: generator `i` of an alphabet becomes `i + 1`, its inverse
/// `-(i + 1)`.
pub(crate) fn dense_letters(w: &Word, alphabet: &Alphabet) -> Option<Vec<i32>> {
    let mut out = Vec::with_capacity(w.len());
    for s in w.syllables() {
        let idx = alphabet.get_index_of(s.generator())? as i32 + 1;
        let code = if s.exponent() > 0 { idx } else { -idx };
        out.extend(std::iter::repeat_n(code, s.exponent().unsigned_abs() as usize));
    }
    Some(out)
}

pub(crate) fn word_from_dense(letters: &[i32], alphabet: &Alphabet) -> Word {
    let mut w = Word::empty();
    for &c in letters {
        let g = &alphabet[c.unsigned_abs() as usize - 1];
        w.push_raw(g, if c > 0 { 1 } else { -1 });
    }
    w
}
