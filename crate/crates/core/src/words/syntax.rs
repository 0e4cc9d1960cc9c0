//! Text syntax for words.
//!
//! Letters are whitespace separated. A letter is a generator
//! `[namespace.]name[_index]` optionally followed by `'` (inverse) or
//! `^k`. The token `1` is the identity, and `x_i^k ... x_j^k` expands to
//! the run of indices from `i` to `j` with the same exponent. Templates
//! additionally allow the parameter exponents `^s`, `^-s` and `^3s`.

use crate::error::{Error, Result};

use super::{Generator, Word};

/// Exponent of a parsed letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Exponent {
    Int(i64),
    /// Coefficient of the parameter `s`.
    Param(i64),
}

pub(crate) type SyntaxError = (usize, String);

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

fn generator_token(text: &str) -> std::result::Result<Generator, String> {
    let (namespace, local) = match text.rfind('.') {
        Some(pos) => (&text[..pos], &text[pos + 1..]),
        None => ("", text),
    };
    if !namespace.is_empty() && !namespace.split('.').all(is_ident) {
        return Err(format!("bad namespace in {text:?}"));
    }
    let (name, index) = match local.find('_') {
        Some(pos) => {
            let digits = &local[pos + 1..];
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(format!("bad generator index in {text:?}"));
            }
            let index = digits
                .parse::<u32>()
                .map_err(|_| format!("generator index out of range in {text:?}"))?;
            (&local[..pos], Some(index))
        }
        None => (local, None),
    };
    if !is_ident(name) {
        return Err(format!("bad generator name in {text:?}"));
    }
    Ok(Generator::new(namespace, name, index))
}

pub fn parse_generator(text: &str) -> Result<Generator> {
    generator_token(text.trim()).map_err(|m| Error::parse(1, 1, m))
}

fn exponent_token(text: &str, allow_param: bool) -> std::result::Result<Exponent, String> {
    if let Some(coef) = text.strip_suffix('s') {
        if !allow_param {
            return Err("parameter exponent outside a schema".into());
        }
        let coef = match coef {
            "" => 1,
            "-" => -1,
            c => c.parse::<i64>().map_err(|_| format!("bad exponent {text:?}"))?,
        };
        if coef == 0 {
            return Err("zero parameter coefficient".into());
        }
        return Ok(Exponent::Param(coef));
    }
    text.parse::<i64>()
        .map(Exponent::Int)
        .map_err(|_| format!("bad exponent {text:?}"))
}

fn letter_token(
    text: &str,
    allow_param: bool,
) -> std::result::Result<(Generator, Exponent), String> {
    if let Some(base) = text.strip_suffix('\'') {
        return Ok((generator_token(base)?, Exponent::Int(-1)));
    }
    match text.split_once('^') {
        Some((base, exp)) => Ok((generator_token(base)?, exponent_token(exp, allow_param)?)),
        None => Ok((generator_token(text)?, Exponent::Int(1))),
    }
}

/// Whitespace separated tokens with their 1-based column.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (text[..byte].chars().count() + 1, tok))
        .collect()
}

pub(crate) fn parse_letters(
    text: &str,
    allow_param: bool,
) -> std::result::Result<Vec<(Generator, Exponent)>, SyntaxError> {
    let toks = tokens(text);
    let mut out: Vec<(Generator, Exponent)> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let (col, tok) = toks[i];
        if tok == "1" {
            i += 1;
            continue;
        }
        if tok == "..." {
            let prev = out.last().cloned();
            let next = toks.get(i + 1);
            let (Some((from, exp)), Some(&(ncol, ntok))) = (prev, next) else {
                return Err((col, "ellipsis needs letters on both sides".into()));
            };
            let (to, nexp) = letter_token(ntok, allow_param).map_err(|m| (ncol, m))?;
            let same_family = from.namespace() == to.namespace() && from.name() == to.name();
            let (Some(a), Some(b)) = (from.index(), to.index()) else {
                return Err((col, "ellipsis endpoints must be indexed".into()));
            };
            if !same_family || exp != nexp {
                return Err((col, "ellipsis endpoints differ in name or exponent".into()));
            }
            let expand: Vec<u32> = if a <= b {
                (a + 1..=b).collect()
            } else {
                (b..a).rev().collect()
            };
            for k in expand {
                out.push((from.with_index(Some(k)), exp));
            }
            i += 2;
            continue;
        }
        out.push(letter_token(tok, allow_param).map_err(|m| (col, m))?);
        i += 1;
    }
    Ok(out)
}

pub(crate) fn word_from_parsed(
    letters: &[(Generator, Exponent)],
) -> std::result::Result<Word, String> {
    let mut w = Word::empty();
    for (g, e) in letters {
        match e {
            Exponent::Int(k) => w.push_raw(g, *k),
            Exponent::Param(_) => return Err("parameter exponent in a plain word".into()),
        }
    }
    Ok(w)
}

pub fn parse_word(text: &str) -> Result<Word> {
    let letters = parse_letters(text, false).map_err(|(c, m)| Error::parse(1, c, m))?;
    word_from_parsed(&letters).map_err(|m| Error::parse(1, 1, m))
}
