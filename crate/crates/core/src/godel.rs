//! Gödel numbering of words over `{a, b, a⁻¹, b⁻¹}`.
//!
//! Letters map to the digits `a ↦ 1`, `b ↦ 2`, `a⁻¹ ↦ 3`, `b⁻¹ ↦ 4`, and
//! a word maps to the decimal number spelled by its digits, with the
//! empty word mapped to `0`. The numbering is defined on raw words, so
//! `a⁻¹ a` has code `31` even though it reduces to the identity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::words::{Generator, Letter, Sign, Word};

/// The two generators of the free group numbered by the codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeAlphabet {
    pub a: Generator,
    pub b: Generator,
}

impl CodeAlphabet {
    pub fn new(a: Generator, b: Generator) -> Self {
        CodeAlphabet { a, b }
    }

    /// `a` and `b` in the empty namespace.
    pub fn plain() -> Self {
        CodeAlphabet::new(Generator::plain("a"), Generator::plain("b"))
    }

    pub fn letter(&self, digit: u8) -> Option<Letter> {
        let (g, sign) = match digit {
            1 => (&self.a, Sign::Pos),
            2 => (&self.b, Sign::Pos),
            3 => (&self.a, Sign::Neg),
            4 => (&self.b, Sign::Neg),
            _ => return None,
        };
        Some(Letter::new(g.clone(), sign))
    }

    pub fn digit(&self, letter: &Letter) -> Option<u8> {
        match (&letter.generator, letter.sign) {
            (g, Sign::Pos) if g == &self.a => Some(1),
            (g, Sign::Pos) if g == &self.b => Some(2),
            (g, Sign::Neg) if g == &self.a => Some(3),
            (g, Sign::Neg) if g == &self.b => Some(4),
            _ => None,
        }
    }
}

/// A code: a digit string over `{1,2,3,4}`; the empty string is `0`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GodelCode {
    digits: Vec<u8>,
}

impl GodelCode {
    pub fn zero() -> Self {
        GodelCode::default()
    }

    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = digits.iter().find(|d| !(1..=4).contains(*d)) {
            return Err(Error::InvalidDigit(char::from(b'0' + bad.min(9))));
        }
        Ok(GodelCode { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn concat(&self, other: &GodelCode) -> GodelCode {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        GodelCode { digits }
    }

    pub fn to_biguint(&self) -> BigUint {
        self.digits
            .iter()
            .fold(BigUint::default(), |acc, &d| acc * 10u32 + u32::from(d))
    }

    /// The value, if it fits in an `i64` (codes of words of length ≤ 18).
    pub fn to_i64(&self) -> Option<i64> {
        self.digits.iter().try_fold(0i64, |acc, &d| {
            acc.checked_mul(10)?.checked_add(i64::from(d))
        })
    }

    /// Code with the given value, if every decimal digit is in `1..=4`.
    pub fn from_i64(value: i64) -> Result<Self> {
        if value < 0 {
            return Err(Error::InvalidParameter(format!("negative code {value}")));
        }
        if value == 0 {
            return Ok(GodelCode::zero());
        }
        value.to_string().parse()
    }
}

impl Ord for GodelCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits
            .len()
            .cmp(&other.digits.len())
            .then_with(|| self.digits.cmp(&other.digits))
    }
}

impl PartialOrd for GodelCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GodelCode({self})")
    }
}

impl FromStr for GodelCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            return Ok(GodelCode::zero());
        }
        if s.is_empty() {
            return Err(Error::InvalidParameter("empty code".into()));
        }
        let digits = s
            .chars()
            .map(|c| match c {
                '1'..='4' => Ok(c as u8 - b'0'),
                other => Err(Error::InvalidDigit(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(GodelCode { digits })
    }
}

/// Code of `w` over the plain alphabet `{a, b}`.
pub fn encode(w: &Word) -> Result<GodelCode> {
    encode_with(w, &CodeAlphabet::plain())
}

pub fn encode_with(w: &Word, alphabet: &CodeAlphabet) -> Result<GodelCode> {
    let digits = w
        .letters()
        .map(|l| {
            alphabet
                .digit(&l)
                .ok_or_else(|| Error::NotInCodeAlphabet(l.generator.clone()))
        })
        .collect::<Result<Vec<u8>>>()?;
    Ok(GodelCode { digits })
}

pub fn decode(code: &GodelCode) -> Word {
    decode_with(code, &CodeAlphabet::plain())
}

/// The raw (unreduced) word with the given code.
pub fn decode_with(code: &GodelCode, alphabet: &CodeAlphabet) -> Word {
    Word::from_letters(
        code.digits
            .iter()
            .map(|&d| alphabet.letter(d).expect("digit invariant")),
    )
}

/// Every raw word over `{a, b, a⁻¹, b⁻¹}` of length exactly `n`, in code
/// order.
pub fn words_of_length(n: usize, alphabet: &CodeAlphabet) -> Vec<Word> {
    let mut codes: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..n {
        codes = codes
            .into_iter()
            .flat_map(|c| {
                (1..=4u8).map(move |d| {
                    let mut next = c.clone();
                    next.push(d);
                    next
                })
            })
            .collect();
    }
    codes
        .into_iter()
        .map(|digits| decode_with(&GodelCode { digits }, alphabet))
        .collect()
}
