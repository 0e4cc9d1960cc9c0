//! Pieces, the C'(1/6) condition and Dehn's algorithm.
//!
//! Relators are handled in a dense encoding: generator `i` of the
//! presentation's alphabet is `i + 1`, its inverse `-(i + 1)`. Elements of
//! the symmetrized set are never materialized; each is a (relator, offset,
//! direction) triple read through [`SymmetrizedRelatorSet::at`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{canonical_relator, IntegerSet, Presentation};
use crate::words::{dense_letters, word_from_dense, Alphabet, Generator, Word};

/// Relators of `p` that can take part in a Dehn step on a word of length
/// `word_length`: concrete relators, plus schema instances shorter than
/// `2 · word_length`.
pub fn relevant_relators(p: &Presentation, word_length: usize) -> Vec<Word> {
    let mut out: Vec<Word> = p.relators().to_vec();
    for schema in p.schemas() {
        for &s in schema.index_set().values() {
            if s == 0 || schema.instance_len(s) >= 2 * word_length {
                continue;
            }
            if schema.truncation_bound().is_some_and(|b| s.unsigned_abs() > b) {
                continue;
            }
            let r = canonical_relator(&schema.instance(s));
            if !r.is_empty() && !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Elem {
    rel: u32,
    offset: u32,
    inverted: bool,
}

fn letter_key(c: i32) -> (u32, bool) {
    (c.unsigned_abs(), c < 0)
}

/// All cyclic permutations of a finite list of relators and their inverses.
#[derive(Clone, Debug)]
pub struct SymmetrizedRelatorSet {
    alphabet: Alphabet,
    relators: Vec<Vec<i32>>,
}

impl SymmetrizedRelatorSet {
    /// Relators are cyclically reduced; empty ones are dropped.
    pub fn new(alphabet: Alphabet, relators: &[Word]) -> Result<Self> {
        let mut dense = Vec::with_capacity(relators.len());
        for r in relators {
            let (core, _) = r.cyclic_reduce();
            if core.is_empty() {
                continue;
            }
            let letters = dense_letters(&core, &alphabet).ok_or_else(|| {
                let g = core.generators().into_iter().find(|g| !alphabet.contains(g)).expect("foreign letter");
                Error::UndeclaredGenerator(g)
            })?;
            dense.push(letters);
        }
        Ok(SymmetrizedRelatorSet { alphabet, relators: dense })
    }

    /// The symmetrized closure of `p`'s relators, schema instances taken up
    /// to `|s| ≤ bound`.
    pub fn from_presentation(p: &Presentation, bound: Option<u64>) -> Result<Self> {
        Self::new(p.generators().clone(), &p.all_relators(bound))
    }

    pub fn relators(&self) -> Vec<Word> {
        self.relators.iter().map(|r| word_from_dense(r, &self.alphabet)).collect()
    }

    /// Number of elements of the closure, counted with multiplicity.
    pub fn closure_size(&self) -> usize {
        2 * self.relators.iter().map(Vec::len).sum::<usize>()
    }

    fn len(&self, e: Elem) -> usize {
        self.relators[e.rel as usize].len()
    }

    fn at(&self, e: Elem, i: usize) -> i32 {
        let r = &self.relators[e.rel as usize];
        let n = r.len();
        let j = (e.offset as usize + i) % n;
        if e.inverted {
            -r[n - 1 - j]
        } else {
            r[j]
        }
    }

    fn elements(&self, relator_count: usize) -> Vec<Elem> {
        let mut out = Vec::new();
        for (rel, r) in self.relators.iter().enumerate().take(relator_count) {
            for inverted in [false, true] {
                for offset in 0..r.len() {
                    out.push(Elem { rel: rel as u32, offset: offset as u32, inverted });
                }
            }
        }
        out
    }

    fn element_word(&self, e: Elem, len: usize) -> Word {
        let letters: Vec<i32> = (0..len).map(|i| self.at(e, i)).collect();
        word_from_dense(&letters, &self.alphabet)
    }

    fn cmp(&self, x: Elem, y: Elem) -> Ordering {
        let (nx, ny) = (self.len(x), self.len(y));
        for i in 0..nx.min(ny) {
            let o = letter_key(self.at(x, i)).cmp(&letter_key(self.at(y, i)));
            if o != Ordering::Equal {
                return o;
            }
        }
        nx.cmp(&ny)
    }

    // Longest common prefix; two copies of the same word share at most len - 1.
    fn lcp(&self, x: Elem, y: Elem) -> usize {
        let (nx, ny) = (self.len(x), self.len(y));
        let n = nx.min(ny);
        let mut k = 0;
        while k < n && self.at(x, k) == self.at(y, k) {
            k += 1;
        }
        if k == nx && nx == ny {
            k - 1
        } else {
            k
        }
    }

    fn pieces(&self, relator_count: usize) -> PieceReport {
        let mut elems = self.elements(relator_count);
        elems.sort_by(|&x, &y| self.cmp(x, y));
        let mut report = PieceReport {
            max_piece_length: 0,
            ratio: Ratio::new(0, 1),
            witness: None,
            relator_count: relator_count.min(self.relators.len()),
        };
        let adjacent: Vec<usize> = elems.windows(2).map(|p| self.lcp(p[0], p[1])).collect();
        for (i, &x) in elems.iter().enumerate() {
            let left = if i > 0 { adjacent[i - 1] } else { 0 };
            let right = adjacent.get(i).copied().unwrap_or(0);
            let (best, partner) = if right > left { (right, i + 1) } else { (left, i.wrapping_sub(1)) };
            report.max_piece_length = report.max_piece_length.max(best);
            if best == 0 {
                continue;
            }
            let ratio = Ratio::new(best as u64, self.len(x) as u64);
            if ratio > report.ratio {
                let y = elems[partner];
                report.ratio = ratio;
                report.witness = Some(PieceWitness {
                    left: self.element_word(x, self.len(x)),
                    right: self.element_word(y, self.len(y)),
                    piece: self.element_word(x, best),
                });
            }
        }
        report
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceWitness {
    pub left: Word,
    pub right: Word,
    pub piece: Word,
}

/// Result of a piece scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceReport {
    pub max_piece_length: usize,
    /// Largest `|piece| / |relator|` over all relators containing the piece.
    pub ratio: Ratio<u64>,
    pub witness: Option<PieceWitness>,
    pub relator_count: usize,
}

impl PieceReport {
    /// Whether the scanned relators satisfy C'(λ).
    pub fn satisfies(&self, lambda: Ratio<u64>) -> bool {
        self.ratio < lambda
    }

    pub fn is_c16(&self) -> bool {
        self.satisfies(Ratio::new(1, 6))
    }
}

impl Serialize for PieceReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Fraction {
            numerator: u64,
            denominator: u64,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            relators: usize,
            max_piece_length: usize,
            ratio: Fraction,
            c16: bool,
            witness: &'a Option<PieceWitness>,
        }
        Doc {
            relators: self.relator_count,
            max_piece_length: self.max_piece_length,
            ratio: Fraction { numerator: *self.ratio.numer(), denominator: *self.ratio.denom() },
            c16: self.is_c16(),
            witness: &self.witness,
        }
        .serialize(s)
    }
}

/// Piece scan over the whole symmetrized set.
pub fn compute_pieces(rs: &SymmetrizedRelatorSet) -> PieceReport {
    rs.pieces(rs.relators.len())
}

/// Dehn's algorithm for a fixed presentation. Relators are sorted by
/// length; the C'(1/6) check runs once per length threshold that a word
/// actually needs.
#[derive(Debug)]
pub struct DehnSolver {
    set: SymmetrizedRelatorSet,
    by_first: HashMap<i32, Vec<Elem>>,
    checked: Mutex<HashMap<usize, PieceReport>>,
}

impl DehnSolver {
    pub fn new(p: &Presentation) -> Result<Self> {
        Self::from_relators(p.generators().clone(), &p.all_relators(None))
    }

    pub fn from_relators(alphabet: Alphabet, relators: &[Word]) -> Result<Self> {
        let mut set = SymmetrizedRelatorSet::new(alphabet, relators)?;
        set.relators.sort_by_key(Vec::len);
        let mut by_first: HashMap<i32, Vec<Elem>> = HashMap::new();
        let mut elems = set.elements(set.relators.len());
        elems.sort_by(|&x, &y| set.cmp(x, y));
        for e in elems {
            by_first.entry(set.at(e, 0)).or_default().push(e);
        }
        Ok(DehnSolver { set, by_first, checked: Mutex::new(HashMap::new()) })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.set.alphabet
    }

    fn relevant_count(&self, word_length: usize) -> usize {
        self.set.relators.partition_point(|r| r.len() < 2 * word_length)
    }

    /// Piece report for the relators a word of this length can use.
    pub fn pieces_for(&self, word_length: usize) -> PieceReport {
        let k = self.relevant_count(word_length);
        let mut cache = self.checked.lock().expect("piece cache");
        cache.entry(k).or_insert_with(|| self.set.pieces(k)).clone()
    }

    fn dense(&self, w: &Word) -> Result<Vec<i32>> {
        dense_letters(w, &self.set.alphabet).ok_or_else(|| {
            let g = w.generators().into_iter().find(|g| !self.set.alphabet.contains(g)).expect("foreign");
            Error::UndeclaredGenerator(g)
        })
    }

    /// Dehn-reduces `w`, returning a cyclically reduced word conjugate to it.
    /// Fails unless the relators relevant to `w` are C'(1/6).
    pub fn dehn_reduce(&self, w: &Word) -> Result<Word> {
        let w = w.reduce();
        let report = self.pieces_for(w.len());
        if !report.is_c16() {
            return Err(Error::NotSmallCancellation {
                numerator: *report.ratio.numer(),
                denominator: *report.ratio.denom(),
            });
        }
        let k = report.relator_count;
        let mut letters = cyclic_core(free_reduce(self.dense(&w)?));
        while let Some((m, pos, e)) = self.best_match(&letters, k) {
            let n = letters.len();
            let len = self.set.len(e);
            let mut next: Vec<i32> = (m..len).rev().map(|i| -self.set.at(e, i)).collect();
            next.extend((m..n).map(|i| letters[(pos + i) % n]));
            debug_assert!(next.len() < n);
            letters = cyclic_core(free_reduce(next));
        }
        Ok(word_from_dense(&letters, &self.set.alphabet))
    }

    // Longest match of more than half a relator against the cyclic word;
    // ties go to the leftmost start, then to the least element.
    fn best_match(&self, w: &[i32], relator_count: usize) -> Option<(usize, usize, Elem)> {
        let n = w.len();
        let mut best: Option<(usize, usize, Elem)> = None;
        for pos in 0..n {
            let Some(cands) = self.by_first.get(&w[pos]) else { continue };
            for &e in cands {
                if e.rel as usize >= relator_count {
                    continue;
                }
                let len = self.set.len(e);
                let cap = n.min(len);
                let mut m = 0;
                while m < cap && w[(pos + m) % n] == self.set.at(e, m) {
                    m += 1;
                }
                if 2 * m > len && best.is_none_or(|(bm, _, _)| m > bm) {
                    best = Some((m, pos, e));
                }
            }
        }
        best
    }

    /// Decides triviality of `w` by Greendlinger's lemma.
    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.dehn_reduce(w)?.is_empty())
    }
}

fn free_reduce(letters: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for c in letters {
        if out.last() == Some(&-c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

fn cyclic_core(mut letters: Vec<i32>) -> Vec<i32> {
    let mut i = 0;
    let mut j = letters.len();
    while j > i + 1 && letters[i] == -letters[j - 1] {
        i += 1;
        j -= 1;
    }
    letters.truncate(j);
    letters.drain(..i);
    letters
}

/// Dehn reduction of `w` using the relators of `p` relevant to its length.
pub fn dehn_reduce(p: &Presentation, w: &Word) -> Result<Word> {
    DehnSolver::from_relators(p.generators().clone(), &relevant_relators(p, w.reduce().len()))?.dehn_reduce(w)
}

/// Whether `w` is trivial in `p`, which must be C'(1/6) on the relators
/// that matter for `w`.
pub fn c16_is_identity(p: &Presentation, w: &Word) -> Result<bool> {
    Ok(dehn_reduce(p, w)?.is_empty())
}

/// A group with marked generators `j_1 … j_l` and a word-problem oracle.
pub trait Encoder: Send + Sync {
    fn presentation(&self) -> &Presentation;
    fn marked(&self) -> &[Generator];
    fn is_identity(&self, w: &Word) -> Result<bool>;
}

/// `J'(l, S) = ⟨j_1 … j_l | j_1^s ⋯ j_l^s, s ∈ S⟩`, decided by Dehn's
/// algorithm. For `l < 13` the group is built but decisions are refused.
#[derive(Debug)]
pub struct JPrimeEncoder {
    l: usize,
    set: IntegerSet,
    presentation: Presentation,
    marked: Vec<Generator>,
    solver: DehnSolver,
}

impl JPrimeEncoder {
    pub fn new(l: usize, set: IntegerSet, namespace: &str) -> Result<Self> {
        let presentation = crate::constructions::jprime_presentation(l, &set)?.with_namespace(namespace)?;
        let marked = presentation.generators().iter().cloned().collect();
        let solver = DehnSolver::new(&presentation)?;
        Ok(JPrimeEncoder { l, set, presentation, marked, solver })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn set(&self) -> &IntegerSet {
        &self.set
    }

    pub fn solver(&self) -> &DehnSolver {
        &self.solver
    }

    /// `j_1^s ⋯ j_l^s`.
    pub fn diagonal(&self, s: i64) -> Word {
        Word::from_runs(self.marked.iter().map(|g| (g, s)))
    }

    /// The weaker check available for every `l`: `w` is trivial because it
    /// is, up to conjugacy and inversion, one of the defining relators.
    pub fn is_relator_instance(&self, w: &Word) -> bool {
        let r = canonical_relator(w);
        r.is_empty() || self.presentation.all_relators(None).contains(&r)
    }
}

impl Encoder for JPrimeEncoder {
    fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    fn marked(&self) -> &[Generator] {
        &self.marked
    }

    fn is_identity(&self, w: &Word) -> Result<bool> {
        if self.l < 13 {
            return Err(Error::Refused(format!(
                "J'({}, S) is only known to be C'(1/6) for l >= 13",
                self.l
            )));
        }
        self.solver.is_identity(w)
    }
}
