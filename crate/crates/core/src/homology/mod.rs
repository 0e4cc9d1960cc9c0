//! Finite truncations of the partial Cayley complex and integral boundary
//! certificates.
//!
//! A relator loop represents zero in the first homology of the partial
//! complex when its edge chain is an integer combination of 2-cell
//! boundaries. Inside a finite ball this is exact integer linear algebra;
//! failing to find a combination at one radius says nothing about larger
//! radii.

mod coset;
mod oracle;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::presentation::Presentation;
use crate::words::{Alphabet, Word};

pub use coset::CosetTable;
pub use oracle::{AbelianOracle, ClosureOracle, DehnOracle, FiniteOracle, FreeOracle, OracleSpec, WordProblem};

/// The first `m` relators of `p`, schema instances included.
pub fn designated_relators(p: &Presentation, m: usize) -> Result<Vec<Word>> {
    let all = p.all_relators(None);
    if m > all.len() {
        return Err(Error::InvalidParameter(format!(
            "{m} designated relators requested but the presentation has {}",
            all.len()
        )));
    }
    Ok(all[..m].to_vec())
}

/// Identifies group elements through an oracle.
struct ElementIndex<'a> {
    oracle: &'a dyn WordProblem,
    words: Vec<Word>,
    keys: HashMap<String, usize>,
}

impl<'a> ElementIndex<'a> {
    fn new(oracle: &'a dyn WordProblem) -> Self {
        ElementIndex { oracle, words: Vec::new(), keys: HashMap::new() }
    }

    fn find(&self, w: &Word) -> Result<Option<usize>> {
        if let Some(k) = self.oracle.key(w)? {
            return Ok(self.keys.get(&k).copied());
        }
        for (i, v) in self.words.iter().enumerate() {
            if self.oracle.is_identity(&w.mul(&v.inverse()))? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn find_or_insert(&mut self, w: &Word) -> Result<usize> {
        if let Some(i) = self.find(w)? {
            return Ok(i);
        }
        self.insert(w.reduce())
    }

    fn insert(&mut self, w: Word) -> Result<usize> {
        let i = self.words.len();
        if let Some(k) = self.oracle.key(&w)? {
            self.keys.insert(k, i);
        }
        self.words.push(w);
        Ok(i)
    }
}

/// Radius-ρ ball of the partial Cayley complex with all 2-cells whose
/// boundary lies inside it.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    alphabet: Alphabet,
    relators: Vec<Word>,
    radius: usize,
    vertices: Vec<Word>,
    // (from, generator index, to)
    edges: Vec<(usize, usize, usize)>,
    forward: HashMap<(usize, usize), usize>,
    backward: HashMap<(usize, usize), usize>,
    // (vertex, relator index)
    cells: Vec<(usize, usize)>,
}

impl CayleyBall {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Canonical words of the vertices; vertex 0 is the identity.
    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    // Edge chain of the path reading `w` from `start`, and its end vertex.
    fn path_chain(&self, start: usize, w: &Word) -> Option<(Vec<i64>, usize)> {
        let mut chain = vec![0i64; self.edges.len()];
        let mut v = start;
        for l in w.letters() {
            let g = self.alphabet.get_index_of(&l.generator)?;
            if l.sign.value() > 0 {
                let e = *self.forward.get(&(v, g))?;
                chain[e] += 1;
                v = self.edges[e].2;
            } else {
                let e = *self.backward.get(&(v, g))?;
                chain[e] -= 1;
                v = self.edges[e].0;
            }
        }
        Some((chain, v))
    }

    /// Cell-boundary matrix: one row per edge, one column per cell.
    pub fn boundary_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.edges.len(), self.cells.len());
        for (j, &(v, r)) in self.cells.iter().enumerate() {
            let (chain, _) = self.path_chain(v, &self.relators[r]).expect("cells lie in the ball");
            for (i, x) in chain.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }
}

/// Builds the radius-ρ ball of the complex with generators of `alphabet`
/// and 2-cells for `relators`; `oracle` must decide the word problem of
/// the group they present.
pub fn cayley_ball(
    alphabet: &Alphabet,
    relators: &[Word],
    oracle: &dyn WordProblem,
    radius: usize,
) -> Result<CayleyBall> {
    let mut index = ElementIndex::new(oracle);
    index.insert(Word::empty())?;
    let mut layer = vec![0];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &layer {
            for g in alphabet {
                for k in [1, -1] {
                    let cand = index.words[v].mul(&Word::power(g, k));
                    if index.find(&cand)?.is_none() {
                        next.push(index.insert(cand)?);
                    }
                }
            }
        }
        layer = next;
    }
    let vertices = index.words.clone();
    let mut edges = Vec::new();
    let mut forward = HashMap::new();
    let mut backward = HashMap::new();
    for (v, word) in vertices.iter().enumerate() {
        for (gi, g) in alphabet.iter().enumerate() {
            if let Some(t) = index.find(&word.mul(&Word::letter(g)))? {
                forward.insert((v, gi), edges.len());
                backward.insert((t, gi), edges.len());
                edges.push((v, gi, t));
            }
        }
    }
    let mut ball = CayleyBall {
        alphabet: alphabet.clone(),
        relators: relators.to_vec(),
        radius,
        vertices,
        edges,
        forward,
        backward,
        cells: Vec::new(),
    };
    for v in 0..ball.vertices.len() {
        for (r, rel) in ball.relators.iter().enumerate() {
            if let Some((_, end)) = ball.path_chain(v, rel) {
                if end != v {
                    return Err(Error::NotALoop);
                }
                ball.cells.push((v, r));
            }
        }
    }
    Ok(ball)
}

/// Coefficient of one 2-cell in a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCoefficient {
    pub vertex: Word,
    pub relator: usize,
    pub coefficient: i64,
}

/// An integral 2-chain whose boundary is the loop of `target` at the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCertificate {
    pub radius: usize,
    pub target: Word,
    pub cells: Vec<CellCoefficient>,
}

/// Searches the ball for a 2-chain bounding `r`. `Ok(None)` is
/// inconclusive: a larger radius may still succeed.
pub fn boundary_certificate(ball: &CayleyBall, r: &Word) -> Result<Option<BoundaryCertificate>> {
    let (target, end) = ball
        .path_chain(0, r)
        .ok_or(Error::LoopExitsBall { radius: ball.radius })?;
    if end != 0 {
        return Err(Error::NotALoop);
    }
    let d = ball.boundary_matrix();
    if d.cols() == 0 {
        return Ok(target.iter().all(|&x| x == 0).then(|| BoundaryCertificate {
            radius: ball.radius,
            target: r.clone(),
            cells: Vec::new(),
        }));
    }
    let Some(x) = d.solve_column_combination(&target)? else {
        return Ok(None);
    };
    let cells = ball
        .cells
        .iter()
        .zip(x)
        .filter(|(_, c)| *c != 0)
        .map(|(&(v, rel), coefficient)| CellCoefficient {
            vertex: ball.vertices[v].clone(),
            relator: rel,
            coefficient,
        })
        .collect();
    Ok(Some(BoundaryCertificate { radius: ball.radius, target: r.clone(), cells }))
}

/// Iterative deepening from radius 0 up to `max_radius`.
pub fn find_certificate(
    alphabet: &Alphabet,
    relators: &[Word],
    oracle: &dyn WordProblem,
    r: &Word,
    max_radius: usize,
) -> Result<BoundaryCertificate> {
    for radius in 0..=max_radius {
        let ball = cayley_ball(alphabet, relators, oracle, radius)?;
        match boundary_certificate(&ball, r) {
            Ok(Some(cert)) => return Ok(cert),
            Ok(None) | Err(Error::LoopExitsBall { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Inconclusive {
        radius: max_radius,
        reason: format!("no 2-chain bounds {r} within the ball"),
    })
}

/// Checks a certificate without the ball or the solver: every cell's
/// boundary path is traced from its vertex, edges are identified through
/// the oracle, and the signed sum must equal the target loop.
pub fn verify_certificate(
    alphabet: &Alphabet,
    relators: &[Word],
    oracle: &dyn WordProblem,
    cert: &BoundaryCertificate,
) -> Result<bool> {
    let mut index = ElementIndex::new(oracle);
    let mut chain: HashMap<(usize, usize), i64> = HashMap::new();
    let mut trace = |start: &Word, w: &Word, coef: i64, index: &mut ElementIndex| -> Result<Word> {
        let mut at = start.clone();
        for l in w.letters() {
            let g = alphabet
                .get_index_of(&l.generator)
                .ok_or_else(|| Error::UndeclaredGenerator(l.generator.clone()))?;
            let step = Word::power(&l.generator, l.sign.value());
            let (from, next) = if l.sign.value() > 0 {
                let from = index.find_or_insert(&at)?;
                (from, at.mul(&step))
            } else {
                let next = at.mul(&step);
                (index.find_or_insert(&next)?, next)
            };
            *chain.entry((from, g)).or_insert(0) += coef * l.sign.value();
            at = next;
        }
        Ok(at)
    };
    for c in &cert.cells {
        let Some(rel) = relators.get(c.relator) else {
            return Ok(false);
        };
        trace(&c.vertex, rel, c.coefficient, &mut index)?;
    }
    let end = trace(&Word::empty(), &cert.target, -1, &mut index)?;
    if !oracle.is_identity(&end)? {
        return Ok(false);
    }
    Ok(chain.values().all(|&x| x == 0))
}

/// Self-contained certificate file: the presentation, the number of
/// designated relators, the oracle and the chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub presentation: Presentation,
    pub designated: usize,
    pub oracle: OracleSpec,
    pub certificate: BoundaryCertificate,
}

impl CertificateFile {
    pub fn verify(&self) -> Result<bool> {
        let relators = designated_relators(&self.presentation, self.designated)?;
        let oracle = self.oracle.build(self.presentation.generators(), &relators)?;
        verify_certificate(self.presentation.generators(), &relators, oracle.as_ref(), &self.certificate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        text.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_group_ball() {
        let p = pres("gens: a\nrel: a\n");
        let rels = designated_relators(&p, 1).unwrap();
        let oracle = FiniteOracle::new(p.generators(), &rels, 10).unwrap();
        let ball = cayley_ball(p.generators(), &rels, &oracle, 1).unwrap();
        assert_eq!(ball.vertices().len(), 1);
        assert_eq!(ball.edge_count(), 1);
        assert_eq!(ball.cells().len(), 1);
        let cert = boundary_certificate(&ball, &w("a^2")).unwrap().unwrap();
        assert_eq!(cert.cells.len(), 1);
        assert_eq!(cert.cells[0].coefficient, 2);
        assert!(verify_certificate(p.generators(), &rels, &oracle, &cert).unwrap());
    }

    #[test]
    fn lattice_ball() {
        let p = pres("gens: a b\nrel: a b a' b'\n");
        let rels = designated_relators(&p, 1).unwrap();
        let oracle = AbelianOracle::new(p.generators(), &rels).unwrap();
        let ball = cayley_ball(p.generators(), &rels, &oracle, 2).unwrap();
        assert_eq!(ball.vertices().len(), 13);
        assert_eq!(ball.cells().len(), 4);

        let r = Word::commutator(&w("a^2"), &w("b"));
        let ball = cayley_ball(p.generators(), &rels, &oracle, 3).unwrap();
        let cert = boundary_certificate(&ball, &r).unwrap().unwrap();
        let mut cells: Vec<_> = cert.cells.iter().map(|c| (c.vertex.to_string(), c.coefficient.abs())).collect();
        cells.sort();
        assert_eq!(cells, vec![("1".to_string(), 1), ("a".to_string(), 1)]);
        assert!(verify_certificate(p.generators(), &rels, &oracle, &cert).unwrap());

        // a forged coefficient is caught
        let mut forged = cert.clone();
        forged.cells[0].coefficient *= 2;
        assert!(!verify_certificate(p.generators(), &rels, &oracle, &forged).unwrap());
    }

    #[test]
    fn free_ball_has_no_cells() {
        let p = pres("gens: a b\n");
        let ball = cayley_ball(p.generators(), &[], &FreeOracle, 2).unwrap();
        assert_eq!(ball.vertices().len(), 17);
        assert!(ball.cells().is_empty());
        let r = Word::commutator(&w("a"), &w("b"));
        assert!(matches!(boundary_certificate(&ball, &r), Err(Error::LoopExitsBall { .. })));
        let ball4 = cayley_ball(p.generators(), &[], &FreeOracle, 4).unwrap();
        assert!(matches!(boundary_certificate(&ball4, &r), Err(Error::NotALoop)));
        // a backtracking loop bounds the empty chain
        let cert = boundary_certificate(&ball, &w("a b b' a'")).unwrap().unwrap();
        assert!(cert.cells.is_empty());
    }

    #[test]
    fn loop_without_designated_cells() {
        let p = pres("gens: a b\n");
        let z2 = AbelianOracle::new(p.generators(), &[Word::commutator(&w("a"), &w("b"))]).unwrap();
        let r = Word::commutator(&w("a"), &w("b"));
        let ball = cayley_ball(p.generators(), &[], &z2, 2).unwrap();
        assert_eq!(boundary_certificate(&ball, &r).unwrap(), None);
        assert!(matches!(
            find_certificate(p.generators(), &[], &z2, &r, 3),
            Err(Error::Inconclusive { radius: 3, .. })
        ));
    }

    #[test]
    fn pairwise_oracle_matches_keyed_oracle() {
        let p = pres("gens: a b\nrel: a b a' b'\n");
        let rels = designated_relators(&p, 1).unwrap();
        let keyed = AbelianOracle::new(p.generators(), &rels).unwrap();
        let pairwise = ClosureOracle(|x: &Word| keyed.is_identity(x));
        let a = cayley_ball(p.generators(), &rels, &keyed, 2).unwrap();
        let b = cayley_ball(p.generators(), &rels, &pairwise, 2).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.cells(), b.cells());
    }

    #[test]
    fn certificate_file_round_trips() {
        let p = pres("gens: a\nrel: a\n");
        let rels = designated_relators(&p, 1).unwrap();
        let spec = OracleSpec::Finite { max_cosets: 10 };
        let oracle = spec.build(p.generators(), &rels).unwrap();
        let cert = find_certificate(p.generators(), &rels, oracle.as_ref(), &w("a^2"), 2).unwrap();
        let file = CertificateFile { presentation: p, designated: 1, oracle: spec, certificate: cert };
        let text = serde_json::to_string(&file).unwrap();
        let back: CertificateFile = serde_json::from_str(&text).unwrap();
        assert!(back.verify().unwrap());
    }
}
