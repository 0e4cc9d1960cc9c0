use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::words::{Generator, Word};

use super::{canonical_relator, Presentation};

/// Data of an HNN extension: `stable⁻¹ · first · stable = second` for each
/// pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNNDescriptor {
    pub base: Presentation,
    pub stable: Generator,
    pub pairs: Vec<(Word, Word)>,
}

impl HNNDescriptor {
    pub fn new(base: Presentation, stable: Generator, pairs: Vec<(Word, Word)>) -> Result<Self> {
        if base.generators().contains(&stable) {
            return Err(Error::Collision(stable));
        }
        for (a, b) in &pairs {
            for g in a.generators().iter().chain(b.generators().iter()) {
                if !base.generators().contains(g) {
                    return Err(Error::UndeclaredGenerator(g.clone()));
                }
            }
        }
        Ok(HNNDescriptor {
            base,
            stable,
            pairs,
        })
    }

    /// `t⁻¹ a t b⁻¹` for the pair `(a, b)`.
    pub fn pair_relator(&self, a: &Word, b: &Word) -> Word {
        a.conjugate_by(&Word::letter(&self.stable)).mul(&b.inverse())
    }
}

/// Adds the stable letter and one relator `t⁻¹ a t b⁻¹` per pair.
pub fn hnn_extend(d: &HNNDescriptor) -> Result<Presentation> {
    let mut p = d.base.clone();
    p.add_generator(d.stable.clone())?;
    for (a, b) in &d.pairs {
        p.add_relator(&d.pair_relator(a, b))?;
    }
    Ok(p)
}

fn union(p: &Presentation, q: &Presentation) -> Result<Presentation> {
    let mut out = p.clone();
    for g in q.generators() {
        out.add_generator(g.clone())?;
    }
    for r in q.relators() {
        out.add_relator(r)?;
    }
    for s in q.schemas() {
        out.add_schema(s.clone())?;
    }
    Ok(out)
}

pub fn free_product(p: &Presentation, q: &Presentation) -> Result<Presentation> {
    union(p, q)
}

/// Free product of `p` and `q` with `a = b` for every pair `(a, b)`, `a`
/// over `p` and `b` over `q`.
pub fn amalgamated_product(
    p: &Presentation,
    q: &Presentation,
    pairs: &[(Word, Word)],
) -> Result<Presentation> {
    for (a, b) in pairs {
        if let Some(g) = a.generators().into_iter().find(|g| !p.generators().contains(g)) {
            return Err(Error::UndeclaredGenerator(g));
        }
        if let Some(g) = b.generators().into_iter().find(|g| !q.generators().contains(g)) {
            return Err(Error::UndeclaredGenerator(g));
        }
    }
    let mut out = union(p, q)?;
    for (a, b) in pairs {
        out.add_relator(&a.mul(&b.inverse()))?;
    }
    Ok(out)
}

/// Free product of `p` and `q` plus `[x, y]` for every `x` of `p` and `y`
/// of `q`.
pub fn direct_product(p: &Presentation, q: &Presentation) -> Result<Presentation> {
    let mut out = union(p, q)?;
    for x in p.generators() {
        for y in q.generators() {
            out.add_relator(&Word::commutator(&Word::letter(x), &Word::letter(y)))?;
        }
    }
    Ok(out)
}

/// Removes `g` using a relator freely equal (up to cyclic permutation and
/// inversion) to `g · defining⁻¹`, substituting `defining` for `g`
/// everywhere else.
pub fn tietze_eliminate(p: &Presentation, g: &Generator, defining: &Word) -> Result<Presentation> {
    if defining.contains_generator(g) {
        return Err(Error::SelfReferential(g.clone()));
    }
    if !p.generators().contains(g) {
        return Err(Error::UndeclaredGenerator(g.clone()));
    }
    let key = canonical_relator(&Word::letter(g).mul(&defining.inverse()));
    let position = p
        .relators()
        .iter()
        .position(|r| r == &key)
        .ok_or_else(|| Error::NoDefiningRelator(g.clone()))?;

    let generators = p.generators().iter().filter(|h| *h != g).cloned().collect();
    let relators = p
        .relators()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != position)
        .map(|(_, r)| r.replace_generator(g, defining))
        .collect::<Vec<_>>();
    let schemas = p
        .schemas()
        .iter()
        .map(|s| {
            s.map_template(|h, k| {
                if h != g {
                    return Ok((h.clone(), k));
                }
                match defining.syllables() {
                    [single] if single.exponent().abs() == 1 => {
                        Ok((single.generator().clone(), k * single.exponent()))
                    }
                    _ => Err(Error::SchemaSubstitution(g.clone())),
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Presentation::from_parts(generators, relators, schemas)
}

/// One row per relator (schema instances with `|s| ≤ bound`), one column
/// per generator, entries the exponent sums.
pub fn abelianized_relation_matrix(p: &Presentation, bound: u64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = p
        .all_relators(Some(bound))
        .iter()
        .map(|r| p.exponent_vector(r))
        .collect();
    IntMatrix::from_rows(p.generators().len(), &rows)
}
