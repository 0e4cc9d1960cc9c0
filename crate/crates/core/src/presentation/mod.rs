//! Group presentations with concrete relators and relator schemas, and
//! the constructions built from them: HNN extensions, free and direct
//! products, amalgams and Tietze elimination.

mod format;
mod ops;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::words::{Alphabet, Generator, Word};

pub use ops::{
    abelianized_relation_matrix, amalgamated_product, direct_product, free_product, hnn_extend,
    tietze_eliminate, HNNDescriptor,
};

/// A finite explicit set of integers that always contains `0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntegerSet {
    values: Vec<i64>,
}

impl IntegerSet {
    /// Fails unless `0` is among the values.
    pub fn new(values: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut values: Vec<i64> = values.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        if values.binary_search(&0).is_err() {
            return Err(Error::InvalidParameter("integer set must contain 0".into()));
        }
        Ok(IntegerSet { values })
    }

    /// The given values together with `0`.
    pub fn with_zero(values: impl IntoIterator<Item = i64>) -> Self {
        IntegerSet::new(values.into_iter().chain([0])).expect("contains zero")
    }

    pub fn zero() -> Self {
        IntegerSet { values: vec![0] }
    }

    pub fn contains(&self, s: i64) -> bool {
        self.values.binary_search(&s).is_ok()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nonzero(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.iter().copied().filter(|&s| s != 0)
    }

    /// Elements with `|s| ≤ bound`.
    pub fn truncated(&self, bound: u64) -> IntegerSet {
        IntegerSet {
            values: self
                .values
                .iter()
                .copied()
                .filter(|s| s.unsigned_abs() <= bound)
                .collect(),
        }
    }
}

impl TryFrom<Vec<i64>> for IntegerSet {
    type Error = Error;

    fn try_from(values: Vec<i64>) -> Result<Self> {
        IntegerSet::new(values)
    }
}

impl From<IntegerSet> for Vec<i64> {
    fn from(s: IntegerSet) -> Vec<i64> {
        s.values
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A family of relators `g_1^{k_1 s} g_2^{k_2 s} …` indexed by `s` in an
/// explicit integer set. The `s = 0` instance is the empty word and is
/// never produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorSchema {
    template: Vec<(Generator, i64)>,
    index_set: IntegerSet,
    truncation_bound: Option<u64>,
}

impl RelatorSchema {
    /// `template` lists `(generator, coefficient of s)`; adjacent entries
    /// of one generator are merged.
    pub fn new(template: Vec<(Generator, i64)>, index_set: IntegerSet) -> Result<Self> {
        let mut merged: Vec<(Generator, i64)> = Vec::new();
        for (g, k) in template {
            match merged.last_mut() {
                Some((h, c)) if *h == g => {
                    *c += k;
                    if *c == 0 {
                        merged.pop();
                    }
                }
                _ if k != 0 => merged.push((g, k)),
                _ => {}
            }
        }
        if merged.is_empty() {
            return Err(Error::InvalidParameter("empty relator schema".into()));
        }
        Ok(RelatorSchema {
            template: merged,
            index_set,
            truncation_bound: None,
        })
    }

    /// Records the truncation bound under which `index_set` was chosen.
    pub fn with_truncation_bound(mut self, bound: u64) -> Self {
        self.truncation_bound = Some(bound);
        self
    }

    pub fn template(&self) -> &[(Generator, i64)] {
        &self.template
    }

    pub fn index_set(&self) -> &IntegerSet {
        &self.index_set
    }

    pub fn truncation_bound(&self) -> Option<u64> {
        self.truncation_bound
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.template.iter().map(|(g, _)| g)
    }

    /// Length of the instance at `s`, without building it.
    pub fn instance_len(&self, s: i64) -> usize {
        self.template
            .iter()
            .map(|(_, k)| (k * s).unsigned_abs() as usize)
            .sum()
    }

    pub fn instance(&self, s: i64) -> Word {
        Word::from_runs(self.template.iter().map(|(g, k)| (g, k * s))).reduce()
    }

    /// `(s, relator)` for every nonzero `s` in the set with `|s| ≤ bound`.
    /// The schema's own truncation bound, if any, applies as well.
    pub fn instances(&self, bound: Option<u64>) -> Vec<(i64, Word)> {
        let bound = match (bound, self.truncation_bound) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.index_set
            .nonzero()
            .filter(|s| bound.is_none_or(|b| s.unsigned_abs() <= b))
            .map(|s| (s, canonical_relator(&self.instance(s))))
            .filter(|(_, w)| !w.is_empty())
            .collect()
    }

    pub(crate) fn map_template(
        &self,
        mut f: impl FnMut(&Generator, i64) -> Result<(Generator, i64)>,
    ) -> Result<RelatorSchema> {
        let template = self
            .template
            .iter()
            .map(|(g, k)| f(g, *k))
            .collect::<Result<Vec<_>>>()?;
        Ok(RelatorSchema {
            template,
            index_set: self.index_set.clone(),
            truncation_bound: self.truncation_bound,
        })
    }
}

/// Least rotation of `s` in lexicographic order.
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (a, b) = (&s[(i + k) % n], &s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Canonical representative of a relator up to cyclic permutation and
/// inversion: the lexicographically least rotation of the cyclically
/// reduced word or of its inverse.
pub fn canonical_relator(w: &Word) -> Word {
    let (core, _) = w.cyclic_reduce();
    if core.is_empty() {
        return core;
    }
    let best = |word: &Word| {
        let letters: Vec<_> = word.letters().collect();
        let k = least_rotation(&letters);
        letters[k..].iter().chain(&letters[..k]).cloned().collect::<Vec<_>>()
    };
    let forward = best(&core);
    let backward = best(&core.inverse());
    Word::from_letters(if backward < forward { backward } else { forward })
}

/// Generators, concrete relators and relator schemas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    generators: Alphabet,
    relators: Vec<Word>,
    schemas: Vec<RelatorSchema>,
}

impl Presentation {
    /// The free group on `generators`.
    pub fn free(generators: impl IntoIterator<Item = Generator>) -> Self {
        Presentation {
            generators: generators.into_iter().collect(),
            ..Presentation::default()
        }
    }

    pub fn generators(&self) -> &Alphabet {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn schemas(&self) -> &[RelatorSchema] {
        &self.schemas
    }

    pub fn add_generator(&mut self, g: Generator) -> Result<()> {
        if !self.generators.insert(g.clone()) {
            return Err(Error::Collision(g));
        }
        Ok(())
    }

    fn check_declared<'a>(&self, gens: impl IntoIterator<Item = &'a Generator>) -> Result<()> {
        for g in gens {
            if !self.generators.contains(g) {
                return Err(Error::UndeclaredGenerator(g.clone()));
            }
        }
        Ok(())
    }

    /// Adds the canonical form of `w`. Returns `false` when the relator is
    /// trivial or already present.
    pub fn add_relator(&mut self, w: &Word) -> Result<bool> {
        self.check_declared(&w.generators())?;
        let r = canonical_relator(w);
        if r.is_empty() || self.relators.contains(&r) {
            return Ok(false);
        }
        self.relators.push(r);
        Ok(true)
    }

    pub fn add_schema(&mut self, schema: RelatorSchema) -> Result<()> {
        self.check_declared(schema.generators())?;
        if !self.schemas.contains(&schema) {
            self.schemas.push(schema);
        }
        Ok(())
    }

    pub fn has_relator(&self, w: &Word) -> bool {
        let r = canonical_relator(w);
        self.relators.contains(&r)
    }

    /// Concrete relators followed by schema instances with `|s| ≤ bound`.
    pub fn all_relators(&self, bound: Option<u64>) -> Vec<Word> {
        let mut seen: HashSet<Word> = self.relators.iter().cloned().collect();
        let mut out = self.relators.clone();
        for schema in &self.schemas {
            for (_, w) in schema.instances(bound) {
                if seen.insert(w.clone()) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Renames every generator through `f`.
    pub fn map_generators(&self, mut f: impl FnMut(&Generator) -> Generator) -> Result<Self> {
        let mut out = Presentation::default();
        for g in &self.generators {
            out.add_generator(f(g))?;
        }
        for r in &self.relators {
            out.add_relator(&r.map_generators(&mut f))?;
        }
        for s in &self.schemas {
            out.add_schema(s.map_template(|g, k| Ok((f(g), k)))?)?;
        }
        Ok(out)
    }

    /// Moves every generator into `namespace`.
    pub fn with_namespace(&self, namespace: &str) -> Result<Self> {
        self.map_generators(|g| g.with_namespace(namespace))
    }

    pub(crate) fn from_parts(
        generators: Alphabet,
        relators: impl IntoIterator<Item = Word>,
        schemas: impl IntoIterator<Item = RelatorSchema>,
    ) -> Result<Self> {
        let mut p = Presentation {
            generators,
            ..Presentation::default()
        };
        for r in relators {
            p.add_relator(&r)?;
        }
        for s in schemas {
            p.add_schema(s)?;
        }
        Ok(p)
    }

    /// Exponent-sum row of `w` over the generator order.
    pub fn exponent_vector(&self, w: &Word) -> Vec<i64> {
        self.generators.iter().map(|g| w.exponent_sum(g)).collect()
    }

    /// Abelianization matrix truncated at `bound`; see
    /// [`abelianized_relation_matrix`].
    pub fn relation_matrix(&self, bound: u64) -> IntMatrix {
        abelianized_relation_matrix(self, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_relator_picks_least_rotation() {
        let r = canonical_relator(&w("b a"));
        assert_eq!(r, w("a b"));
        // inverse rotations are candidates too
        assert_eq!(canonical_relator(&w("b' a'")), w("a b"));
        assert_eq!(canonical_relator(&w("x a x'")), w("a"));
        assert_eq!(canonical_relator(&w("a a'")), Word::empty());
    }

    #[test]
    fn least_rotation_handles_periodic_words() {
        assert_eq!(least_rotation(&[2, 1, 2, 1]), 1);
        assert_eq!(least_rotation(&[3, 1, 2]), 1);
        assert_eq!(least_rotation(&[1, 1, 1]), 0);
    }

    #[test]
    fn integer_sets_require_zero() {
        assert!(IntegerSet::new([1, 2]).is_err());
        let s = IntegerSet::new([5, 0, 2, 2]).unwrap();
        assert_eq!(s.values(), &[0, 2, 5]);
        assert_eq!(s.to_string(), "{0,2,5}");
        assert_eq!(s.truncated(3).values(), &[0, 2]);
    }

    #[test]
    fn schema_instances_drop_zero() {
        let js: Vec<(Generator, i64)> =
            (1..=4).map(|i| (Generator::indexed("", "j", i), 1)).collect();
        let schema = RelatorSchema::new(js, IntegerSet::new([0, 2]).unwrap()).unwrap();
        let inst = schema.instances(None);
        assert_eq!(inst.len(), 1);
        assert_eq!(inst[0].1.len(), 8);
        assert!(schema.instance(0).is_empty());
        assert_eq!(schema.instance_len(-3), 12);
    }

    #[test]
    fn undeclared_generators_are_rejected() {
        let mut p = Presentation::free([Generator::plain("a")]);
        assert!(matches!(p.add_relator(&w("a c")), Err(Error::UndeclaredGenerator(_))));
        assert!(p.add_relator(&w("a^2")).unwrap());
        assert!(!p.add_relator(&w("a^-2")).unwrap());
    }
}
