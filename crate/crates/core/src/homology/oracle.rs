//! Word-problem oracles used to build partial Cayley complexes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{Hermite, IntMatrix};
use crate::smallcancel::DehnSolver;
use crate::words::{Alphabet, Word};

use super::coset::CosetTable;

/// Decides equality with the identity in some group given by `alphabet`.
pub trait WordProblem {
    fn is_identity(&self, w: &Word) -> Result<bool>;

    /// A canonical fingerprint of the element, when the oracle has normal
    /// forms. Balls are built in linear time with it, quadratic without.
    fn key(&self, _w: &Word) -> Result<Option<String>> {
        Ok(None)
    }
}

/// The free group on the alphabet.
#[derive(Clone, Debug, Default)]
pub struct FreeOracle;

impl WordProblem for FreeOracle {
    fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(w.reduce().is_empty())
    }

    fn key(&self, w: &Word) -> Result<Option<String>> {
        Ok(Some(w.reduce().to_string()))
    }
}

/// The abelian group with the given relators. Exact only when the
/// presented group is abelian; otherwise a necessary condition.
#[derive(Clone, Debug)]
pub struct AbelianOracle {
    alphabet: Alphabet,
    hermite: Hermite,
}

impl AbelianOracle {
    pub fn new(alphabet: &Alphabet, relators: &[Word]) -> Result<Self> {
        let rows: Vec<Vec<i64>> = relators.iter().map(|r| exponent_vector(alphabet, r)).collect();
        let hermite = IntMatrix::from_rows(alphabet.len(), &rows).hermite()?;
        Ok(AbelianOracle { alphabet: alphabet.clone(), hermite })
    }

    /// Exponent vector reduced modulo the relation lattice.
    pub fn residue(&self, w: &Word) -> Result<Vec<i64>> {
        let mut v = exponent_vector(&self.alphabet, w);
        for (k, &c) in self.hermite.pivots.iter().enumerate() {
            let row = self.hermite.basis.row(k);
            let q = v[c].div_euclid(row[c]);
            for (x, &r) in v.iter_mut().zip(row) {
                *x = x.checked_sub(q.checked_mul(r).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
        Ok(v)
    }
}

fn exponent_vector(alphabet: &Alphabet, w: &Word) -> Vec<i64> {
    alphabet.iter().map(|g| w.exponent_sum(g)).collect()
}

impl WordProblem for AbelianOracle {
    fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.residue(w)?.iter().all(|&x| x == 0))
    }

    fn key(&self, w: &Word) -> Result<Option<String>> {
        Ok(Some(format!("{:?}", self.residue(w)?)))
    }
}

/// Dehn's algorithm; the relators must be C'(1/6).
#[derive(Debug)]
pub struct DehnOracle(pub DehnSolver);

impl WordProblem for DehnOracle {
    fn is_identity(&self, w: &Word) -> Result<bool> {
        self.0.is_identity(w)
    }
}

/// A finite group, enumerated by Todd–Coxeter.
#[derive(Clone, Debug)]
pub struct FiniteOracle {
    alphabet: Alphabet,
    table: CosetTable,
}

impl FiniteOracle {
    pub fn new(alphabet: &Alphabet, relators: &[Word], max_cosets: usize) -> Result<Self> {
        let columns = relators
            .iter()
            .map(|r| columns(alphabet, r))
            .collect::<Result<Vec<_>>>()?;
        let table = CosetTable::enumerate(alphabet.len(), &columns, max_cosets)?;
        Ok(FiniteOracle { alphabet: alphabet.clone(), table })
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    fn element(&self, w: &Word) -> Result<usize> {
        Ok(self.table.act(columns(&self.alphabet, w)?))
    }
}

fn columns(alphabet: &Alphabet, w: &Word) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(w.len());
    for l in w.letters() {
        let g = alphabet
            .get_index_of(&l.generator)
            .ok_or_else(|| Error::UndeclaredGenerator(l.generator.clone()))?;
        out.push(2 * g + usize::from(l.sign.value() < 0));
    }
    Ok(out)
}

impl WordProblem for FiniteOracle {
    fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.element(w)? == 0)
    }

    fn key(&self, w: &Word) -> Result<Option<String>> {
        Ok(Some(self.element(w)?.to_string()))
    }
}

/// Any caller-supplied decision procedure.
pub struct ClosureOracle<F>(pub F);

impl<F: Fn(&Word) -> Result<bool>> WordProblem for ClosureOracle<F> {
    fn is_identity(&self, w: &Word) -> Result<bool> {
        (self.0)(w)
    }
}

/// Serializable choice of oracle, rebuilt from a presentation when a
/// certificate file is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OracleSpec {
    Free,
    Abelian,
    Dehn,
    Finite { max_cosets: usize },
}

impl OracleSpec {
    pub fn build(&self, alphabet: &Alphabet, relators: &[Word]) -> Result<Box<dyn WordProblem>> {
        Ok(match *self {
            OracleSpec::Free => {
                if !relators.is_empty() {
                    return Err(Error::InvalidParameter(
                        "the free oracle needs a presentation without designated relators".into(),
                    ));
                }
                Box::new(FreeOracle)
            }
            OracleSpec::Abelian => Box::new(AbelianOracle::new(alphabet, relators)?),
            OracleSpec::Dehn => Box::new(DehnOracle(DehnSolver::from_relators(alphabet.clone(), relators)?)),
            OracleSpec::Finite { max_cosets } => Box::new(FiniteOracle::new(alphabet, relators, max_cosets)?),
        })
    }
}

impl std::str::FromStr for OracleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(OracleSpec::Free),
            "abelian" => Ok(OracleSpec::Abelian),
            "dehn" => Ok(OracleSpec::Dehn),
            "finite" => Ok(OracleSpec::Finite { max_cosets: 100_000 }),
            other => Err(Error::InvalidParameter(format!("unknown oracle {other:?}"))),
        }
    }
}
