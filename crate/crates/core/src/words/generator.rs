use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

/// A namespaced generator symbol such as `F.c_3` or `J.j_1`.
///
/// The empty namespace is printed without a dot, so `a` and `F.a` are
/// different generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    namespace: Arc<str>,
    name: Arc<str>,
    index: Option<u32>,
}

impl Generator {
    pub fn new(namespace: &str, name: &str, index: Option<u32>) -> Self {
        Generator {
            namespace: Arc::from(namespace),
            name: Arc::from(name),
            index,
        }
    }

    /// Generator in the empty namespace without an index.
    pub fn plain(name: &str) -> Self {
        Generator::new("", name, None)
    }

    pub fn indexed(namespace: &str, name: &str, index: u32) -> Self {
        Generator::new(namespace, name, Some(index))
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }

    pub fn with_namespace(&self, namespace: &str) -> Self {
        Generator {
            namespace: Arc::from(namespace),
            name: self.name.clone(),
            index: self.index,
        }
    }

    pub fn with_index(&self, index: Option<u32>) -> Self {
        Generator {
            namespace: self.namespace.clone(),
            name: self.name.clone(),
            index,
        }
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.namespace
            .cmp(&other.namespace)
            .then_with(|| self.name.cmp(&other.name))
            .then_with(|| self.index.cmp(&other.index))
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.namespace.is_empty() {
            write!(f, "{}.", self.namespace)?;
        }
        f.write_str(&self.name)?;
        if let Some(i) = self.index {
            write!(f, "_{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        super::syntax::parse_generator(&text).map_err(serde::de::Error::custom)
    }
}

/// An ordered set of generators; order is declaration order.
pub type Alphabet = IndexSet<Generator>;

/// Returns `base` if unused by `alphabet`, otherwise the first of
/// `base_1`, `base_2`, ... that is free.
pub fn fresh_generator(alphabet: &Alphabet, namespace: &str, name: &str) -> Generator {
    let candidate = Generator::new(namespace, name, None);
    if !alphabet.contains(&candidate) {
        return candidate;
    }
    (1..)
        .map(|i| Generator::indexed(namespace, name, i))
        .find(|g| !alphabet.contains(g))
        .expect("unbounded search")
}
