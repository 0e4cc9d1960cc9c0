//! Computational group theory for the embedding of countable groups into
//! groups of type FP₂.
//!
//! The crate builds every presentation used by the construction (the
//! ascending HNN extensions, the encoder groups `J'(l, S)`, the groups
//! `K(S)` and `M(S)`, the graph of groups `F*`, and the rope-trick group),
//! decides the word problems the construction needs where that is
//! possible (free reduction, Stallings foldings, Britton's lemma, Dehn's
//! algorithm under C'(1/6)), and emits checkable certificates for the
//! finite content of the argument.

pub mod britton;
pub mod constructions;
mod error;
pub mod godel;
pub mod homology;
pub mod intmat;
pub mod presentation;
pub mod smallcancel;
pub mod subgroup;
pub mod words;

pub use error::{Error, Result};
pub use presentation::{HNNDescriptor, IntegerSet, Presentation, RelatorSchema};
pub use subgroup::SubgroupGraph;
pub use words::{Alphabet, Generator, GeneratorMap, Letter, Sign, Word};
