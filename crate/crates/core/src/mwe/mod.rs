//! Multiword expression recognition and target-side augmentation.
//!
//! Three kinds of span are recognized in a source parse: composite named
//! entities (runs of proper nouns), compound nouns (runs of common nouns) and
//! light-verb constructions (a light verb with its object noun phrase). After
//! transfer, each span is translated as a unit from the knowledge base and
//! written into the reordered target tree.

mod augment;
pub mod kb;
pub mod lemma;
mod recognize;
pub mod translit;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::treebank::NodeAddress;

pub use augment::{augment, Augmented, SpanOutcome, SpanResolution};
pub use kb::{JoinPolicy, KnowledgeBase, Translation};
pub use lemma::{lemmatize, LightVerbLexicon};
pub use recognize::{recognize, recognize_candidates};
pub use translit::{transliterate, TranslitChart};

#[derive(Debug, Error)]
pub enum MweError {
    #[error("malformed row at line {0}")]
    MalformedRow(usize),
    #[error("duplicate key at line {0}")]
    DuplicateKey(usize),
    #[error("empty source at line {0}")]
    EmptySource(usize),
    #[error("span leaf {0} has no counterpart in the target tree")]
    UnmappedAddress(NodeAddress),
    #[error(transparent)]
    Tree(#[from] crate::treebank::TreeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MweKind {
    CompositeNe,
    LightVerb,
    CompoundNoun,
}

impl MweKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MweKind::CompositeNe => "composite_ne",
            MweKind::LightVerb => "light_verb",
            MweKind::CompoundNoun => "compound_noun",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "composite_ne" => Some(MweKind::CompositeNe),
            "light_verb" => Some(MweKind::LightVerb),
            "compound_noun" => Some(MweKind::CompoundNoun),
            _ => None,
        }
    }
}

impl fmt::Display for MweKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A recognized expression: its kind and the source leaves it covers, in
/// sentence order. For light verbs the first leaf is the verb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MweSpan {
    pub kind: MweKind,
    pub leaves: Vec<NodeAddress>,
    pub surface: String,
}
