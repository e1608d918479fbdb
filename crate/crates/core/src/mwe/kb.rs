//! The handcrafted MWE translation lexicon.
//!
//! TSV columns: `source_text  kind  lang  target_text  join_policy`, where
//! kind is one of `composite_ne`, `compound_noun`, `light_verb` and the join
//! policy is `per_word_leaves` or `single_leaf_underscored`. Lines starting
//! with `#` are comments.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::lemma::lemmatize;
use super::{MweError, MweKind, MweSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinPolicy {
    /// All target words go into one leaf, joined with `_`.
    SingleLeafUnderscored,
    /// One target word per source leaf.
    PerWordLeaves,
}

impl JoinPolicy {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "single_leaf_underscored" | "single_leaf" => Some(JoinPolicy::SingleLeafUnderscored),
            "per_word_leaves" => Some(JoinPolicy::PerWordLeaves),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub target_text: String,
    pub join_policy: JoinPolicy,
    pub kind: MweKind,
}

impl Translation {
    pub fn words(&self) -> Vec<&str> {
        self.target_text.split_whitespace().collect()
    }
}

/// Lowercases, collapses spaces and, for light verbs, reduces the verb to its
/// citation form.
pub fn normalize_key(text: &str, kind: MweKind) -> String {
    let mut words: Vec<String> = text.split_whitespace().map(str::to_lowercase).collect();
    if kind == MweKind::LightVerb {
        if let Some(first) = words.first_mut() {
            *first = lemmatize(first);
        }
    }
    words.join(" ")
}

#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    entries: HashMap<(String, String), Translation>,
}

impl KnowledgeBase {
    pub fn parse(contents: &str) -> Result<Self, MweError> {
        let mut entries = HashMap::new();
        for (i, line) in contents.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [source, kind, lang, target, policy] = cols[..] else {
                return Err(MweError::MalformedRow(lineno));
            };
            let kind = MweKind::parse(kind).ok_or(MweError::MalformedRow(lineno))?;
            let join_policy = JoinPolicy::parse(policy).ok_or(MweError::MalformedRow(lineno))?;
            if source.is_empty() || lang.is_empty() || target.is_empty() {
                return Err(MweError::MalformedRow(lineno));
            }
            let key = (normalize_key(source, kind), lang.to_owned());
            let value = Translation {
                target_text: target.split_whitespace().collect::<Vec<_>>().join(" "),
                join_policy,
                kind,
            };
            if entries.insert(key, value).is_some() {
                return Err(MweError::DuplicateKey(lineno));
            }
        }
        Ok(KnowledgeBase { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MweError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup_text(&self, text: &str, kind: MweKind, lang: &str) -> Option<&Translation> {
        self.entries.get(&(normalize_key(text, kind), lang.to_owned()))
    }

    pub fn lookup(&self, span: &MweSpan, lang: &str) -> Option<&Translation> {
        self.lookup_text(&span.surface, span.kind, lang)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KB: &str = "# test kb\n\
kavita sharma\tcomposite_ne\thi\tकविता शर्मा\tper_word_leaves\n\
book the ticket\tlight_verb\thi\tबुक की हैं\tsingle_leaf_underscored\n";

    #[test]
    fn lookups() {
        let kb = KnowledgeBase::parse(KB).unwrap();
        assert_eq!(kb.len(), 2);
        let t = kb.lookup_text("Kavita  Sharma", MweKind::CompositeNe, "hi").unwrap();
        assert_eq!(t.target_text, "कविता शर्मा");
        assert_eq!(t.join_policy, JoinPolicy::PerWordLeaves);
        let t = kb.lookup_text("booked the ticket", MweKind::LightVerb, "hi").unwrap();
        assert_eq!(t.target_text, "बुक की हैं");
        assert_eq!(t.join_policy, JoinPolicy::SingleLeafUnderscored);
        assert!(kb.lookup_text("booked the ticket", MweKind::LightVerb, "mr").is_none());
    }

    #[test]
    fn empty_kb() {
        let kb = KnowledgeBase::parse("").unwrap();
        assert!(kb.lookup_text("kavita sharma", MweKind::CompositeNe, "hi").is_none());
    }

    #[test]
    fn bad_rows() {
        assert!(matches!(
            KnowledgeBase::parse("a b\tcomposite_ne\thi\tx\n"),
            Err(MweError::MalformedRow(1))
        ));
        assert!(matches!(
            KnowledgeBase::parse("\na b\tidiom\thi\tx\tper_word_leaves\n"),
            Err(MweError::MalformedRow(2))
        ));
        let dup = "book the ticket\tlight_verb\thi\tx\tper_word_leaves\n\
                   booked the ticket\tlight_verb\thi\ty\tper_word_leaves\n";
        assert!(matches!(KnowledgeBase::parse(dup), Err(MweError::DuplicateKey(2))));
    }
}
