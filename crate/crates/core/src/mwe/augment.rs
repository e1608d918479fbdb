use serde::Serialize;

use super::{JoinPolicy, KnowledgeBase, MweError, MweKind, MweSpan, TranslitChart};
use crate::transfer::TransferResult;
use crate::treebank::{NodeAddress, ParseTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanResolution {
    KnowledgeBase,
    Transliterated,
    Untranslated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanOutcome {
    pub span: MweSpan,
    pub resolution: SpanResolution,
    /// Target leaves that received the translation.
    pub target_leaves: Vec<NodeAddress>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmented {
    pub tree: ParseTree,
    pub outcomes: Vec<SpanOutcome>,
}

struct Edits {
    tree: ParseTree,
    removals: Vec<NodeAddress>,
}

impl Edits {
    fn set(&mut self, addr: &NodeAddress, text: &str) -> Result<(), MweError> {
        let node = self
            .tree
            .get_mut(addr)
            .ok_or_else(|| MweError::UnmappedAddress(addr.clone()))?;
        node.set_text(text)?;
        Ok(())
    }

    /// Writes `words` over `leaves` one per leaf. Surplus words are joined
    /// into the last leaf; surplus leaves are removed.
    fn distribute(&mut self, words: &[&str], leaves: &[NodeAddress]) -> Result<Vec<NodeAddress>, MweError> {
        let used = leaves.len().min(words.len());
        for i in 0..used {
            let text = if i + 1 == used {
                words[i..].join("_")
            } else {
                words[i].to_owned()
            };
            self.set(&leaves[i], &text)?;
        }
        self.removals.extend_from_slice(&leaves[used..]);
        Ok(leaves[..used].to_vec())
    }

    fn join_into_first(&mut self, words: &[&str], leaves: &[NodeAddress]) -> Result<Vec<NodeAddress>, MweError> {
        self.distribute(&[&words.join("_")], leaves)
    }

    /// An empty tag next to the verb, such as the `[VBZ]` of `[VP ?verb [VBZ]]`.
    fn auxiliary_slot(&self, verb: &NodeAddress) -> Option<NodeAddress> {
        let parent = verb.parent()?;
        let idx = verb.last_index()?;
        let kids = self.tree.get(&parent)?.children();
        let is_slot = |n: &ParseTree| n.is_bare() && (n.label().starts_with("VB") || n.label() == "MD");
        (idx + 1..kids.len())
            .chain((0..idx).rev())
            .find(|&j| is_slot(&kids[j]))
            .map(|j| parent.child(j))
    }

    fn finish(mut self) -> ParseTree {
        self.removals.sort();
        self.removals.dedup();
        for addr in self.removals.iter().rev() {
            let (Some(parent), Some(idx)) = (addr.parent(), addr.last_index()) else {
                continue;
            };
            if let Some(p) = self.tree.get_mut(&parent) {
                if idx < p.children().len() {
                    p.children_mut().remove(idx);
                }
            }
        }
        self.tree
    }
}

/// Writes the translation of every span into the transferred tree.
///
/// Span leaves are located through the transfer address map. Knowledge-base
/// hits are written according to their join policy. Named entities missing
/// from the knowledge base are transliterated word by word; other misses are
/// left as they are.
pub fn augment(
    result: &TransferResult,
    spans: &[MweSpan],
    kb: &KnowledgeBase,
    chart: &TranslitChart,
    lang: &str,
) -> Result<Augmented, MweError> {
    let mut edits = Edits {
        tree: result.tree.clone(),
        removals: Vec::new(),
    };
    let map = |a: &NodeAddress| result.address_map.get(a).cloned();
    let mut outcomes = Vec::with_capacity(spans.len());
    for span in spans {
        let hit = kb.lookup(span, lang);
        let (resolution, target_leaves) = match span.kind {
            MweKind::LightVerb => {
                let verb = span
                    .leaves
                    .first()
                    .ok_or_else(|| MweError::UnmappedAddress(NodeAddress::root()))?;
                let verb_t = map(verb).ok_or_else(|| MweError::UnmappedAddress(verb.clone()))?;
                match hit {
                    None => (SpanResolution::Untranslated, Vec::new()),
                    Some(t) => {
                        let mut words = t.words();
                        let mut written = Vec::new();
                        if words.len() >= 2 {
                            if let Some(slot) = edits.auxiliary_slot(&verb_t) {
                                let aux = words.pop().expect("two or more words");
                                edits.set(&slot, aux)?;
                                written.push(slot);
                            }
                        }
                        let targets: Vec<NodeAddress> = std::iter::once(verb_t)
                            .chain(span.leaves[1..].iter().filter_map(map))
                            .collect();
                        let mut filled = match t.join_policy {
                            JoinPolicy::SingleLeafUnderscored => edits.join_into_first(&words, &targets)?,
                            JoinPolicy::PerWordLeaves => edits.distribute(&words, &targets)?,
                        };
                        filled.append(&mut written);
                        (SpanResolution::KnowledgeBase, filled)
                    }
                }
            }
            MweKind::CompositeNe | MweKind::CompoundNoun => {
                let targets = span
                    .leaves
                    .iter()
                    .map(|a| map(a).ok_or_else(|| MweError::UnmappedAddress(a.clone())))
                    .collect::<Result<Vec<_>, _>>()?;
                match (hit, span.kind) {
                    (Some(t), _) => {
                        let words = t.words();
                        let filled = match t.join_policy {
                            JoinPolicy::SingleLeafUnderscored => edits.join_into_first(&words, &targets)?,
                            JoinPolicy::PerWordLeaves => edits.distribute(&words, &targets)?,
                        };
                        (SpanResolution::KnowledgeBase, filled)
                    }
                    (None, MweKind::CompositeNe) => {
                        for addr in &targets {
                            let Some(text) = edits.tree.get(addr).and_then(ParseTree::text) else {
                                return Err(MweError::UnmappedAddress(addr.clone()));
                            };
                            let out = chart.transliterate(text);
                            edits.set(addr, &out)?;
                        }
                        (SpanResolution::Transliterated, targets)
                    }
                    (None, _) => (SpanResolution::Untranslated, Vec::new()),
                }
            }
        };
        outcomes.push(SpanOutcome {
            span: span.clone(),
            resolution,
            target_leaves,
        });
    }
    Ok(Augmented {
        tree: edits.finish(),
        outcomes,
    })
}
