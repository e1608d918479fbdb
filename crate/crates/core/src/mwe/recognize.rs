use std::collections::{HashMap, HashSet};

use super::{LightVerbLexicon, MweKind, MweSpan};
use crate::treebank::{NodeAddress, ParseTree};

const PROPER: &[&str] = &["NNP", "NNPS"];
const COMMON: &[&str] = &["NN", "NNS"];

fn is_leaf_in(node: &ParseTree, labels: &[&str]) -> bool {
    node.is_leaf() && labels.contains(&node.label())
}

/// Maximal runs (length >= 2) of sibling leaves with a label in `labels`.
fn runs(np: &ParseTree, labels: &[&str]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    let kids = np.children();
    for i in 0..=kids.len() {
        let hit = kids.get(i).is_some_and(|c| is_leaf_in(c, labels));
        match (hit, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s >= 2 {
                    out.push((s, i));
                }
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Object of a light verb: the span of the base noun phrase, determiner plus
/// the noun run ending at its last common noun.
fn light_verb_object(np_addr: &NodeAddress, np: &ParseTree) -> Option<Vec<NodeAddress>> {
    let mut addr = np_addr.clone();
    let mut base = np;
    while let Some(first) = base.children().first() {
        if first.is_leaf() || first.label() != "NP" {
            break;
        }
        addr = addr.child(0);
        base = first;
    }
    let kids = base.children();
    let head = kids.iter().rposition(|c| is_leaf_in(c, COMMON))?;
    let mut start = head;
    while start > 0 && is_leaf_in(&kids[start - 1], COMMON) {
        start -= 1;
    }
    let mut out = Vec::new();
    if start > 0 && kids[0].is_leaf() && kids[0].label() == "DT" {
        out.push(addr.child(0));
    }
    out.extend((start..=head).map(|i| addr.child(i)));
    Some(out)
}

fn surface(tree: &ParseTree, leaves: &[NodeAddress]) -> String {
    leaves
        .iter()
        .filter_map(|a| tree.get(a).and_then(ParseTree::text))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Every candidate span before overlap resolution.
pub fn recognize_candidates(tree: &ParseTree, lexicon: &LightVerbLexicon) -> Vec<MweSpan> {
    let mut out = Vec::new();
    for addr in tree.addresses() {
        let node = tree.get(&addr).expect("address from tree");
        if node.label() == "NP" {
            for (kind, labels) in [(MweKind::CompositeNe, PROPER), (MweKind::CompoundNoun, COMMON)] {
                for (s, e) in runs(node, labels) {
                    let leaves: Vec<_> = (s..e).map(|i| addr.child(i)).collect();
                    out.push(MweSpan {
                        kind,
                        surface: surface(tree, &leaves),
                        leaves,
                    });
                }
            }
        }
        if node.is_leaf() && node.label().starts_with("VB") {
            let Some(text) = node.text() else { continue };
            if !lexicon.contains(text) {
                continue;
            }
            let (Some(parent), Some(idx)) = (addr.parent(), addr.last_index()) else {
                continue;
            };
            let siblings = tree.get(&parent).expect("parent exists").children();
            let Some(obj) = (idx + 1..siblings.len()).find(|&j| siblings[j].label() == "NP") else {
                continue;
            };
            if let Some(obj_leaves) = light_verb_object(&parent.child(obj), &siblings[obj]) {
                let mut leaves = vec![addr.clone()];
                leaves.extend(obj_leaves);
                out.push(MweSpan {
                    kind: MweKind::LightVerb,
                    surface: surface(tree, &leaves),
                    leaves,
                });
            }
        }
    }
    out
}

/// Recognizes non-overlapping expressions. Named entities win over light
/// verbs, which win over compound nouns; within a kind the leftmost, then
/// longest, span is kept. The result is in sentence order.
pub fn recognize(tree: &ParseTree, lexicon: &LightVerbLexicon) -> Vec<MweSpan> {
    let order: HashMap<NodeAddress, usize> = tree
        .leaves()
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l.address, i))
        .collect();
    let first = |s: &MweSpan| order[&s.leaves[0]];
    let mut cands = recognize_candidates(tree, lexicon);
    cands.sort_by_key(|s| (s.kind, first(s), std::cmp::Reverse(s.leaves.len())));
    let mut taken: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for span in cands {
        let idx: Vec<usize> = span.leaves.iter().map(|a| order[a]).collect();
        if idx.iter().any(|i| taken.contains(i)) {
            continue;
        }
        taken.extend(idx);
        out.push(span);
    }
    out.sort_by_key(|s| first(s));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::parse_tree;

    fn lex() -> LightVerbLexicon {
        LightVerbLexicon::new(["book", "take", "make"])
    }

    fn kinds(tree: &str) -> Vec<(MweKind, String)> {
        let t = parse_tree(tree).unwrap();
        recognize(&t, &lex()).into_iter().map(|s| (s.kind, s.surface)).collect()
    }

    #[test]
    fn finds_all_three_kinds() {
        let got = kinds(
            "[S [NP [NNP Kavita] [NNP Sharma]] [VP [VBZ has] [VP [VBN booked] [NP [NP [DT the] [NN ticket]]] [PP [IN for] [NP [NP [DT the] [NN morning] [NN flight]]] [PP [TO to] [NP [NNP Delhi]]]]]] [. .]]",
        );
        assert_eq!(
            got,
            vec![
                (MweKind::CompositeNe, "Kavita Sharma".to_owned()),
                (MweKind::LightVerb, "booked the ticket".to_owned()),
                (MweKind::CompoundNoun, "morning flight".to_owned()),
            ]
        );
    }

    #[test]
    fn single_nouns_are_not_spans() {
        assert!(kinds("[S [NP [NNP Delhi]] [VP [VBD slept]]]").is_empty());
        assert!(kinds("[NP [NNP Delhi] [CC and] [NNP Agra]]").is_empty());
    }

    #[test]
    fn light_verb_needs_common_noun_object() {
        assert!(kinds("[VP [VBD took] [NP [PRP it]]]").is_empty());
        assert_eq!(
            kinds("[VP [VBD took] [NP [DT a] [NN walk]]]"),
            vec![(MweKind::LightVerb, "took a walk".to_owned())]
        );
    }

    #[test]
    fn overlap_prefers_light_verb_over_compound() {
        let got = kinds("[VP [VB make] [NP [NN tea] [NN break]]]");
        assert_eq!(got, vec![(MweKind::LightVerb, "make tea break".to_owned())]);
    }
}
