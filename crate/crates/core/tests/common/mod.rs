//! Seeded generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::HashSet;

use bharti_core::mwe::MweKind;
use bharti_core::treebank::{NodeAddress, ParseTree};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

const LABELS: &[&str] = &[
    "S", "NP", "VP", "PP", "SBAR", "ADJP", "NNP", "NN", "VBZ", "VBD", "DT", "IN", "TO", "-LRB-", "-RRB-", ".", ",",
    "PRP$", "WHNP", "X",
];
const CHARS: &[char] = &[
    'a', 'b', 'k', 'z', 'Q', '0', '7', '.', ',', '_', '\'', '$', '(', ')', '[', ']', '-', 'क', 'ि', 'ष', '्', 'ा', 'é',
    'ß', '中',
];
const ESCAPES: &[&str] = &["-LRB-", "-RRB-", "-LSB-", "-RSB-"];

pub fn word(r: &mut StdRng) -> String {
    loop {
        let n = r.random_range(1..7);
        let w: String = (0..n).map(|_| *CHARS.choose(r).unwrap()).collect();
        if !ESCAPES.iter().any(|e| w.contains(e)) {
            return w;
        }
    }
}

/// Arbitrary labeled tree: leaves, bare tags and internal nodes.
pub fn random_tree(r: &mut StdRng, depth: usize) -> ParseTree {
    let label = *LABELS.choose(r).unwrap();
    if depth == 0 || r.random_bool(0.3) {
        return if r.random_bool(0.9) {
            ParseTree::leaf(label, word(r)).unwrap()
        } else {
            ParseTree::bare(label).unwrap()
        };
    }
    let n = r.random_range(1..5);
    let kids = (0..n).map(|_| random_tree(r, depth - 1)).collect();
    ParseTree::node(label, kids).unwrap()
}

const NAMES: &[&str] = &[
    "Kavita", "Sharma", "Rahul", "Modi", "Delhi", "Agra", "Narendra", "Priya",
];
const NOUNS: &[&str] = &[
    "ticket", "flight", "morning", "shake", "banana", "walk", "call", "book", "station", "bus",
];
const VERBS: &[&str] = &[
    "booked", "took", "made", "gave", "saw", "visited", "has", "likes", "book", "take", "ran",
];

fn leaf(tag: &str, text: &str) -> ParseTree {
    ParseTree::leaf(tag, text).unwrap()
}

fn node(tag: &str, kids: Vec<ParseTree>) -> ParseTree {
    ParseTree::node(tag, kids).unwrap()
}

pub fn np(r: &mut StdRng, depth: usize) -> ParseTree {
    if depth > 0 && r.random_bool(0.25) {
        let mut kids = vec![np(r, depth - 1)];
        if r.random_bool(0.7) {
            kids.push(pp(r, depth - 1));
        }
        return node("NP", kids);
    }
    let n = r.random_range(1..6);
    let kids = (0..n)
        .map(|_| match r.random_range(0..8) {
            0 | 1 => leaf(["NNP", "NNPS"].choose(r).unwrap(), NAMES.choose(r).unwrap()),
            2 | 3 => leaf(["NN", "NNS"].choose(r).unwrap(), NOUNS.choose(r).unwrap()),
            4 => leaf("DT", ["the", "a"].choose(r).unwrap()),
            5 => leaf("JJ", "big"),
            6 => leaf("PRP", "it"),
            _ => leaf("CC", "and"),
        })
        .collect();
    node("NP", kids)
}

pub fn pp(r: &mut StdRng, depth: usize) -> ParseTree {
    let p = if r.random_bool(0.3) {
        leaf("TO", "to")
    } else {
        leaf("IN", ["for", "with", "in"].choose(r).unwrap())
    };
    node("PP", vec![p, np(r, depth)])
}

pub fn vp(r: &mut StdRng, depth: usize) -> ParseTree {
    let tag = *["VB", "VBD", "VBZ", "VBN", "VBG", "MD"].choose(r).unwrap();
    let mut kids = vec![leaf(tag, VERBS.choose(r).unwrap())];
    for _ in 0..r.random_range(0..4) {
        kids.push(match r.random_range(0..4) {
            0 | 1 => np(r, depth.saturating_sub(1)),
            2 => pp(r, depth.saturating_sub(1)),
            _ if depth > 0 => vp(r, depth - 1),
            _ => leaf("RB", "quickly"),
        });
    }
    if r.random_bool(0.15) {
        kids.insert(0, leaf("TO", "to"));
    }
    node("VP", kids)
}

/// Phrase-structure tree with English-like shape, for transfer and MWE tests.
pub fn sentence_tree(r: &mut StdRng) -> ParseTree {
    let mut kids = vec![np(r, 2), vp(r, 3)];
    if r.random_bool(0.5) {
        kids.push(leaf(".", "."));
    }
    node("S", kids)
}

/// Whitespace-separated mix of Devanagari, Latin and other scripts.
pub fn mixed_sentence(r: &mut StdRng) -> String {
    const POOL: &[&str] = &[
        "क", "ख", "ग", "न", "म", "र", "स", "ि", "ा", "ी", "ु", "्", "ं", "a", "b", "e", "l", "o", "w", "s", "t", "Z", "ß",
        "é", "中", "ж", "٣", "🙂", "1", ".", "_",
    ];
    let n = r.random_range(0..12);
    let words: Vec<String> = (0..n)
        .map(|_| (0..r.random_range(1..10)).map(|_| *POOL.choose(r).unwrap()).collect())
        .collect();
    let sep = if r.random_bool(0.2) { "  " } else { " " };
    words.join(sep)
}

// Oracles ----------------------------------------------------------------

/// Inflected forms of the bundled light verbs that the generator emits.
const LIGHT_FORMS: &[&str] = &["booked", "took", "made", "gave", "has", "book", "take"];

fn is(node: &ParseTree, labels: &[&str]) -> bool {
    node.is_leaf() && labels.contains(&node.label())
}

/// Enumerates every sibling interval and keeps the maximal all-matching ones.
fn sibling_runs(tree: &ParseTree, out: &mut Vec<(MweKind, Vec<NodeAddress>)>) {
    for addr in tree.addresses() {
        let n = tree.get(&addr).unwrap();
        if n.label() != "NP" {
            continue;
        }
        let kids = n.children();
        for (kind, labels) in [
            (MweKind::CompositeNe, &["NNP", "NNPS"][..]),
            (MweKind::CompoundNoun, &["NN", "NNS"][..]),
        ] {
            for i in 0..kids.len() {
                for j in i + 2..=kids.len() {
                    let all = kids[i..j].iter().all(|k| is(k, labels));
                    let left_closed = i == 0 || !is(&kids[i - 1], labels);
                    let right_closed = j == kids.len() || !is(&kids[j], labels);
                    if all && left_closed && right_closed {
                        out.push((kind, (i..j).map(|c| addr.child(c)).collect()));
                    }
                }
            }
        }
    }
}

fn light_verbs(tree: &ParseTree, out: &mut Vec<(MweKind, Vec<NodeAddress>)>) {
    for l in tree.leaves() {
        if !l.label.starts_with("VB") || !LIGHT_FORMS.contains(&l.text) {
            continue;
        }
        let parent = l.address.parent().unwrap();
        let idx = *l.address.path().last().unwrap();
        let sibs = tree.get(&parent).unwrap().children();
        let Some(k) = (idx + 1..sibs.len()).find(|&k| sibs[k].label() == "NP") else {
            continue;
        };
        let mut base_addr = parent.child(k);
        loop {
            let b = tree.get(&base_addr).unwrap();
            match b.children().first() {
                Some(f) if !f.is_leaf() && f.label() == "NP" => base_addr = base_addr.child(0),
                _ => break,
            }
        }
        let kids = tree.get(&base_addr).unwrap().children();
        let nouns: Vec<usize> = (0..kids.len()).filter(|&c| is(&kids[c], &["NN", "NNS"])).collect();
        let Some(&head) = nouns.last() else { continue };
        let mut start = head;
        while start > 0 && nouns.contains(&(start - 1)) {
            start -= 1;
        }
        let mut span = vec![l.address.clone()];
        if start > 0 && is(&kids[0], &["DT"]) {
            span.push(base_addr.child(0));
        }
        span.extend((start..=head).map(|c| base_addr.child(c)));
        out.push((MweKind::LightVerb, span));
    }
}

/// Recognizer oracle: brute-force sibling intervals plus the light-verb rule.
pub fn mwe_oracle(tree: &ParseTree) -> Vec<(MweKind, Vec<NodeAddress>)> {
    let order: Vec<NodeAddress> = tree.leaves().into_iter().map(|l| l.address).collect();
    let pos = |a: &NodeAddress| order.iter().position(|x| x == a).unwrap();
    let mut cands = Vec::new();
    sibling_runs(tree, &mut cands);
    light_verbs(tree, &mut cands);
    let mut chosen: Vec<(MweKind, Vec<NodeAddress>)> = Vec::new();
    let mut used = HashSet::new();
    for tier in [MweKind::CompositeNe, MweKind::LightVerb, MweKind::CompoundNoun] {
        let mut tier_c: Vec<_> = cands.iter().filter(|c| c.0 == tier).cloned().collect();
        tier_c.sort_by_key(|c| (pos(&c.1[0]), usize::MAX - c.1.len()));
        for c in tier_c {
            if c.1.iter().all(|a| !used.contains(a)) {
                used.extend(c.1.iter().cloned());
                chosen.push(c);
            }
        }
    }
    chosen.sort_by_key(|c| pos(&c.1[0]));
    chosen
}

/// n-grams as space-joined strings, clipped by counting occurrences directly.
pub fn oracle_bleu(hyp: &[&str], reference: &[&str], max_order: usize, eps: Option<f64>) -> f64 {
    if hyp.is_empty() {
        return 0.0;
    }
    let grams = |t: &[&str], n: usize| -> Vec<String> {
        if t.len() < n {
            Vec::new()
        } else {
            (0..=t.len() - n).map(|i| t[i..i + n].join(" ")).collect()
        }
    };
    let mut log = 0.0;
    for n in 1..=max_order {
        let h = grams(hyp, n);
        let r = grams(reference, n);
        let mut seen: Vec<&String> = Vec::new();
        let mut matched = 0usize;
        for g in &h {
            if seen.contains(&g) {
                continue;
            }
            seen.push(g);
            let in_h = h.iter().filter(|x| *x == g).count();
            let in_r = r.iter().filter(|x| *x == g).count();
            matched += in_h.min(in_r);
        }
        let denom = h.len().max(1) as f64;
        let p = if matched == 0 {
            match eps {
                None => return 0.0,
                Some(e) => e / denom,
            }
        } else {
            matched as f64 / denom
        };
        log += p.ln() / max_order as f64;
    }
    let (c, r) = (hyp.len() as f64, reference.len() as f64);
    let bp = if c < r { (1.0 - r / c).exp() } else { 1.0 };
    bp * log.exp()
}
