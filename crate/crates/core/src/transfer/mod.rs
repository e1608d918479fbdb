//! Tree-to-tree transfer: reorders English (SVO) constituency trees into
//! the verb-final order of the target language, keeping track of where every
//! source node ends up.
//!
//! Rules are stored as a JSON array:
//!
//! ```json
//! [{"id": "svo-sov", "priority": 10,
//!   "source": "[S ?np [VP ?v ?obj]]",
//!   "target": "[S ?np [VP ?obj ?v]]",
//!   "links": [["?np", "0"], ["?obj", "1.0"], ["?v", "1.1"]]}]
//! ```
//!
//! `links` is optional; when present it must list exactly the template slot
//! of every referenced variable. See [`pattern`] for the pattern syntax.

pub mod pattern;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::treebank::{NodeAddress, ParseTree};
pub use pattern::{Binding, Bindings, Matcher, PatternTree, TemplateNode};

/// Trees deeper than this abort a transfer.
pub const MAX_TREE_DEPTH: usize = 512;

#[derive(Debug, Error)]
pub enum TransferError {
    #[error("rule schema error at line {line}: {message}")]
    SchemaError { line: usize, message: String },
    #[error("duplicate rule id {0:?}")]
    DuplicateRuleId(String),
    #[error("rule {0:?} references a variable its source never captures")]
    UnboundTargetVariable(String),
    #[error("rewrite depth exceeded at {0}")]
    RewriteDepthExceeded(NodeAddress),
    #[error("cannot read rules: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferRule {
    pub id: String,
    pub priority: i64,
    pub source: PatternTree,
    pub target: TemplateNode,
    /// (source variable, template slot) correspondences.
    pub links: Vec<(String, NodeAddress)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: String,
    #[serde(default)]
    priority: i64,
    source: String,
    target: String,
    #[serde(default)]
    links: Option<Vec<(String, String)>>,
}

fn parse_slot(s: &str) -> Option<NodeAddress> {
    if s.is_empty() || s == "ε" {
        return Some(NodeAddress::root());
    }
    s.split('.')
        .map(|p| p.parse::<usize>().ok())
        .collect::<Option<Vec<_>>>()
        .map(NodeAddress::from)
}

impl TransferRule {
    /// Builds and validates a rule from its DSL strings.
    pub fn new(id: impl Into<String>, priority: i64, source: &str, target: &str) -> Result<Self, TransferError> {
        Self::build(id.into(), priority, source, target, None, 0)
    }

    fn build(
        id: String,
        priority: i64,
        source: &str,
        target: &str,
        links: Option<Vec<(String, String)>>,
        line: usize,
    ) -> Result<Self, TransferError> {
        let schema = |message: String| TransferError::SchemaError { line, message };
        let source = PatternTree::parse(source).map_err(|e| schema(format!("rule {id:?} source: {e}")))?;
        let target = TemplateNode::parse(target).map_err(|e| schema(format!("rule {id:?} target: {e}")))?;

        let captured: BTreeSet<String> = source.variables().into_iter().collect();
        let slots = target.slots();
        let mut used = BTreeSet::new();
        for (name, _) in &slots {
            if !captured.contains(name) {
                return Err(TransferError::UnboundTargetVariable(id));
            }
            if !used.insert(name.clone()) {
                return Err(schema(format!("rule {id:?} uses {name} twice")));
            }
        }
        for name in &used {
            if let Some(inner) = source.nested_under(name) {
                if let Some(dup) = inner.iter().find(|v| used.contains(*v)) {
                    return Err(schema(format!("rule {id:?} moves {dup} and its ancestor {name}")));
                }
            }
        }
        for (name, slot) in &slots {
            let is_seq = source.is_rest_var(name);
            if is_seq && slot.is_root() {
                return Err(schema(format!("rule {id:?}: sequence {name} cannot be the root")));
            }
            if is_seq {
                if let Some(pattern::TemplateNode::Var { relabel: Some(_), .. }) = template_at(&target, slot) {
                    return Err(schema(format!("rule {id:?}: sequence {name} cannot be relabeled")));
                }
            }
        }

        if let Some(given) = links {
            let mut parsed = BTreeSet::new();
            for (var, slot) in given {
                let addr = parse_slot(&slot).ok_or_else(|| schema(format!("rule {id:?}: bad link slot {slot:?}")))?;
                parsed.insert((var, addr));
            }
            let derived: BTreeSet<_> = slots.iter().cloned().collect();
            if parsed != derived {
                return Err(schema(format!(
                    "rule {id:?}: links do not match the template's variable slots"
                )));
            }
        }

        Ok(TransferRule {
            id,
            priority,
            source,
            target,
            links: slots,
        })
    }

    /// A rule is linear when every word a match can cover is moved into the
    /// output exactly once, so transfer preserves the multiset of leaves.
    pub fn is_linear(&self) -> bool {
        let used: BTreeSet<String> = self.links.iter().map(|(v, _)| v.clone()).collect();
        self.source.covered_by(&used, false)
    }
}

fn template_at<'t>(t: &'t TemplateNode, slot: &NodeAddress) -> Option<&'t TemplateNode> {
    slot.path().iter().try_fold(t, |node, &i| match node {
        TemplateNode::Node { children, .. } => children.get(i),
        TemplateNode::Var { .. } => None,
    })
}

/// Rules sorted by descending priority, ties kept in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<TransferRule>,
}

impl RuleSet {
    pub fn new(mut rules: Vec<TransferRule>) -> Result<Self, TransferError> {
        let mut ids = HashSet::new();
        for r in &rules {
            if !ids.insert(r.id.clone()) {
                return Err(TransferError::DuplicateRuleId(r.id.clone()));
            }
        }
        rules.sort_by_key(|r| std::cmp::Reverse(r.priority));
        Ok(RuleSet { rules })
    }

    pub fn from_json(json: &str) -> Result<Self, TransferError> {
        if json.trim().is_empty() {
            return Ok(RuleSet::default());
        }
        let raw: Vec<RawRule> = serde_json::from_str(json).map_err(|e| TransferError::SchemaError {
            line: e.line(),
            message: e.to_string(),
        })?;
        let lines = object_start_lines(json);
        let rules = raw
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let line = lines.get(i).copied().unwrap_or(1);
                TransferRule::build(r.id, r.priority, &r.source, &r.target, r.links, line)
            })
            .collect::<Result<Vec<_>, _>>()?;
        RuleSet::new(rules)
    }

    pub fn rules(&self) -> &[TransferRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&TransferRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// The rules that preserve leaves.
    pub fn linear_subset(&self) -> RuleSet {
        RuleSet {
            rules: self.rules.iter().filter(|r| r.is_linear()).cloned().collect(),
        }
    }
}

/// Line numbers where each top-level array element starts.
fn object_start_lines(json: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut depth, mut line) = (0usize, 1usize);
    let (mut in_str, mut escaped) = (false, false);
    for c in json.chars() {
        if c == '\n' {
            line += 1;
        }
        if in_str {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_str = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_str = true,
            '[' | '{' => {
                if depth == 1 {
                    out.push(line);
                }
                depth += 1;
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    out
}

pub fn load_rules(path: impl AsRef<Path>) -> Result<RuleSet, TransferError> {
    RuleSet::from_json(&std::fs::read_to_string(path)?)
}

/// Tries `rule` at `at`. Bound addresses are absolute.
pub fn match_rule(rule: &TransferRule, tree: &ParseTree, at: &NodeAddress) -> Option<Bindings> {
    let node = tree.get(at)?;
    let local = rule.source.match_node(node)?;
    Some(
        local
            .into_iter()
            .map(|(k, b)| {
                let b = match b {
                    Binding::Node(a) => Binding::Node(at.join(&a)),
                    Binding::Seq(v) => Binding::Seq(v.iter().map(|a| at.join(a)).collect()),
                };
                (k, b)
            })
            .collect(),
    )
}

/// Source address to target address.
pub type AddressMap = BTreeMap<NodeAddress, NodeAddress>;

/// Rebuilds the subtree at `at` from the rule's template. Bound subtrees are
/// moved; the returned map covers every node inside them, plus `at` itself
/// when the template root is a fresh node.
pub fn apply_rule(
    rule: &TransferRule,
    tree: &ParseTree,
    at: &NodeAddress,
    bindings: &Bindings,
) -> (ParseTree, AddressMap) {
    let original = tree.get(at).expect("bindings come from match_rule at this address");
    let mut take = |name: &str| -> Vec<(NodeAddress, ParseTree)> {
        let addrs = match bindings.get(name) {
            Some(Binding::Node(a)) => vec![a.clone()],
            Some(Binding::Seq(v)) => v.clone(),
            None => Vec::new(),
        };
        addrs
            .into_iter()
            .map(|a| {
                let rel = a.strip_prefix(at).expect("binding inside the matched subtree");
                let sub = original.get(&rel).expect("bound address exists").clone();
                (rel, sub)
            })
            .collect()
    };
    let (mut built, moves) = rule.target.instantiate(&mut take);
    debug_assert_eq!(built.len(), 1);
    let new_sub = built.pop().expect("template yields one root");

    let mut fragment = AddressMap::new();
    for (src_rel, dst_rel) in &moves {
        let moved = new_sub.get(dst_rel).expect("moved node present");
        for inner in moved.addresses() {
            fragment.insert(at.join(&src_rel.join(&inner)), at.join(&dst_rel.join(&inner)));
        }
    }
    if !fragment.values().any(|dst| dst == at) {
        fragment.insert(at.clone(), at.clone());
    }

    let rewritten = tree.replace_at(at, new_sub).expect("address validated by match_rule");
    (rewritten, fragment)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppliedRule {
    pub rule: String,
    pub at: NodeAddress,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferResult {
    pub tree: ParseTree,
    /// Source address to target address for every node that survives.
    pub address_map: AddressMap,
    pub applied_rules: Vec<AppliedRule>,
}

impl TransferResult {
    pub fn identity(tree: ParseTree) -> Self {
        let address_map = tree.addresses().into_iter().map(|a| (a.clone(), a)).collect();
        TransferResult {
            tree,
            address_map,
            applied_rules: Vec::new(),
        }
    }
}

struct Engine<'r> {
    rules: &'r RuleSet,
    tree: ParseTree,
    /// original address -> current address
    forward: HashMap<NodeAddress, NodeAddress>,
    /// current address -> original address
    backward: HashMap<NodeAddress, NodeAddress>,
    rewritten: HashSet<NodeAddress>,
    applied: Vec<AppliedRule>,
}

impl Engine<'_> {
    fn eligible(&self, at: &NodeAddress) -> bool {
        self.backward.get(at).is_some_and(|orig| !self.rewritten.contains(orig))
    }

    fn visit(&mut self, at: NodeAddress) -> Result<(), TransferError> {
        if at.depth() >= MAX_TREE_DEPTH {
            return Err(TransferError::RewriteDepthExceeded(at));
        }
        if self.eligible(&at) {
            let hit = self
                .rules
                .rules()
                .iter()
                .find_map(|r| match_rule(r, &self.tree, &at).map(|b| (r, b)));
            if let Some((rule, bindings)) = hit {
                let orig_root = self.backward[&at].clone();
                let (tree, fragment) = apply_rule(rule, &self.tree, &at, &bindings);
                self.tree = tree;
                self.remap(&at, &fragment);
                self.rewritten.insert(orig_root);
                self.applied.push(AppliedRule {
                    rule: rule.id.clone(),
                    at: at.clone(),
                });
            }
        }
        let n = self.tree.get(&at).map_or(0, |node| node.children().len());
        for i in 0..n {
            self.visit(at.child(i))?;
        }
        Ok(())
    }

    fn remap(&mut self, at: &NodeAddress, fragment: &AddressMap) {
        let forward = std::mem::take(&mut self.forward);
        self.forward = forward
            .into_iter()
            .filter_map(|(orig, cur)| {
                if !cur.starts_with(at) {
                    return Some((orig, cur));
                }
                fragment.get(&cur).map(|new| (orig, new.clone()))
            })
            .collect();
        self.backward = self.forward.iter().map(|(o, c)| (c.clone(), o.clone())).collect();
    }
}

/// Runs the rule set over the tree in pre-order. At each node the first
/// (highest-priority) matching rule fires once, then traversal continues
/// into the rewritten node's children. Nodes created by a template and nodes
/// already rewritten are never rewritten again.
pub fn transfer(tree: &ParseTree, rules: &RuleSet) -> Result<TransferResult, TransferError> {
    let identity: HashMap<NodeAddress, NodeAddress> = tree.addresses().into_iter().map(|a| (a.clone(), a)).collect();
    let mut engine = Engine {
        rules,
        tree: tree.clone(),
        backward: identity.clone(),
        forward: identity,
        rewritten: HashSet::new(),
        applied: Vec::new(),
    };
    engine.visit(NodeAddress::root())?;
    Ok(TransferResult {
        tree: engine.tree,
        address_map: engine.forward.into_iter().collect(),
        applied_rules: engine.applied,
    })
}
