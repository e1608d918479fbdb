//! Source patterns and target templates for transfer rules.
//!
//! Patterns are bracketed trees whose heads are matchers:
//!
//! * `NP` matches the label exactly, `NNP*` matches any label starting with
//!   `NNP`, `*` matches anything (and must be captured);
//! * `NP=?subj` captures the matched node as `?subj`;
//! * a bare `?x` child is shorthand for `[*=?x]`;
//! * a node with a child list must have exactly those children, unless the
//!   list ends in `...` (or `...?rest`), which binds the remaining children;
//! * a node written without a child list (`[NN=?n]`) accepts any children.
//!
//! Templates are bracketed trees of literal labels and variable references.
//! `?x` moves the bound subtree into place, `?x:IN` moves it and relabels its
//! root, and `[VBZ]` creates a bare tag node.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::treebank::{NodeAddress, ParseTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matcher {
    ExactLabel(String),
    LabelClass(String),
    Wildcard,
}

impl Matcher {
    pub fn matches(&self, label: &str) -> bool {
        match self {
            Matcher::ExactLabel(l) => l == label,
            Matcher::LabelClass(prefix) => label.starts_with(prefix.as_str()),
            Matcher::Wildcard => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTree {
    pub matcher: Matcher,
    pub capture: Option<String>,
    pub children: Vec<PatternTree>,
    /// Child list must match exactly. Nodes written without a child list are
    /// unanchored with no children, i.e. they accept any subtree.
    pub anchored: bool,
    /// Variable receiving the children beyond `children` when unanchored.
    pub rest: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateNode {
    Node { label: String, children: Vec<TemplateNode> },
    Var { name: String, relabel: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Node(NodeAddress),
    Seq(Vec<NodeAddress>),
}

/// Variable name to bound node(s). Addresses are absolute in the matched tree.
pub type Bindings = BTreeMap<String, Binding>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at byte {})", self.message, self.offset)
    }
}

fn dsl_err<T>(offset: usize, message: impl Into<String>) -> Result<T, DslError> {
    Err(DslError {
        offset,
        message: message.into(),
    })
}

#[derive(Debug)]
enum Tok<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

fn lex(src: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in src.char_indices() {
        let delim = c.is_whitespace() || c == '[' || c == ']';
        if delim {
            if let Some(s) = start.take() {
                out.push(Tok::Atom(s, &src[s..i]));
            }
            if c == '[' {
                out.push(Tok::Open(i));
            } else if c == ']' {
                out.push(Tok::Close(i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok::Atom(s, &src[s..]));
    }
    out
}

fn valid_ident(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_var(offset: usize, atom: &str) -> Result<String, DslError> {
    match atom.strip_prefix('?') {
        Some(name) if valid_ident(name) => Ok(atom.to_owned()),
        _ => dsl_err(offset, format!("bad variable {atom:?}")),
    }
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && !label.contains(['(', ')', '[', ']', '?'])
}

struct Cursor<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            toks: lex(src),
            pos: 0,
            end: src.len(),
        }
    }

    fn next(&mut self) -> Option<&Tok<'a>> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos)
    }

    fn finish(&self) -> Result<(), DslError> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::Open(o)) | Some(Tok::Close(o)) | Some(Tok::Atom(o, _)) => dsl_err(*o, "trailing input"),
        }
    }
}

impl PatternTree {
    pub fn parse(src: &str) -> Result<PatternTree, DslError> {
        let mut cur = Cursor::new(src);
        let mut implicit = 0usize;
        let tree = Self::parse_node(&mut cur, &mut implicit)?;
        cur.finish()?;
        let mut seen = BTreeSet::new();
        tree.check_captures(&mut seen)?;
        Ok(tree)
    }

    fn parse_node(cur: &mut Cursor<'_>, implicit: &mut usize) -> Result<PatternTree, DslError> {
        let end = cur.end;
        match cur.next() {
            Some(&Tok::Atom(off, atom)) => {
                let name = parse_var(off, atom)?;
                Ok(PatternTree {
                    matcher: Matcher::Wildcard,
                    capture: Some(name),
                    children: Vec::new(),
                    anchored: false,
                    rest: None,
                })
            }
            Some(&Tok::Open(open)) => {
                let (off, head) = match cur.next() {
                    Some(&Tok::Atom(off, head)) => (off, head),
                    _ => return dsl_err(open, "pattern node needs a head"),
                };
                let (matcher_src, capture) = match head.split_once('=') {
                    Some((m, var)) => (m, Some(parse_var(off, var)?)),
                    None => (head, None),
                };
                let matcher = if matcher_src == "*" {
                    Matcher::Wildcard
                } else if let Some(prefix) = matcher_src.strip_suffix('*') {
                    if !valid_label(prefix) {
                        return dsl_err(off, format!("bad label class {matcher_src:?}"));
                    }
                    Matcher::LabelClass(prefix.to_owned())
                } else if valid_label(matcher_src) {
                    Matcher::ExactLabel(matcher_src.to_owned())
                } else {
                    return dsl_err(off, format!("bad label {matcher_src:?}"));
                };
                if matcher == Matcher::Wildcard && capture.is_none() {
                    return dsl_err(off, "wildcard must be captured");
                }

                let mut children = Vec::new();
                let mut rest = None;
                let mut listed = false;
                loop {
                    match cur.peek() {
                        Some(&Tok::Close(_)) => {
                            cur.next();
                            break;
                        }
                        Some(&Tok::Atom(aoff, atom)) if atom.starts_with("...") => {
                            cur.next();
                            let name = match &atom[3..] {
                                "" => {
                                    *implicit += 1;
                                    format!("?#{implicit}")
                                }
                                var => parse_var(aoff, var)?,
                            };
                            rest = Some(name);
                            listed = true;
                            match cur.next() {
                                Some(Tok::Close(_)) => break,
                                _ => return dsl_err(aoff, "`...` must end a child list"),
                            }
                        }
                        Some(_) => {
                            children.push(Self::parse_node(cur, implicit)?);
                            listed = true;
                        }
                        None => return dsl_err(end, "unclosed pattern node"),
                    }
                }
                let anchored = listed && rest.is_none();
                Ok(PatternTree {
                    matcher,
                    capture,
                    children,
                    anchored,
                    rest,
                })
            }
            Some(&Tok::Close(off)) => dsl_err(off, "unexpected `]`"),
            None => dsl_err(end, "empty pattern"),
        }
    }

    fn check_captures(&self, seen: &mut BTreeSet<String>) -> Result<(), DslError> {
        for name in self.capture.iter().chain(self.rest.iter()) {
            if !seen.insert(name.clone()) {
                return dsl_err(0, format!("capture {name} used twice"));
            }
        }
        self.children.iter().try_for_each(|c| c.check_captures(seen))
    }

    /// All variable names (node captures and rest captures) in pre-order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        out.extend(self.capture.iter().cloned());
        for c in &self.children {
            c.collect_vars(out);
        }
        out.extend(self.rest.iter().cloned());
    }

    /// Whether `name` is a rest (sequence) capture.
    pub fn is_rest_var(&self, name: &str) -> bool {
        self.rest.as_deref() == Some(name) || self.children.iter().any(|c| c.is_rest_var(name))
    }

    /// Variables captured strictly below the node capturing `name`.
    pub fn nested_under(&self, name: &str) -> Option<Vec<String>> {
        if self.capture.as_deref() == Some(name) {
            let mut inner = Vec::new();
            for c in &self.children {
                c.collect_vars(&mut inner);
            }
            inner.extend(self.rest.iter().cloned());
            return Some(inner);
        }
        self.children.iter().find_map(|c| c.nested_under(name))
    }

    /// Matches the pattern against `node`; variables bind to paths relative
    /// to `node`.
    pub fn match_node(&self, node: &ParseTree) -> Option<Bindings> {
        let mut bindings = Bindings::new();
        let mut path = Vec::new();
        self.match_into(node, &mut path, &mut bindings).then_some(bindings)
    }

    fn match_into(&self, node: &ParseTree, path: &mut Vec<usize>, out: &mut Bindings) -> bool {
        if !self.matcher.matches(node.label()) {
            return false;
        }
        if let Some(name) = &self.capture {
            out.insert(name.clone(), Binding::Node(NodeAddress::from(path.as_slice())));
        }
        let kids = node.children();
        if self.anchored && kids.len() != self.children.len() {
            return false;
        }
        if kids.len() < self.children.len() {
            return false;
        }
        for (i, (pat, kid)) in self.children.iter().zip(kids).enumerate() {
            path.push(i);
            let ok = pat.match_into(kid, path, out);
            path.pop();
            if !ok {
                return false;
            }
        }
        if let Some(rest) = &self.rest {
            let seq = (self.children.len()..kids.len())
                .map(|i| {
                    let mut p = path.clone();
                    p.push(i);
                    NodeAddress::from(p)
                })
                .collect();
            out.insert(rest.clone(), Binding::Seq(seq));
        }
        true
    }

    /// True when every part of a matched subtree that can carry words is
    /// moved by a template referencing the variables in `used`.
    pub(crate) fn covered_by(&self, used: &BTreeSet<String>, ancestor_used: bool) -> bool {
        let here = ancestor_used || self.capture.as_ref().is_some_and(|c| used.contains(c));
        if self.children.is_empty() && !here {
            return false;
        }
        if let Some(rest) = &self.rest {
            if !here && !used.contains(rest) {
                return false;
            }
        }
        self.children.iter().all(|c| c.covered_by(used, here))
    }
}

impl fmt::Display for PatternTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match &self.matcher {
            Matcher::ExactLabel(l) => l.clone(),
            Matcher::LabelClass(p) => format!("{p}*"),
            Matcher::Wildcard => "*".to_owned(),
        };
        if self.matcher == Matcher::Wildcard && self.children.is_empty() && self.rest.is_none() && !self.anchored {
            if let Some(c) = &self.capture {
                return f.write_str(c);
            }
        }
        write!(f, "[{head}")?;
        if let Some(c) = &self.capture {
            write!(f, "={c}")?;
        }
        for c in &self.children {
            write!(f, " {c}")?;
        }
        if let Some(r) = &self.rest {
            if r.starts_with("?#") {
                f.write_str(" ...")?;
            } else {
                write!(f, " ...{r}")?;
            }
        }
        f.write_str("]")
    }
}

impl TemplateNode {
    pub fn parse(src: &str) -> Result<TemplateNode, DslError> {
        let mut cur = Cursor::new(src);
        let node = Self::parse_node(&mut cur)?;
        cur.finish()?;
        Ok(node)
    }

    fn parse_node(cur: &mut Cursor<'_>) -> Result<TemplateNode, DslError> {
        let end = cur.end;
        match cur.next() {
            Some(&Tok::Atom(off, atom)) => {
                let (var, relabel) = match atom.split_once(':') {
                    Some((v, l)) => {
                        if !valid_label(l) {
                            return dsl_err(off, format!("bad relabel {l:?}"));
                        }
                        (v, Some(l.to_owned()))
                    }
                    None => (atom, None),
                };
                Ok(TemplateNode::Var {
                    name: parse_var(off, var)?,
                    relabel,
                })
            }
            Some(&Tok::Open(open)) => {
                let label = match cur.next() {
                    Some(&Tok::Atom(off, l)) => {
                        if !valid_label(l) || l.ends_with('*') || l.contains('=') {
                            return dsl_err(off, format!("bad template label {l:?}"));
                        }
                        l.to_owned()
                    }
                    _ => return dsl_err(open, "template node needs a label"),
                };
                let mut children = Vec::new();
                loop {
                    match cur.peek() {
                        Some(Tok::Close(_)) => {
                            cur.next();
                            break;
                        }
                        Some(_) => children.push(Self::parse_node(cur)?),
                        None => return dsl_err(end, "unclosed template node"),
                    }
                }
                Ok(TemplateNode::Node { label, children })
            }
            Some(&Tok::Close(off)) => dsl_err(off, "unexpected `]`"),
            None => dsl_err(end, "empty template"),
        }
    }

    /// Variable references with their slot paths. A slot path is the
    /// template position of the reference, ignoring sequence expansion.
    pub fn slots(&self) -> Vec<(String, NodeAddress)> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_slots(&mut path, &mut out);
        out
    }

    fn collect_slots(&self, path: &mut Vec<usize>, out: &mut Vec<(String, NodeAddress)>) {
        match self {
            TemplateNode::Var { name, .. } => out.push((name.clone(), NodeAddress::from(path.as_slice()))),
            TemplateNode::Node { children, .. } => {
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    c.collect_slots(path, out);
                    path.pop();
                }
            }
        }
    }

    /// Builds the rewritten subtree. `take` hands over the subtree(s) bound
    /// to a variable. Returns the new nodes and, for each moved subtree, its
    /// (relative source path, relative target path).
    pub(crate) fn instantiate(
        &self,
        take: &mut dyn FnMut(&str) -> Vec<(NodeAddress, ParseTree)>,
    ) -> (Vec<ParseTree>, Vec<(NodeAddress, NodeAddress)>) {
        let mut moves = Vec::new();
        let mut path = Vec::new();
        let nodes = self.build(take, &mut path, &mut moves);
        (nodes, moves)
    }

    fn build(
        &self,
        take: &mut dyn FnMut(&str) -> Vec<(NodeAddress, ParseTree)>,
        path: &mut Vec<usize>,
        moves: &mut Vec<(NodeAddress, NodeAddress)>,
    ) -> Vec<ParseTree> {
        match self {
            TemplateNode::Var { name, relabel } => {
                let parts = take(name);
                let base = path.last().copied().unwrap_or(0);
                let parent = &path[..path.len().saturating_sub(1)];
                parts
                    .into_iter()
                    .enumerate()
                    .map(|(k, (src, mut tree))| {
                        if let Some(l) = relabel {
                            tree.set_label(l.clone()).expect("relabel validated at parse time");
                        }
                        let target = if path.is_empty() {
                            NodeAddress::root()
                        } else {
                            let mut p = parent.to_vec();
                            p.push(base + k);
                            NodeAddress::from(p)
                        };
                        moves.push((src, target));
                        tree
                    })
                    .collect()
            }
            TemplateNode::Node { label, children } => {
                let mut built = Vec::new();
                for c in children {
                    path.push(built.len());
                    let mut part = c.build(take, path, moves);
                    path.pop();
                    built.append(&mut part);
                }
                vec![ParseTree::node(label.clone(), built).expect("label validated at parse time")]
            }
        }
    }
}

impl fmt::Display for TemplateNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateNode::Var { name, relabel: None } => f.write_str(name),
            TemplateNode::Var { name, relabel: Some(l) } => write!(f, "{name}:{l}"),
            TemplateNode::Node { label, children } => {
                write!(f, "[{label}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::parse_tree;

    fn a(p: &[usize]) -> NodeAddress {
        NodeAddress::from(p)
    }

    #[test]
    fn parses_shorthand() {
        let p = PatternTree::parse("[S ?np [VP ?v ?obj]]").unwrap();
        assert_eq!(p.matcher, Matcher::ExactLabel("S".into()));
        assert!(p.anchored);
        assert_eq!(p.children[0].matcher, Matcher::Wildcard);
        assert_eq!(p.variables(), vec!["?np", "?v", "?obj"]);
        assert_eq!(p.to_string(), "[S ?np [VP ?v ?obj]]");
    }

    #[test]
    fn structural_match() {
        let p = PatternTree::parse("[S ?np [VP ?v ?obj]]").unwrap();
        let t = parse_tree("[S [NP [NN dog]] [VP [VBZ bites] [NP [NN man]]]]").unwrap();
        let b = p.match_node(&t).unwrap();
        assert_eq!(b["?np"], Binding::Node(a(&[0])));
        assert_eq!(b["?v"], Binding::Node(a(&[1, 0])));
        assert_eq!(b["?obj"], Binding::Node(a(&[1, 1])));
        assert!(p.match_node(&parse_tree("[NP [NN dog]]").unwrap()).is_none());
    }

    #[test]
    fn label_class() {
        let m = Matcher::LabelClass("NNP".into());
        assert!(m.matches("NNP"));
        assert!(m.matches("NNPS"));
        assert!(!m.matches("NN"));
    }

    #[test]
    fn anchoring_and_rest() {
        let t = parse_tree("[VP [VBD saw] [NP [NN x]] [PP [IN in] [NP [NN y]]]]").unwrap();
        let anchored = PatternTree::parse("[VP [VB*=?v] [NP=?o]]").unwrap();
        assert!(anchored.match_node(&t).is_none());
        let open = PatternTree::parse("[VP [VB*=?v] ...?tail]").unwrap();
        let b = open.match_node(&t).unwrap();
        assert_eq!(b["?tail"], Binding::Seq(vec![a(&[1]), a(&[2])]));
        let implicit = PatternTree::parse("[VP [VB*=?v] ...]").unwrap();
        assert!(implicit.match_node(&t).unwrap().contains_key("?#1"));
        // No child list: any children.
        let loose = PatternTree::parse("[VP=?vp]").unwrap();
        assert!(loose.match_node(&t).is_some());
    }

    #[test]
    fn rejects_bad_patterns() {
        assert!(PatternTree::parse("[S ?x ?x]").is_err());
        assert!(PatternTree::parse("[*]").is_err());
        assert!(PatternTree::parse("[S ... ?x]").is_err());
        assert!(PatternTree::parse("[S ?x").is_err());
        assert!(PatternTree::parse("[S] [S]").is_err());
        assert!(PatternTree::parse("[S ?]").is_err());
        assert!(TemplateNode::parse("[S* ?x]").is_err());
    }

    #[test]
    fn template_slots() {
        let t = TemplateNode::parse("[S ?np [VP ?obj ?v:VBX] [X]]").unwrap();
        assert_eq!(
            t.slots(),
            vec![
                ("?np".to_owned(), a(&[0])),
                ("?obj".to_owned(), a(&[1, 0])),
                ("?v".to_owned(), a(&[1, 1])),
            ]
        );
        assert_eq!(t.to_string(), "[S ?np [VP ?obj ?v:VBX] [X]]");
    }

    #[test]
    fn coverage() {
        let p = PatternTree::parse("[VP [VB*=?v] [NP [DT] [NN=?n]]]").unwrap();
        let used: BTreeSet<String> = ["?v", "?n"].iter().map(|s| s.to_string()).collect();
        assert!(!p.covered_by(&used, false));
        let p = PatternTree::parse("[VP [VB*=?v] [NP=?o [DT] [NN]]]").unwrap();
        let used: BTreeSet<String> = ["?v", "?o"].iter().map(|s| s.to_string()).collect();
        assert!(p.covered_by(&used, false));
    }
}
