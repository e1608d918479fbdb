//! Bracketed constituency trees.
//!
//! Two notations are accepted: square brackets (`[S [NP [NNP Kavita]] ...]`)
//! and the round-bracket treebank style (`(S (NP (NNP Kavita)) ...)`). The
//! first bracket character of an input fixes its style. Literal brackets in
//! leaf text use the usual treebank escapes (`-LRB-`, `-RRB-`, `-LSB-`,
//! `-RSB-`).
//!
//! Besides internal nodes and leaves, a tree may contain *bare tag nodes*:
//! nodes with a label but neither children nor text. These appear when a tree
//! is printed without its words, e.g. `[S [NP [NNP] [NNP]] [VP [VBZ]]]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unbalanced brackets at byte {0}")]
    UnbalancedBrackets(usize),
    #[error("node without a label at byte {0}")]
    EmptyNode(usize),
    #[error("trailing input at byte {0}")]
    TrailingInput(usize),
    #[error("square and round brackets mixed at byte {0}")]
    MixedBrackets(usize),
    #[error("unexpected token at byte {0}")]
    UnexpectedToken(usize),
    #[error("invalid label {0:?}")]
    InvalidLabel(String),
    #[error("invalid leaf text {0:?}")]
    InvalidText(String),
    #[error("no node at address {0}")]
    InvalidAddress(NodeAddress),
}

/// Bracket style used for parsing and printing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Square,
    Round,
}

impl Style {
    fn open(self) -> char {
        match self {
            Style::Square => '[',
            Style::Round => '(',
        }
    }

    fn close(self) -> char {
        match self {
            Style::Square => ']',
            Style::Round => ')',
        }
    }
}

const ESCAPES: [(&str, &str); 4] = [("(", "-LRB-"), (")", "-RRB-"), ("[", "-LSB-"), ("]", "-RSB-")];

fn is_bracket(c: char) -> bool {
    matches!(c, '[' | ']' | '(' | ')')
}

/// Path of zero-based child indices from the root; the empty path is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeAddress(Vec<usize>);

impl NodeAddress {
    pub fn root() -> Self {
        NodeAddress(Vec::new())
    }

    pub fn new(path: Vec<usize>) -> Self {
        NodeAddress(path)
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, index: usize) -> Self {
        let mut path = self.0.clone();
        path.push(index);
        NodeAddress(path)
    }

    /// `self` followed by `suffix`.
    pub fn join(&self, suffix: &NodeAddress) -> Self {
        let mut path = self.0.clone();
        path.extend_from_slice(&suffix.0);
        NodeAddress(path)
    }

    pub fn parent(&self) -> Option<NodeAddress> {
        if self.0.is_empty() {
            None
        } else {
            Some(NodeAddress(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn starts_with(&self, prefix: &NodeAddress) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// The part of `self` below `prefix`, if `prefix` is an ancestor-or-self.
    pub fn strip_prefix(&self, prefix: &NodeAddress) -> Option<NodeAddress> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|rest| NodeAddress(rest.to_vec()))
    }
}

impl From<Vec<usize>> for NodeAddress {
    fn from(path: Vec<usize>) -> Self {
        NodeAddress(path)
    }
}

impl From<&[usize]> for NodeAddress {
    fn from(path: &[usize]) -> Self {
        NodeAddress(path.to_vec())
    }
}

impl fmt::Display for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

/// An ordered labeled tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParseTree {
    label: String,
    children: Vec<ParseTree>,
    text: Option<String>,
}

/// One entry of [`ParseTree::leaves`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf<'a> {
    pub address: NodeAddress,
    pub label: &'a str,
    pub text: &'a str,
}

fn check_label(label: &str) -> Result<(), TreeError> {
    if label.is_empty() || label.chars().any(|c| c.is_whitespace() || is_bracket(c)) {
        return Err(TreeError::InvalidLabel(label.to_owned()));
    }
    Ok(())
}

fn check_text(text: &str) -> Result<(), TreeError> {
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return Err(TreeError::InvalidText(text.to_owned()));
    }
    Ok(())
}

impl ParseTree {
    /// A word node such as `[NN dog]`. Brackets in `text` are allowed and
    /// escaped on output.
    pub fn leaf(label: impl Into<String>, text: impl Into<String>) -> Result<Self, TreeError> {
        let (label, text) = (label.into(), text.into());
        check_label(&label)?;
        check_text(&text)?;
        Ok(ParseTree {
            label,
            children: Vec::new(),
            text: Some(text),
        })
    }

    /// A tag with neither words nor children, e.g. `[NNP]`.
    pub fn bare(label: impl Into<String>) -> Result<Self, TreeError> {
        let label = label.into();
        check_label(&label)?;
        Ok(ParseTree {
            label,
            children: Vec::new(),
            text: None,
        })
    }

    /// An internal node. An empty child list yields a bare tag node.
    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Result<Self, TreeError> {
        let label = label.into();
        check_label(&label)?;
        Ok(ParseTree {
            label,
            children,
            text: None,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[ParseTree] {
        &self.children
    }

    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }

    pub fn is_leaf(&self) -> bool {
        self.text.is_some()
    }

    pub fn is_bare(&self) -> bool {
        self.text.is_none() && self.children.is_empty()
    }

    pub fn set_label(&mut self, label: impl Into<String>) -> Result<(), TreeError> {
        let label = label.into();
        check_label(&label)?;
        self.label = label;
        Ok(())
    }

    /// Turns this node into a leaf carrying `text`, dropping any children.
    pub fn set_text(&mut self, text: impl Into<String>) -> Result<(), TreeError> {
        let text = text.into();
        check_text(&text)?;
        self.children.clear();
        self.text = Some(text);
        Ok(())
    }

    pub(crate) fn children_mut(&mut self) -> &mut Vec<ParseTree> {
        &mut self.children
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ParseTree::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ParseTree::depth).max().unwrap_or(0)
    }

    /// Word nodes in left-to-right order. Bare tag nodes are skipped.
    pub fn leaves(&self) -> Vec<Leaf<'_>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_leaves(&mut path, &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, path: &mut Vec<usize>, out: &mut Vec<Leaf<'a>>) {
        if let Some(text) = &self.text {
            out.push(Leaf {
                address: NodeAddress(path.clone()),
                label: &self.label,
                text,
            });
            return;
        }
        for (i, child) in self.children.iter().enumerate() {
            path.push(i);
            child.collect_leaves(path, out);
            path.pop();
        }
    }

    /// The words of the tree joined by single spaces.
    pub fn sentence(&self) -> String {
        self.leaves().iter().map(|l| l.text).collect::<Vec<_>>().join(" ")
    }

    /// Every node address in pre-order.
    pub fn addresses(&self) -> Vec<NodeAddress> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_addresses(&mut path, &mut out);
        out
    }

    fn collect_addresses(&self, path: &mut Vec<usize>, out: &mut Vec<NodeAddress>) {
        out.push(NodeAddress(path.clone()));
        for (i, child) in self.children.iter().enumerate() {
            path.push(i);
            child.collect_addresses(path, out);
            path.pop();
        }
    }

    pub fn get(&self, addr: &NodeAddress) -> Option<&ParseTree> {
        addr.0.iter().try_fold(self, |node, &i| node.children.get(i))
    }

    pub fn get_mut(&mut self, addr: &NodeAddress) -> Option<&mut ParseTree> {
        addr.0.iter().try_fold(self, |node, &i| node.children.get_mut(i))
    }

    pub fn node_at(&self, addr: &NodeAddress) -> Result<&ParseTree, TreeError> {
        self.get(addr).ok_or_else(|| TreeError::InvalidAddress(addr.clone()))
    }

    /// A copy of `self` with the subtree at `addr` replaced by `sub`.
    pub fn replace_at(&self, addr: &NodeAddress, sub: ParseTree) -> Result<ParseTree, TreeError> {
        let mut out = self.clone();
        let slot = out
            .get_mut(addr)
            .ok_or_else(|| TreeError::InvalidAddress(addr.clone()))?;
        *slot = sub;
        Ok(out)
    }

    pub fn serialize(&self, style: Style, include_leaves: bool) -> String {
        let mut out = String::new();
        self.write_to(&mut out, style, include_leaves);
        out
    }

    /// Square brackets, leaves stripped (`[S [NP [NNP]] ...]`).
    pub fn skeleton(&self) -> String {
        self.serialize(Style::Square, false)
    }

    fn write_to(&self, out: &mut String, style: Style, include_leaves: bool) {
        out.push(style.open());
        out.push_str(&self.label);
        if let Some(text) = &self.text {
            if include_leaves {
                out.push(' ');
                out.push_str(&escape(text));
            }
        }
        for child in &self.children {
            out.push(' ');
            child.write_to(out, style, include_leaves);
        }
        out.push(style.close());
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize(Style::Square, true))
    }
}

impl std::str::FromStr for ParseTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

fn escape(text: &str) -> String {
    if !text.chars().any(is_bracket) {
        return text.to_owned();
    }
    let mut out = String::with_capacity(text.len() + 8);
    for c in text.chars() {
        match ESCAPES.iter().find(|(raw, _)| raw.starts_with(c)) {
            Some((_, esc)) => out.push_str(esc),
            None => out.push(c),
        }
    }
    out
}

fn unescape(text: &str) -> String {
    if !text.contains('-') {
        return text.to_owned();
    }
    ESCAPES
        .iter()
        .fold(text.to_owned(), |acc, (raw, esc)| acc.replace(esc, raw))
}

#[derive(Debug)]
enum Token<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

fn tokenize(input: &str) -> Result<Vec<Token<'_>>, TreeError> {
    let mut tokens = Vec::new();
    let mut style: Option<Style> = None;
    let mut atom_start: Option<usize> = None;

    for (pos, c) in input.char_indices() {
        if c.is_whitespace() || is_bracket(c) {
            if let Some(start) = atom_start.take() {
                tokens.push(Token::Atom(start, &input[start..pos]));
            }
        }
        if is_bracket(c) {
            let this = if c == '[' || c == ']' {
                Style::Square
            } else {
                Style::Round
            };
            match style {
                None => style = Some(this),
                Some(s) if s != this => return Err(TreeError::MixedBrackets(pos)),
                _ => {}
            }
            if c == '[' || c == '(' {
                tokens.push(Token::Open(pos));
            } else {
                tokens.push(Token::Close(pos));
            }
        } else if !c.is_whitespace() && atom_start.is_none() {
            atom_start = Some(pos);
        }
    }
    if let Some(start) = atom_start {
        tokens.push(Token::Atom(start, &input[start..]));
    }
    Ok(tokens)
}

struct Frame {
    open_pos: usize,
    label: String,
    text: Option<String>,
    children: Vec<ParseTree>,
}

/// Parses one tree in either bracket style.
pub fn parse_tree(input: &str) -> Result<ParseTree, TreeError> {
    let tokens = tokenize(input)?;
    let mut iter = tokens.into_iter().peekable();
    let mut stack: Vec<Frame> = Vec::new();

    let first = iter.next().ok_or(TreeError::EmptyNode(0))?;
    let Token::Open(pos) = first else {
        return Err(match first {
            Token::Close(p) => TreeError::UnbalancedBrackets(p),
            Token::Atom(p, _) => TreeError::UnexpectedToken(p),
            Token::Open(_) => unreachable!(),
        });
    };
    let mut pending_open = Some(pos);

    loop {
        if let Some(open_pos) = pending_open.take() {
            match iter.next() {
                Some(Token::Atom(_, label)) => {
                    stack.push(Frame {
                        open_pos,
                        label: label.to_owned(),
                        text: None,
                        children: Vec::new(),
                    });
                }
                Some(Token::Open(_)) | Some(Token::Close(_)) => return Err(TreeError::EmptyNode(open_pos)),
                None => return Err(TreeError::UnbalancedBrackets(open_pos)),
            }
            continue;
        }

        let Some(frame) = stack.last_mut() else {
            unreachable!("the root frame is popped only when the tree is complete");
        };
        match iter.next() {
            Some(Token::Atom(p, word)) => {
                if frame.text.is_some() || !frame.children.is_empty() {
                    return Err(TreeError::UnexpectedToken(p));
                }
                frame.text = Some(unescape(word));
            }
            Some(Token::Open(p)) => {
                if frame.text.is_some() {
                    return Err(TreeError::UnexpectedToken(p));
                }
                pending_open = Some(p);
            }
            Some(Token::Close(_)) => {
                let done = stack.pop().expect("non-empty stack");
                let node = ParseTree {
                    label: done.label,
                    children: done.children,
                    text: done.text,
                };
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => {
                        return match iter.next() {
                            None => Ok(node),
                            Some(Token::Close(p)) => Err(TreeError::UnbalancedBrackets(p)),
                            Some(Token::Open(p)) | Some(Token::Atom(p, _)) => Err(TreeError::TrailingInput(p)),
                        };
                    }
                }
            }
            None => {
                let open = stack.last().map(|f| f.open_pos).unwrap_or(0);
                return Err(TreeError::UnbalancedBrackets(open));
            }
        }
    }
}

/// One non-blank, non-comment line of a tree file.
#[derive(Debug, Clone)]
pub struct TreeLine {
    /// 1-based line number in the file.
    pub line: usize,
    pub tree: Result<ParseTree, TreeError>,
}

/// Reads a tree file: one tree per line, blank lines and `#` comments skipped.
pub fn read_trees(contents: &str) -> Vec<TreeLine> {
    contents
        .lines()
        .enumerate()
        .filter(|(_, line)| {
            let t = line.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, line)| TreeLine {
            line: i + 1,
            tree: parse_tree(line),
        })
        .collect()
}
