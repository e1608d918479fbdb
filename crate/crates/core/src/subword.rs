//! Byte-pair-encoding sub-word segmentation.
//!
//! Words are split into characters plus an end-of-word symbol, and training
//! greedily merges the most frequent adjacent pair. Encoded tokens that do not
//! end a word carry the `@@` continuation marker.
//!
//! Words containing `_` are multiword-expression leaves joined during
//! augmentation; they are emitted as one token and never split.
//!
//! Decoding is ambiguous for a word whose last token itself ends in `@@`
//! (for example the literal word `a@@`); such a word is joined to the next one.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

pub const END_MARKER: &str = "</w>";
pub const CONTINUATION: &str = "@@";
pub const MWE_JOINER: char = '_';
pub const MODEL_HEADER: &str = "bpe v1";
/// Merge count used when none is given.
pub const DEFAULT_MERGES: usize = 8000;

#[derive(Debug, Error)]
pub enum SubwordError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("unsupported model header {0:?}, expected \"bpe v1\"")]
    VersionMismatch(String),
    #[error("malformed merge at line {0}")]
    MalformedMergeLine(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default)]
pub struct BpeModel {
    merges: Vec<(String, String)>,
    vocabulary: BTreeSet<String>,
    ranks: HashMap<(String, String), usize>,
}

impl PartialEq for BpeModel {
    fn eq(&self, other: &Self) -> bool {
        self.merges == other.merges && self.vocabulary == other.vocabulary
    }
}

impl Eq for BpeModel {}

impl BpeModel {
    /// Builds a model from an ordered merge list. The vocabulary is every
    /// merge operand and result, plus the end marker.
    pub fn from_merges(merges: Vec<(String, String)>) -> Self {
        let mut vocabulary = BTreeSet::from([END_MARKER.to_owned()]);
        let mut ranks = HashMap::with_capacity(merges.len());
        for (i, (l, r)) in merges.iter().enumerate() {
            vocabulary.insert(l.clone());
            vocabulary.insert(r.clone());
            vocabulary.insert(format!("{l}{r}"));
            ranks.entry((l.clone(), r.clone())).or_insert(i);
        }
        BpeModel {
            merges,
            vocabulary,
            ranks,
        }
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn end_marker(&self) -> &'static str {
        END_MARKER
    }

    /// Symbols of one word after applying merges, lowest rank first.
    pub fn segment_word(&self, word: &str) -> Vec<String> {
        let mut symbols = initial_symbols(word);
        loop {
            let best = symbols
                .windows(2)
                .filter_map(|w| self.ranks.get(&(w[0].clone(), w[1].clone())).copied())
                .min();
            let Some(rank) = best else { break };
            let (l, r) = &self.merges[rank];
            symbols = merge_pair(&symbols, l, r);
        }
        symbols
    }

    pub fn encode(&self, sentence: &str) -> Vec<String> {
        let mut out = Vec::new();
        for word in sentence.split_whitespace() {
            if word.contains(MWE_JOINER) {
                out.push(word.to_owned());
                continue;
            }
            let mut symbols = self.segment_word(word);
            let last = symbols.pop().expect("end marker present");
            match last.strip_suffix(END_MARKER) {
                Some("") => {}
                Some(rest) => symbols.push(rest.to_owned()),
                None => unreachable!("last symbol always carries the end marker"),
            }
            let n = symbols.len();
            for (i, s) in symbols.into_iter().enumerate() {
                out.push(if i + 1 < n { s + CONTINUATION } else { s });
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SubwordError> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SubwordError> {
        Self::from_file_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("{MODEL_HEADER}\n");
        for (l, r) in &self.merges {
            let _ = writeln!(out, "{l} {r}");
        }
        out
    }

    pub fn from_file_str(contents: &str) -> Result<Self, SubwordError> {
        let mut lines = contents.lines();
        let header = lines.next().unwrap_or("").trim_end();
        if header != MODEL_HEADER {
            return Err(SubwordError::VersionMismatch(header.to_owned()));
        }
        let mut merges = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(' ');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(l), Some(r), None) if !l.is_empty() && !r.is_empty() => {
                    merges.push((l.to_owned(), r.to_owned()));
                }
                _ => return Err(SubwordError::MalformedMergeLine(i + 2)),
            }
        }
        Ok(Self::from_merges(merges))
    }
}

fn initial_symbols(word: &str) -> Vec<String> {
    word.chars()
        .map(String::from)
        .chain(std::iter::once(END_MARKER.to_owned()))
        .collect()
}

fn merge_pair(symbols: &[String], l: &str, r: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == l && symbols[i + 1] == r {
            out.push(format!("{l}{r}"));
            i += 2;
        } else {
            out.push(symbols[i].clone());
            i += 1;
        }
    }
    out
}

/// Whitespace-token frequencies of `lines`.
pub fn word_frequencies<'a>(lines: impl IntoIterator<Item = &'a str>) -> BTreeMap<String, u64> {
    let mut freq = BTreeMap::new();
    for line in lines {
        for w in line.split_whitespace() {
            *freq.entry(w.to_owned()).or_insert(0) += 1;
        }
    }
    freq
}

/// Learns up to `num_merges` merges, stopping early once no pair occurs
/// twice. Ties go to the lexicographically smallest pair. Words containing
/// `_` are skipped since encoding never splits them.
pub fn train_bpe(corpus: &BTreeMap<String, u64>, num_merges: usize) -> Result<BpeModel, SubwordError> {
    if !corpus.iter().any(|(w, &c)| c > 0 && !w.trim().is_empty()) {
        return Err(SubwordError::EmptyCorpus);
    }
    let mut words: Vec<(Vec<String>, u64)> = corpus
        .iter()
        .filter(|(w, &c)| c > 0 && !w.trim().is_empty() && !w.contains(MWE_JOINER))
        .map(|(w, &c)| (initial_symbols(w), c))
        .collect();
    let mut merges = Vec::new();
    while merges.len() < num_merges {
        let mut counts: HashMap<(&str, &str), u64> = HashMap::new();
        for (symbols, freq) in &words {
            for w in symbols.windows(2) {
                *counts.entry((&w[0], &w[1])).or_insert(0) += freq;
            }
        }
        let best = counts
            .into_iter()
            .max_by(|(pa, ca), (pb, cb)| ca.cmp(cb).then_with(|| pb.cmp(pa)));
        let Some(((l, r), count)) = best else { break };
        if count < 2 {
            break;
        }
        let (l, r) = (l.to_owned(), r.to_owned());
        for (symbols, _) in &mut words {
            if symbols.windows(2).any(|w| w[0] == l && w[1] == r) {
                *symbols = merge_pair(symbols, &l, &r);
            }
        }
        merges.push((l, r));
    }
    Ok(BpeModel::from_merges(merges))
}

pub fn encode(model: &BpeModel, sentence: &str) -> Vec<String> {
    model.encode(sentence)
}

/// Rejoins tokens, stripping one continuation marker per token.
pub fn decode<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut words = Vec::new();
    let mut current = String::new();
    for tok in tokens {
        let tok = tok.as_ref();
        match tok.strip_suffix(CONTINUATION) {
            Some(piece) => current.push_str(piece),
            None => {
                current.push_str(tok);
                words.push(std::mem::take(&mut current));
            }
        }
    }
    if !current.is_empty() {
        words.push(current);
    }
    words.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(w, c)| ((*w).to_owned(), *c)).collect()
    }

    #[test]
    fn first_merge_tie_break() {
        let m = train_bpe(&corpus(&[("low", 2), ("lowest", 1)]), 1).unwrap();
        assert_eq!(m.merges(), [("l".to_owned(), "o".to_owned())]);
    }

    #[test]
    fn low_becomes_one_token() {
        let m = train_bpe(&corpus(&[("low", 2), ("lowest", 1)]), 10).unwrap();
        let toks = m.encode("lowest");
        assert_eq!(toks[0], "low@@");
        assert_eq!(decode(&toks), "lowest");
        assert_eq!(m.encode("low"), ["low"]);
    }

    #[test]
    fn zero_merges_gives_characters() {
        let m = train_bpe(&corpus(&[("abc", 3)]), 0).unwrap();
        assert!(m.merges().is_empty());
        assert_eq!(m.encode("abc"), ["a@@", "b@@", "c"]);
        assert!(m.encode("").is_empty());
        assert!(decode::<&str>(&[]).is_empty());
    }

    #[test]
    fn empty_corpus() {
        assert!(matches!(train_bpe(&BTreeMap::new(), 5), Err(SubwordError::EmptyCorpus)));
    }

    #[test]
    fn underscored_leaf_is_one_word() {
        let m = train_bpe(&corpus(&[("बुक", 4), ("की", 4)]), 50).unwrap();
        assert_eq!(m.encode("बुक_की हैं"), ["बुक_की", "ह@@", "ै@@", "ं"]);
        assert_eq!(decode(&m.encode("बुक_की हैं")), "बुक_की हैं");
    }

    #[test]
    fn file_format() {
        let m = train_bpe(&corpus(&[("lower", 5), ("newest", 6), ("widest", 3)]), 10).unwrap();
        let text = m.to_file_string();
        assert_eq!(text.lines().count(), 1 + m.merges().len());
        assert_eq!(BpeModel::from_file_str(&text).unwrap(), m);
        assert!(matches!(
            BpeModel::from_file_str("bpe v2\n"),
            Err(SubwordError::VersionMismatch(_))
        ));
        assert!(matches!(
            BpeModel::from_file_str("bpe v1\na b\nabc\n"),
            Err(SubwordError::MalformedMergeLine(3))
        ));
        let empty = BpeModel::from_merges(Vec::new());
        assert_eq!(BpeModel::from_file_str(&empty.to_file_string()).unwrap(), empty);
    }
}
