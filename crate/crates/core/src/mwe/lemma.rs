//! English verb lemmatization by suffix stripping, and the light-verb lexicon.

use std::collections::BTreeSet;
use std::path::Path;

use super::MweError;

const IRREGULAR: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("been", "be"),
    ("being", "be"),
    ("is", "be"),
    ("was", "be"),
    ("were", "be"),
    ("did", "do"),
    ("does", "do"),
    ("doing", "do"),
    ("done", "do"),
    ("gave", "give"),
    ("given", "give"),
    ("gives", "give"),
    ("giving", "give"),
    ("goes", "go"),
    ("gone", "go"),
    ("went", "go"),
    ("got", "get"),
    ("gets", "get"),
    ("getting", "get"),
    ("gotten", "get"),
    ("had", "have"),
    ("has", "have"),
    ("having", "have"),
    ("made", "make"),
    ("makes", "make"),
    ("making", "make"),
    ("taken", "take"),
    ("takes", "take"),
    ("taking", "take"),
    ("took", "take"),
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn undouble(stem: &str) -> Option<String> {
    let mut rev = stem.chars().rev();
    match (rev.next(), rev.next()) {
        (Some(a), Some(b)) if a == b && !is_vowel(a) && !matches!(a, 'l' | 's' | 'z') => {
            Some(stem[..stem.len() - a.len_utf8()].to_owned())
        }
        _ => None,
    }
}

/// Possible citation forms of `word`, most likely first.
pub fn lemma_candidates(word: &str) -> Vec<String> {
    let w = word.to_lowercase();
    if let Some((_, lemma)) = IRREGULAR.iter().find(|(form, _)| *form == w) {
        return vec![(*lemma).to_owned()];
    }
    let mut out = vec![w.clone()];
    let mut push = |s: String| {
        if !out.contains(&s) {
            out.push(s);
        }
    };
    if let Some(stem) = w.strip_suffix("ied").or_else(|| w.strip_suffix("ies")) {
        if stem.len() >= 2 {
            push(format!("{stem}y"));
        }
    }
    for suffix in ["ing", "ed"] {
        if let Some(stem) = w.strip_suffix(suffix) {
            if stem.len() >= 2 {
                if let Some(single) = undouble(stem) {
                    push(single);
                }
                push(stem.to_owned());
                push(format!("{stem}e"));
            }
        }
    }
    if let Some(stem) = w.strip_suffix("es") {
        if ["s", "x", "z", "ch", "sh"].iter().any(|e| stem.ends_with(e)) {
            push(stem.to_owned());
        }
    }
    if let Some(stem) = w.strip_suffix('s') {
        if stem.len() >= 2 && !stem.ends_with(['s', 'u', 'i']) {
            push(stem.to_owned());
        }
    }
    out
}

/// Deterministic citation form: the irregular table, otherwise the first
/// suffix-stripped stem (no final-e restoration).
pub fn lemmatize(word: &str) -> String {
    let cands = lemma_candidates(word);
    if cands.len() > 1 {
        cands[1].clone()
    } else {
        cands[0].clone()
    }
}

/// Verbs that form light-verb constructions ("book the ticket").
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LightVerbLexicon {
    lemmas: BTreeSet<String>,
}

impl LightVerbLexicon {
    pub fn new<I, S>(lemmas: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        LightVerbLexicon {
            lemmas: lemmas.into_iter().map(|s| s.as_ref().to_lowercase()).collect(),
        }
    }

    /// One lemma per line; `#` comments and blank lines are ignored.
    pub fn parse(contents: &str) -> Self {
        Self::new(
            contents
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MweError> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    /// The lexicon lemma `word` inflects, if any.
    pub fn lemma_of(&self, word: &str) -> Option<&str> {
        lemma_candidates(word)
            .into_iter()
            .find_map(|c| self.lemmas.get(&c).map(String::as_str))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.lemma_of(word).is_some()
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }
}
