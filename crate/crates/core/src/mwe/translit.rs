//! Latin-to-Indic transliteration for names missing from the knowledge base.
//!
//! The chart is a TSV of `source  kind  independent  dependent` rows. Kind is
//! `consonant` or `vowel`; vowels carry both the independent letter and the
//! dependent sign (matra) used after a consonant. The dependent column may be
//! empty for the inherent vowel. A source ending in `$` only matches at the
//! end of a word.
//!
//! Words are scanned left to right with longest-match-first lookup. Adjacent
//! consonants are joined with the virama; characters without a chart row pass
//! through unchanged.

use std::collections::HashMap;
use std::path::Path;

use super::MweError;

pub const DEVANAGARI_VIRAMA: &str = "\u{094D}";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoundClass {
    Consonant,
    Vowel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartRow {
    pub source: String,
    pub class: SoundClass,
    pub independent: String,
    pub dependent: String,
    pub word_final: bool,
}

#[derive(Debug, Clone)]
pub struct TranslitChart {
    rows: Vec<ChartRow>,
    anywhere: HashMap<String, usize>,
    at_end: HashMap<String, usize>,
    max_len: usize,
    virama: String,
}

impl TranslitChart {
    pub fn parse(contents: &str) -> Result<Self, MweError> {
        let mut chart = TranslitChart {
            rows: Vec::new(),
            anywhere: HashMap::new(),
            at_end: HashMap::new(),
            max_len: 0,
            virama: DEVANAGARI_VIRAMA.to_owned(),
        };
        for (i, line) in contents.lines().enumerate() {
            let lineno = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.first() == Some(&"virama") && cols.len() == 2 {
                chart.virama = cols[1].to_owned();
                continue;
            }
            if cols.len() < 3 || cols.len() > 4 {
                return Err(MweError::MalformedRow(lineno));
            }
            let (source, word_final) = match cols[0].strip_suffix('$') {
                Some(s) => (s.to_lowercase(), true),
                None => (cols[0].to_lowercase(), false),
            };
            if source.is_empty() {
                return Err(MweError::EmptySource(lineno));
            }
            let class = match cols[1] {
                "consonant" => SoundClass::Consonant,
                "vowel" => SoundClass::Vowel,
                _ => return Err(MweError::MalformedRow(lineno)),
            };
            let independent = cols[2].to_owned();
            let dependent = cols.get(3).copied().unwrap_or("").to_owned();
            if independent.is_empty() || (class == SoundClass::Consonant && !dependent.is_empty()) {
                return Err(MweError::MalformedRow(lineno));
            }
            let index = if word_final {
                &mut chart.at_end
            } else {
                &mut chart.anywhere
            };
            if index.insert(source.clone(), chart.rows.len()).is_some() {
                return Err(MweError::DuplicateKey(lineno));
            }
            chart.max_len = chart.max_len.max(source.len());
            chart.rows.push(ChartRow {
                source,
                class,
                independent,
                dependent,
                word_final,
            });
        }
        Ok(chart)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MweError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn rows(&self) -> &[ChartRow] {
        &self.rows
    }

    /// Whether `source` has a row usable mid-word.
    pub fn covers(&self, source: &str) -> bool {
        self.anywhere.contains_key(source)
    }

    fn longest_match(&self, word: &str, pos: usize) -> Option<(usize, &ChartRow)> {
        let remaining = word.len() - pos;
        for len in (1..=self.max_len.min(remaining)).rev() {
            let Some(piece) = word.get(pos..pos + len) else {
                continue;
            };
            if pos + len == word.len() {
                if let Some(&i) = self.at_end.get(piece) {
                    return Some((len, &self.rows[i]));
                }
            }
            if let Some(&i) = self.anywhere.get(piece) {
                return Some((len, &self.rows[i]));
            }
        }
        None
    }

    fn word(&self, word: &str, out: &mut String) {
        let lower = word.to_ascii_lowercase();
        let mut pos = 0;
        let mut after_consonant = false;
        while pos < lower.len() {
            match self.longest_match(&lower, pos) {
                Some((len, row)) => {
                    match row.class {
                        SoundClass::Consonant => {
                            if after_consonant {
                                out.push_str(&self.virama);
                            }
                            out.push_str(&row.independent);
                            after_consonant = true;
                        }
                        SoundClass::Vowel => {
                            out.push_str(if after_consonant {
                                &row.dependent
                            } else {
                                &row.independent
                            });
                            after_consonant = false;
                        }
                    }
                    pos += len;
                }
                None => {
                    let c = lower[pos..].chars().next().expect("pos inside word");
                    out.push(c);
                    after_consonant = false;
                    pos += c.len_utf8();
                }
            }
        }
    }

    pub fn transliterate(&self, text: &str) -> String {
        let mut out = String::with_capacity(text.len() * 3);
        let mut word_start: Option<usize> = None;
        for (i, c) in text.char_indices() {
            if c.is_ascii_alphabetic() {
                word_start.get_or_insert(i);
            } else {
                if let Some(s) = word_start.take() {
                    self.word(&text[s..i], &mut out);
                }
                out.push(c);
            }
        }
        if let Some(s) = word_start {
            self.word(&text[s..], &mut out);
        }
        out
    }
}

/// Transliterates `text` with `chart`.
pub fn transliterate(text: &str, chart: &TranslitChart) -> String {
    chart.transliterate(text)
}
