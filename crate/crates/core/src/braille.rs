//! Text to Bharati Braille as Unicode braille patterns (U+2800 block).
//!
//! The chart is a TSV of `grapheme  dots  class` rows. Dots are written
//! `1-3`; a grapheme spanning several cells lists them space-separated
//! (`5 1-2-3-5`). The number sign is the row whose grapheme is `<num>`.
//!
//! Decoding is contextual because the code reuses cells:
//! a vowel cell directly after a consonant is read as the vowel sign,
//! otherwise as the independent vowel; and the number sign shares its cell
//! with ण, so it is only read as a number sign when it follows a non-letter
//! and precedes a digit cell. As a consequence, a consonant followed by an
//! independent vowel (नई) decodes to the vowel sign (नी).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use thiserror::Error;

pub const BLANK: char = '\u{2800}';
pub const NUMBER_SIGN_KEY: &str = "<num>";

#[derive(Debug, Error)]
pub enum BrailleError {
    #[error("chart has no entries")]
    EmptyChart,
    #[error("invalid dots at line {0}")]
    InvalidDots(usize),
    #[error("duplicate grapheme at line {0}")]
    DuplicateGrapheme(usize),
    #[error("malformed row at line {0}")]
    MalformedRow(usize),
    #[error("chart cannot be inverted: {0}")]
    AmbiguousChart(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One 6-dot cell, stored as its dot bit mask (dot k is bit k-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrailleCell(u8);

impl BrailleCell {
    pub fn from_dots(dots: &[u8]) -> Option<Self> {
        let mut mask = 0u8;
        for &d in dots {
            if !(1..=6).contains(&d) {
                return None;
            }
            mask |= 1 << (d - 1);
        }
        Some(BrailleCell(mask))
    }

    /// Parses `1-3`, or `0` for the empty cell.
    pub fn parse(s: &str) -> Option<Self> {
        if s == "0" {
            return Some(BrailleCell(0));
        }
        let dots = s.split('-').map(|d| d.parse::<u8>().ok()).collect::<Option<Vec<_>>>()?;
        Self::from_dots(&dots)
    }

    pub fn from_char(c: char) -> Option<Self> {
        let off = (c as u32).checked_sub(0x2800)?;
        (off < 0x40).then_some(BrailleCell(off as u8))
    }

    pub fn to_char(self) -> char {
        char::from_u32(0x2800 + u32::from(self.0)).expect("cell is in the braille block")
    }

    pub fn dots(self) -> Vec<u8> {
        (1..=6).filter(|d| self.0 & (1 << (d - 1)) != 0).collect()
    }
}

impl fmt::Display for BrailleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    Consonant,
    Vowel,
    Matra,
    Virama,
    Digit,
    Punct,
    Sign,
}

impl CharClass {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "consonant" => CharClass::Consonant,
            "vowel" => CharClass::Vowel,
            "matra" => CharClass::Matra,
            "virama" => CharClass::Virama,
            "digit" => CharClass::Digit,
            "punct" => CharClass::Punct,
            "sign" => CharClass::Sign,
            _ => return None,
        })
    }

    fn is_letter(self) -> bool {
        matches!(
            self,
            CharClass::Consonant | CharClass::Vowel | CharClass::Matra | CharClass::Virama | CharClass::Sign
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartEntry {
    pub grapheme: String,
    pub cells: Vec<BrailleCell>,
    pub class: CharClass,
}

#[derive(Debug, Clone)]
pub struct BrailleChart {
    entries: Vec<ChartEntry>,
    by_grapheme: HashMap<String, usize>,
    max_key_chars: usize,
    number_sign: Option<BrailleCell>,
    /// Letter and sign entries by cell sequence.
    inverse: HashMap<Vec<BrailleCell>, Vec<usize>>,
    digits: HashMap<BrailleCell, usize>,
    max_seq: usize,
    ambiguity: Option<String>,
}

impl BrailleChart {
    pub fn parse(contents: &str) -> Result<Self, BrailleError> {
        let mut entries = Vec::new();
        let mut by_grapheme = HashMap::new();
        let mut number_sign = None;
        for (i, line) in contents.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [grapheme, dots, class] = cols[..] else {
                return Err(BrailleError::MalformedRow(lineno));
            };
            let class = CharClass::parse(class.trim()).ok_or(BrailleError::MalformedRow(lineno))?;
            let cells = dots
                .split_whitespace()
                .map(BrailleCell::parse)
                .collect::<Option<Vec<_>>>()
                .filter(|c| !c.is_empty())
                .ok_or(BrailleError::InvalidDots(lineno))?;
            if grapheme.is_empty() {
                return Err(BrailleError::MalformedRow(lineno));
            }
            if by_grapheme.contains_key(grapheme) {
                return Err(BrailleError::DuplicateGrapheme(lineno));
            }
            if grapheme == NUMBER_SIGN_KEY {
                if cells.len() != 1 {
                    return Err(BrailleError::InvalidDots(lineno));
                }
                number_sign = Some(cells[0]);
            }
            if class == CharClass::Digit && cells.len() != 1 {
                return Err(BrailleError::InvalidDots(lineno));
            }
            by_grapheme.insert(grapheme.to_owned(), entries.len());
            entries.push(ChartEntry {
                grapheme: grapheme.to_owned(),
                cells,
                class,
            });
        }
        if entries.is_empty() {
            return Err(BrailleError::EmptyChart);
        }
        let mut chart = BrailleChart {
            max_key_chars: entries.iter().map(|e| e.grapheme.chars().count()).max().unwrap_or(1),
            entries,
            by_grapheme,
            number_sign,
            inverse: HashMap::new(),
            digits: HashMap::new(),
            max_seq: 0,
            ambiguity: None,
        };
        chart.build_inverse();
        Ok(chart)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BrailleError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn build_inverse(&mut self) {
        let mut problems = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if e.grapheme == NUMBER_SIGN_KEY {
                continue;
            }
            if e.class == CharClass::Digit {
                if let Some(&j) = self.digits.get(&e.cells[0]) {
                    problems.push(format!("{} and {}", self.entries[j].grapheme, e.grapheme));
                }
                self.digits.insert(e.cells[0], i);
                continue;
            }
            self.inverse.entry(e.cells.clone()).or_default().push(i);
            self.max_seq = self.max_seq.max(e.cells.len());
        }
        for ids in self.inverse.values() {
            let classes: Vec<CharClass> = ids.iter().map(|&i| self.entries[i].class).collect();
            let resolvable = match classes[..] {
                [_] => true,
                [a, b] => matches!(
                    (a, b),
                    (CharClass::Vowel, CharClass::Matra) | (CharClass::Matra, CharClass::Vowel)
                ),
                _ => false,
            };
            if !resolvable {
                let names: Vec<&str> = ids.iter().map(|&i| self.entries[i].grapheme.as_str()).collect();
                problems.push(names.join(" and "));
            }
        }
        // A multi-cell sequence that also splits into shorter entries.
        for seq in self.inverse.keys().filter(|s| s.len() > 1) {
            if self.splits(seq) {
                let g = &self.entries[self.inverse[seq][0]].grapheme;
                problems.push(format!("{g} is also a sequence of shorter entries"));
            }
        }
        problems.sort();
        if !problems.is_empty() {
            self.ambiguity = Some(problems.join("; "));
        }
    }

    fn splits(&self, seq: &[BrailleCell]) -> bool {
        let n = seq.len();
        let mut ok = vec![false; n + 1];
        ok[0] = true;
        for end in 1..=n {
            for start in 0..end {
                if ok[start] && end - start < n && self.inverse.contains_key(&seq[start..end]) {
                    ok[end] = true;
                    break;
                }
            }
        }
        ok[n]
    }

    pub fn entries(&self) -> &[ChartEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, grapheme: &str) -> Option<&ChartEntry> {
        self.by_grapheme.get(grapheme).map(|&i| &self.entries[i])
    }

    pub fn number_sign(&self) -> Option<BrailleCell> {
        self.number_sign
    }

    /// Why the chart cannot be decoded, if it cannot.
    pub fn ambiguity(&self) -> Option<&str> {
        self.ambiguity.as_deref()
    }
}

/// Splits text into chart-addressable units: one per Unicode scalar, so a
/// consonant, its vowel sign and a virama are separate units.
pub fn segment_graphemes(text: &str) -> Vec<&str> {
    text.char_indices().map(|(i, c)| &text[i..i + c.len_utf8()]).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Encoded {
    pub braille: String,
    /// Characters that had no chart entry and were copied through.
    pub unmapped: BTreeMap<char, usize>,
    pub number_signs: usize,
}

impl Encoded {
    pub fn warning_count(&self) -> usize {
        self.unmapped.values().sum()
    }
}

pub fn encode_braille(text: &str, chart: &BrailleChart) -> Encoded {
    let mut out = Encoded::default();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut in_number = false;
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            out.braille.push(BLANK);
            in_number = false;
            i += 1;
            continue;
        }
        let longest = (1..=chart.max_key_chars.min(chars.len() - i)).rev().find_map(|n| {
            let end = chars.get(i + n).map_or(text.len(), |&(e, _)| e);
            chart.get(&text[start..end]).map(|e| (n, e))
        });
        match longest {
            Some((n, entry)) => {
                let digit = entry.class == CharClass::Digit;
                if digit && !in_number {
                    if let Some(sign) = chart.number_sign {
                        out.braille.push(sign.to_char());
                        out.number_signs += 1;
                    }
                }
                in_number = digit;
                out.braille.extend(entry.cells.iter().map(|c| c.to_char()));
                i += n;
            }
            None => {
                *out.unmapped.entry(c).or_insert(0) += 1;
                out.braille.push(c);
                in_number = false;
                i += 1;
            }
        }
    }
    out
}

pub fn decode_braille(braille: &str, chart: &BrailleChart) -> Result<String, BrailleError> {
    if let Some(why) = &chart.ambiguity {
        return Err(BrailleError::AmbiguousChart(why.clone()));
    }
    let chars: Vec<char> = braille.chars().collect();
    let mut out = String::with_capacity(braille.len() * 2);
    let mut last: Option<CharClass> = None;
    let mut in_number = false;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == BLANK || c.is_whitespace() {
            out.push(' ');
            last = None;
            in_number = false;
            i += 1;
            continue;
        }
        let Some(cell) = BrailleCell::from_char(c) else {
            out.push(c);
            last = None;
            in_number = false;
            i += 1;
            continue;
        };
        if in_number {
            if let Some(&d) = chart.digits.get(&cell) {
                out.push_str(&chart.entries[d].grapheme);
                i += 1;
                continue;
            }
            in_number = false;
        }
        let next_is_digit = chars
            .get(i + 1)
            .and_then(|&n| BrailleCell::from_char(n))
            .is_some_and(|n| chart.digits.contains_key(&n));
        if Some(cell) == chart.number_sign && next_is_digit && !last.is_some_and(CharClass::is_letter) {
            in_number = true;
            last = Some(CharClass::Digit);
            i += 1;
            continue;
        }
        let cells: Vec<BrailleCell> = chars[i..chars.len().min(i + chart.max_seq)]
            .iter()
            .map_while(|&ch| BrailleCell::from_char(ch))
            .collect();
        let found = (1..=cells.len())
            .rev()
            .find_map(|n| chart.inverse.get(&cells[..n]).map(|ids| (n, ids)));
        match found {
            Some((n, ids)) => {
                let after_consonant = last == Some(CharClass::Consonant);
                let pick = ids
                    .iter()
                    .copied()
                    .find(|&id| (chart.entries[id].class == CharClass::Matra) == after_consonant)
                    .unwrap_or(ids[0]);
                let entry = &chart.entries[pick];
                out.push_str(&entry.grapheme);
                last = Some(entry.class);
                i += n;
            }
            None => {
                out.push(c);
                last = None;
                i += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> BrailleChart {
        BrailleChart::parse(include_str!("../data/braille/devanagari.tsv")).unwrap()
    }

    #[test]
    fn cells() {
        assert_eq!(BrailleCell::parse("1-3").unwrap().to_char(), '⠅');
        assert_eq!(BrailleCell::parse("1-2-3-4-5-6").unwrap().to_char(), '⠿');
        assert_eq!(BrailleCell::parse("0").unwrap().to_char(), BLANK);
        assert!(BrailleCell::parse("9").is_none());
        assert!(BrailleCell::parse("7").is_none());
        assert_eq!(BrailleCell::from_char('⠝').unwrap().dots(), [1, 3, 4, 5]);
        assert!(BrailleCell::from_char('a').is_none());
    }

    #[test]
    fn load_errors() {
        assert!(matches!(BrailleChart::parse(""), Err(BrailleError::EmptyChart)));
        assert!(matches!(BrailleChart::parse("# only\n"), Err(BrailleError::EmptyChart)));
        assert!(matches!(
            BrailleChart::parse("क\t9\tconsonant\n"),
            Err(BrailleError::InvalidDots(1))
        ));
        assert!(matches!(
            BrailleChart::parse("क\t1-3\tconsonant\nक\t1-4\tconsonant\n"),
            Err(BrailleError::DuplicateGrapheme(2))
        ));
    }

    #[test]
    fn bundled_chart() {
        let c = chart();
        assert!(c.len() >= 60);
        assert!(c.ambiguity().is_none(), "{:?}", c.ambiguity());
        assert_eq!(c.number_sign().unwrap().to_char(), '⠼');
    }

    #[test]
    fn encodes_letters_and_digits() {
        let c = chart();
        assert_eq!(encode_braille("क", &c).braille, "⠅");
        assert_eq!(encode_braille("", &c).braille, "");
        let e = encode_braille("१२", &c);
        assert_eq!(e.braille, "⠼⠁⠃");
        assert_eq!(e.number_signs, 1);
        assert_eq!(encode_braille("कविता", &c).braille, "⠅⠧⠊⠞⠜");
        let e = encode_braille("क x", &c);
        assert_eq!(e.braille, "⠅⠀x");
        assert_eq!(e.warning_count(), 1);
    }

    #[test]
    fn round_trips() {
        let c = chart();
        for w in ["कविता", "शर्मा", "गणेश", "ऋषि", "कृपा", "अंक", "१२ ३", "दुःख", "क्षमा", "आइए"]
        {
            let b = encode_braille(w, &c).braille;
            assert_eq!(decode_braille(&b, &c).unwrap(), w, "{b}");
        }
        assert_eq!(decode_braille("", &c).unwrap(), "");
    }

    #[test]
    fn consonant_then_independent_vowel_is_lost() {
        let c = chart();
        let b = encode_braille("नई", &c).braille;
        assert_eq!(decode_braille(&b, &c).unwrap(), "नी");
    }

    #[test]
    fn ambiguous_chart_refuses_decode() {
        let c = BrailleChart::parse("क\t1-3\tconsonant\nख\t1-3\tconsonant\n").unwrap();
        assert!(matches!(decode_braille("⠅", &c), Err(BrailleError::AmbiguousChart(_))));
        // encoding still works
        assert_eq!(encode_braille("कख", &c).braille, "⠅⠅");
    }

    #[test]
    fn segments() {
        assert_eq!(segment_graphemes("कविता"), ["क", "व", "ि", "त", "ा"]);
        assert!(segment_graphemes("").is_empty());
    }
}
