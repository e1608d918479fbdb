//! Batch orchestration: parse, transfer, MWE augmentation, sub-wording and
//! Braille, with one output file per stage and a JSON manifest.
//!
//! Stage files hold one record per processed sentence, aligned by line.
//! Sentences that fail are logged, left out of every stage file and listed in
//! the manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::braille::{encode_braille, BrailleChart, BrailleError};
use crate::mwe::{self, KnowledgeBase, LightVerbLexicon, MweError, SpanResolution, TranslitChart};
use crate::subword::{BpeModel, SubwordError};
use crate::transfer::{self, RuleSet, TransferError};
use crate::treebank::{read_trees, ParseTree, Style};

pub const LANGUAGE_PAIRS: &[&str] = &["en-hi", "en-mr", "en-ne", "en-gu", "en-ur"];
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config is missing path {0:?}")]
    MissingPath(&'static str),
    #[error("file for {field:?} does not exist: {path}")]
    FileNotFound { field: &'static str, path: PathBuf },
    #[error("unknown language pair {0:?}")]
    UnknownLanguagePair(String),
    #[error("invalid config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("{what} has {got} lines, expected {expected}")]
    LineCountMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Mwe(#[from] MweError),
    #[error(transparent)]
    Subword(#[from] SubwordError),
    #[error(transparent)]
    Braille(#[from] BrailleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Baseline,
    Mwe,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigPaths {
    pub rules: Option<PathBuf>,
    pub kb: Option<PathBuf>,
    pub light_verb_lexicon: Option<PathBuf>,
    pub translit_chart: Option<PathBuf>,
    pub bpe_model: Option<PathBuf>,
    pub braille_chart: Option<PathBuf>,
}

impl ConfigPaths {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Path)> {
        [
            ("rules", &self.rules),
            ("kb", &self.kb),
            ("light_verb_lexicon", &self.light_verb_lexicon),
            ("translit_chart", &self.translit_chart),
            ("bpe_model", &self.bpe_model),
            ("braille_chart", &self.braille_chart),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|p| (k, p)))
    }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub language_pair: String,
    pub mode: Mode,
    pub paths: ConfigPaths,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "yes")]
    pub subword_source: bool,
    #[serde(default = "yes")]
    pub subword_target: bool,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl PipelineConfig {
    pub fn from_json(json: &str, base_dir: impl Into<PathBuf>) -> Result<Self, PipelineError> {
        let mut cfg: PipelineConfig = serde_json::from_str(json)?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn target_language(&self) -> &str {
        self.language_pair.split_once('-').map_or("", |(_, t)| t)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn required(&self, field: &'static str, value: &Option<PathBuf>) -> Result<PathBuf, PipelineError> {
        value
            .as_deref()
            .map(|p| self.resolve(p))
            .ok_or(PipelineError::MissingPath(field))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !LANGUAGE_PAIRS.contains(&self.language_pair.as_str()) {
            return Err(PipelineError::UnknownLanguagePair(self.language_pair.clone()));
        }
        self.required("rules", &self.paths.rules)?;
        self.required("bpe_model", &self.paths.bpe_model)?;
        if self.mode == Mode::Mwe {
            self.required("kb", &self.paths.kb)?;
            self.required("light_verb_lexicon", &self.paths.light_verb_lexicon)?;
            self.required("translit_chart", &self.paths.translit_chart)?;
        }
        for (field, p) in self.paths.iter() {
            let path = self.resolve(p);
            if !path.is_file() {
                return Err(PipelineError::FileNotFound { field, path });
            }
        }
        Ok(())
    }

    /// SHA-256 of the config as written (paths unresolved).
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<PipelineConfig, PipelineError> {
    let path = path.as_ref();
    let json = fs::read_to_string(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    PipelineConfig::from_json(&json, base)
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the config's output directory.
    pub output_dir: Option<PathBuf>,
    /// Target-language text, line-aligned with the input, for `train.tgt`.
    pub target: Option<PathBuf>,
    /// Translated text, line-aligned with the input, for the Braille stage.
    pub translations: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEntry {
    pub name: String,
    pub file: String,
    pub sha256: String,
    pub records: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedSentence {
    pub sentence_index: usize,
    pub line: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub config_digest: String,
    pub language_pair: String,
    pub mode: Mode,
    pub n: usize,
    pub processed: usize,
    pub skipped: Vec<SkippedSentence>,
    pub stages: Vec<StageEntry>,
    pub warnings: BTreeMap<String, usize>,
}

struct Resources {
    rules: RuleSet,
    bpe: BpeModel,
    mwe: Option<(KnowledgeBase, LightVerbLexicon, TranslitChart)>,
    lang: String,
}

struct Record {
    parsed: String,
    transferred: String,
    ne_translated: Option<String>,
    sentence: String,
    warnings: BTreeMap<String, usize>,
}

fn process(tree: &ParseTree, res: &Resources) -> Result<Record, PipelineError> {
    let parsed = tree.serialize(Style::Square, true);
    let moved = transfer::transfer(tree, &res.rules)?;
    let transferred = moved.tree.skeleton();
    let mut warnings = BTreeMap::new();
    let (final_tree, ne_translated) = match &res.mwe {
        None => (moved.tree.clone(), None),
        Some((kb, lexicon, chart)) => {
            let spans = mwe::recognize(tree, lexicon);
            let out = mwe::augment(&moved, &spans, kb, chart, &res.lang)?;
            for o in &out.outcomes {
                let key = match o.resolution {
                    SpanResolution::KnowledgeBase => continue,
                    SpanResolution::Transliterated => "mwe_transliterated",
                    SpanResolution::Untranslated => "mwe_untranslated",
                };
                *warnings.entry(key.to_owned()).or_insert(0) += 1;
            }
            let text = out.tree.to_string();
            (out.tree, Some(text))
        }
    };
    Ok(Record {
        parsed,
        transferred,
        ne_translated,
        sentence: final_tree.sentence(),
        warnings,
    })
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_stage(dir: &Path, name: &str, lines: &[String], stages: &mut Vec<StageEntry>) -> Result<(), PipelineError> {
    let mut body = String::new();
    for l in lines {
        body.push_str(l);
        body.push('\n');
    }
    let file = format!("{name}.txt");
    fs::write(dir.join(&file), &body)?;
    stages.push(StageEntry {
        name: name.to_owned(),
        file,
        sha256: sha256_hex(body.as_bytes()),
        records: lines.len(),
    });
    Ok(())
}

fn aligned_lines(path: &Path, what: &'static str, expected: usize) -> Result<Vec<String>, PipelineError> {
    let text = fs::read_to_string(path)?;
    let lines: Vec<String> = text.lines().map(str::to_owned).collect();
    if lines.len() != expected {
        return Err(PipelineError::LineCountMismatch {
            what,
            got: lines.len(),
            expected,
        });
    }
    Ok(lines)
}

fn bpe_line(bpe: &BpeModel, line: &str, enabled: bool) -> String {
    if enabled {
        bpe.encode(line).join(" ")
    } else {
        line.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

/// Runs every stage over the trees in `input` and writes the stage files and
/// manifest to the output directory.
pub fn run_pipeline(cfg: &PipelineConfig, input: &Path, opts: &RunOptions) -> Result<Manifest, PipelineError> {
    cfg.validate()?;
    let out_dir = match (&opts.output_dir, &cfg.output_dir) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => cfg.resolve(d),
        (None, None) => PathBuf::from("out"),
    };
    let p = &cfg.paths;
    let res = Resources {
        rules: transfer::load_rules(cfg.required("rules", &p.rules)?)?,
        bpe: BpeModel::load(cfg.required("bpe_model", &p.bpe_model)?)?,
        mwe: match cfg.mode {
            Mode::Baseline => None,
            Mode::Mwe => Some((
                KnowledgeBase::load(cfg.required("kb", &p.kb)?)?,
                LightVerbLexicon::load(cfg.required("light_verb_lexicon", &p.light_verb_lexicon)?)?,
                TranslitChart::load(cfg.required("translit_chart", &p.translit_chart)?)?,
            )),
        },
        lang: cfg.target_language().to_owned(),
    };
    let braille = match &opts.translations {
        Some(_) => Some(BrailleChart::load(cfg.required("braille_chart", &p.braille_chart)?)?),
        None => None,
    };

    let contents = fs::read_to_string(input)?;
    let trees = read_trees(&contents);
    let n = trees.len();
    let targets = opts
        .target
        .as_deref()
        .map(|t| aligned_lines(t, "target file", n))
        .transpose()?;
    let translations = opts
        .translations
        .as_deref()
        .map(|t| aligned_lines(t, "translation file", n))
        .transpose()?;

    let results: Vec<Result<Record, String>> = trees
        .par_iter()
        .map(|tl| match &tl.tree {
            Ok(tree) => process(tree, &res).map_err(|e| e.to_string()),
            Err(e) => Err(e.to_string()),
        })
        .collect();

    let mut skipped = Vec::new();
    let mut kept = Vec::new();
    let mut warnings: BTreeMap<String, usize> = BTreeMap::new();
    for (i, (tl, r)) in trees.iter().zip(results).enumerate() {
        match r {
            Ok(rec) => {
                for (k, v) in &rec.warnings {
                    *warnings.entry(k.clone()).or_insert(0) += v;
                }
                kept.push((i, rec));
            }
            Err(error) => {
                warn!("skipping sentence {i} (line {}): {error}", tl.line);
                skipped.push(SkippedSentence {
                    sentence_index: i,
                    line: tl.line,
                    error,
                });
            }
        }
    }

    fs::create_dir_all(&out_dir)?;
    let mut stages = Vec::new();
    let col = |f: fn(&Record) -> String| kept.iter().map(|(_, r)| f(r)).collect::<Vec<_>>();
    write_stage(&out_dir, "parsed", &col(|r| r.parsed.clone()), &mut stages)?;
    write_stage(&out_dir, "transferred", &col(|r| r.transferred.clone()), &mut stages)?;
    if cfg.mode == Mode::Mwe {
        write_stage(
            &out_dir,
            "ne_translated",
            &col(|r| r.ne_translated.clone().unwrap_or_default()),
            &mut stages,
        )?;
    }
    let subworded: Vec<String> = kept
        .par_iter()
        .map(|(_, r)| bpe_line(&res.bpe, &r.sentence, cfg.subword_source))
        .collect();
    write_stage(&out_dir, "subworded", &subworded, &mut stages)?;
    if let (Some(chart), Some(lines)) = (&braille, &translations) {
        let encoded: Vec<_> = kept
            .par_iter()
            .map(|(i, _)| encode_braille(&lines[*i], chart))
            .collect();
        let unmapped: usize = encoded.iter().map(|e| e.warning_count()).sum();
        if unmapped > 0 {
            warnings.insert("braille_unmapped".to_owned(), unmapped);
        }
        let text: Vec<String> = encoded.into_iter().map(|e| e.braille).collect();
        write_stage(&out_dir, "braille", &text, &mut stages)?;
    }

    // Files handed to the external NMT toolkit.
    fs::write(out_dir.join("train.src"), join_lines(&subworded))?;
    if let Some(t) = &targets {
        let tgt: Vec<String> = kept
            .iter()
            .map(|(i, _)| bpe_line(&res.bpe, &t[*i], cfg.subword_target))
            .collect();
        fs::write(out_dir.join("train.tgt"), join_lines(&tgt))?;
    }

    let manifest = Manifest {
        config_digest: cfg.digest(),
        language_pair: cfg.language_pair.clone(),
        mode: cfg.mode,
        n,
        processed: kept.len(),
        skipped,
        stages,
        warnings,
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    fs::write(out_dir.join(MANIFEST_FILE), json)?;
    Ok(manifest)
}

fn join_lines(lines: &[String]) -> String {
    lines.iter().map(|l| format!("{l}\n")).collect()
}
