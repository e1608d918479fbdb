//! Sentence- and system-level BLEU.
//!
//! The system score is the plain arithmetic mean of sentence scores.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("reference list is empty")]
    EmptyReferenceList,
    #[error("score list is empty")]
    EmptyList,
    #[error("score {0} is not a finite number")]
    NonFiniteScore(f64),
    #[error("hypothesis has {0} lines but reference has {1}")]
    LineCountMismatch(usize, usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Smoothing {
    None,
    /// Zero n-gram matches are replaced by `epsilon`.
    AddEpsilon {
        epsilon: f64,
    },
}

impl Smoothing {
    /// `none` or `eps:<value>`.
    pub fn parse(s: &str) -> Result<Self, EvalError> {
        if s == "none" {
            return Ok(Smoothing::None);
        }
        let eps = s
            .strip_prefix("eps:")
            .and_then(|v| v.parse::<f64>().ok())
            .ok_or_else(|| EvalError::InvalidConfig(format!("unknown smoothing {s:?}")))?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(EvalError::InvalidConfig("epsilon must be positive".into()));
        }
        Ok(Smoothing::AddEpsilon { epsilon: eps })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub max_order: usize,
    pub weights: Vec<f64>,
    pub smoothing: Smoothing,
}

impl Default for BleuConfig {
    fn default() -> Self {
        Self::uniform(4, Smoothing::None)
    }
}

impl BleuConfig {
    pub fn uniform(max_order: usize, smoothing: Smoothing) -> Self {
        BleuConfig {
            max_order,
            weights: vec![1.0 / max_order as f64; max_order],
            smoothing,
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.max_order == 0 {
            return Err(EvalError::InvalidConfig("max_order must be positive".into()));
        }
        if self.weights.len() != self.max_order {
            return Err(EvalError::InvalidConfig("one weight per order required".into()));
        }
        if self.weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(EvalError::InvalidConfig("weights must be non-negative".into()));
        }
        if (self.weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(EvalError::InvalidConfig("weights must sum to 1".into()));
        }
        if let Smoothing::AddEpsilon { epsilon } = self.smoothing {
            if !(epsilon > 0.0 && epsilon.is_finite()) {
                return Err(EvalError::InvalidConfig("epsilon must be positive".into()));
            }
        }
        Ok(())
    }
}

pub fn tokenize(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            let key: Vec<&str> = w.iter().map(AsRef::as_ref).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped n-gram matches and the hypothesis n-gram total, per order.
pub fn modified_precisions<S: AsRef<str>>(hyp: &[S], refs: &[Vec<S>], max_order: usize) -> Vec<(usize, usize)> {
    (1..=max_order)
        .map(|n| {
            let hyp_counts = ngram_counts(hyp, n);
            let mut max_ref: HashMap<Vec<&str>, usize> = HashMap::new();
            for r in refs {
                for (gram, c) in ngram_counts(r, n) {
                    let slot = max_ref.entry(gram).or_insert(0);
                    *slot = (*slot).max(c);
                }
            }
            let matches = hyp_counts
                .iter()
                .map(|(g, &c)| c.min(max_ref.get(g).copied().unwrap_or(0)))
                .sum();
            (matches, hyp.len().saturating_sub(n - 1))
        })
        .collect()
}

/// Length of the reference closest to `hyp_len`, preferring the shorter on ties.
pub fn closest_ref_len<S>(hyp_len: usize, refs: &[Vec<S>]) -> usize {
    refs.iter()
        .map(Vec::len)
        .min_by_key(|&r| (r.abs_diff(hyp_len), r))
        .unwrap_or(0)
}

pub fn sentence_bleu<S: AsRef<str>>(hyp: &[S], refs: &[Vec<S>], cfg: &BleuConfig) -> Result<f64, EvalError> {
    if refs.is_empty() {
        return Err(EvalError::EmptyReferenceList);
    }
    cfg.validate()?;
    let c = hyp.len();
    if c == 0 {
        return Ok(0.0);
    }
    let mut log_sum = 0.0;
    for ((matches, total), w) in modified_precisions(hyp, refs, cfg.max_order)
        .into_iter()
        .zip(&cfg.weights)
    {
        let p = if matches == 0 {
            match cfg.smoothing {
                Smoothing::None => return Ok(0.0),
                Smoothing::AddEpsilon { epsilon } => epsilon / total.max(1) as f64,
            }
        } else {
            matches as f64 / total.max(1) as f64
        };
        log_sum += w * p.ln();
    }
    let r = closest_ref_len(c, refs);
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    Ok((bp * log_sum.exp()).clamp(0.0, 1.0))
}

/// Mean of the sentence scores. Scores are summed in sorted order with
/// compensation, so the result does not depend on their order.
pub fn system_bleu(scores: &[f64]) -> Result<f64, EvalError> {
    if scores.is_empty() {
        return Err(EvalError::EmptyList);
    }
    if let Some(&bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(EvalError::NonFiniteScore(bad));
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in sorted {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    Ok((sum + comp) / scores.len() as f64)
}

/// Gain in percentage points, rounded to two decimals.
pub fn improvement(baseline: f64, mwe_induced: f64) -> f64 {
    ((mwe_induced - baseline) * 100.0 * 100.0).round() / 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub n: usize,
    pub sentence_scores: Vec<f64>,
    pub system_score: f64,
    pub language_pair: String,
    pub max_order: usize,
    pub smoothing: Smoothing,
}

/// Scores line-aligned hypothesis and reference texts.
pub fn evaluate_texts(
    hyp: &str,
    reference: &str,
    cfg: &BleuConfig,
    language_pair: &str,
) -> Result<EvaluationReport, EvalError> {
    let hyp_lines: Vec<&str> = hyp.lines().collect();
    let ref_lines: Vec<&str> = reference.lines().collect();
    if hyp_lines.len() != ref_lines.len() {
        return Err(EvalError::LineCountMismatch(hyp_lines.len(), ref_lines.len()));
    }
    let sentence_scores = hyp_lines
        .iter()
        .zip(&ref_lines)
        .map(|(h, r)| sentence_bleu(&tokenize(h), &[tokenize(r)], cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let system_score = if sentence_scores.is_empty() {
        0.0
    } else {
        system_bleu(&sentence_scores)?
    };
    Ok(EvaluationReport {
        n: sentence_scores.len(),
        sentence_scores,
        system_score,
        language_pair: language_pair.to_owned(),
        max_order: cfg.max_order,
        smoothing: cfg.smoothing,
    })
}

pub fn evaluate_corpus(
    hyp: impl AsRef<Path>,
    reference: impl AsRef<Path>,
    cfg: &BleuConfig,
    language_pair: &str,
) -> Result<EvaluationReport, EvalError> {
    let h = std::fs::read_to_string(hyp)?;
    let r = std::fs::read_to_string(reference)?;
    evaluate_texts(&h, &r, cfg, language_pair)
}
