use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bharti_core::braille::{encode_braille, BrailleChart};
use bharti_core::bundled;
use bharti_core::evalmetrics::{evaluate_corpus, BleuConfig, Smoothing};
use bharti_core::mwe::{self, KnowledgeBase, LightVerbLexicon, TranslitChart};
use bharti_core::pipeline::{self, RunOptions};
use bharti_core::subword::{self, decode, train_bpe, word_frequencies, BpeModel};
use bharti_core::transfer::{self, RuleSet};
use bharti_core::treebank::{read_trees, Style};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use log::warn;
use serde_json::json;

type Result<T> = std::result::Result<T, Box<dyn Error>>;

const EXIT_DATA: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bharti",
    version,
    about = "English to Indic syntax transfer, MWE handling, sub-wording, Braille and BLEU"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Square,
    Round,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and normalize bracketed parse trees, one per line.
    Parse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "square")]
        style: StyleArg,
        /// Print tags only, without words.
        #[arg(long)]
        skeleton: bool,
    },
    /// Reorder trees with transfer rules.
    Transfer {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write applied rules and address maps as JSON lines.
        #[arg(long)]
        emit_map: Option<PathBuf>,
    },
    /// Recognize multiword expressions and optionally write translated trees.
    Mwe {
        #[arg(long = "in")]
        input: PathBuf,
        /// Recognized spans as JSON lines.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Also transfer and augment, writing trees here.
        #[arg(long)]
        augmented: Option<PathBuf>,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        kb: Option<PathBuf>,
        #[arg(long)]
        chart: Option<PathBuf>,
        #[arg(long, default_value = "hi")]
        lang: String,
    },
    /// Byte-pair-encoding sub-words.
    Subword {
        #[command(subcommand)]
        action: SubwordAction,
    },
    /// Encode text as Unicode Braille.
    Braille {
        #[arg(long)]
        chart: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Print line, cell and unmapped-character counts.
        #[arg(long)]
        stats: bool,
    },
    /// Score a hypothesis file against a reference file.
    Bleu {
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long, default_value_t = 4)]
        orders: usize,
        /// `none` or `eps:<value>`.
        #[arg(long, default_value = "none")]
        smooth: String,
        #[arg(long, default_value = "en-hi")]
        pair: String,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the full preprocessing pipeline.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Target-language text aligned with the input, for train.tgt.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Translated text aligned with the input, for the Braille stage.
        #[arg(long)]
        translations: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SubwordAction {
    /// Learn merges from a text file.
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = subword::DEFAULT_MERGES)]
        merges: usize,
    },
    /// Split text into sub-word tokens.
    Apply {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Join sub-word tokens back into words.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, PartialEq, Eq)]
enum Outcome {
    Done,
    Partial,
}

fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let body: String = lines.iter().map(|l| format!("{l}\n")).collect();
    fs::write(path, body)?;
    Ok(())
}

fn load_or<T>(path: Option<&Path>, load: impl Fn(&Path) -> Result<T>, fallback: impl Fn() -> Result<T>) -> Result<T> {
    match path {
        Some(p) => load(p),
        None => fallback(),
    }
}

fn cmd_parse(input: &Path, out: Option<&Path>, style: StyleArg, skeleton: bool) -> Result<Outcome> {
    let text = fs::read_to_string(input)?;
    let style = match style {
        StyleArg::Square => Style::Square,
        StyleArg::Round => Style::Round,
    };
    let mut lines = Vec::new();
    let mut failed = 0;
    for tl in read_trees(&text) {
        match tl.tree {
            Ok(t) => lines.push(t.serialize(style, !skeleton)),
            Err(e) => {
                failed += 1;
                warn!("line {}: {e}", tl.line);
            }
        }
    }
    match out {
        Some(p) => write_lines(p, &lines)?,
        None => lines.iter().for_each(|l| println!("{l}")),
    }
    Ok(if failed > 0 { Outcome::Partial } else { Outcome::Done })
}

fn cmd_transfer(rules: &Path, input: &Path, out: &Path, emit_map: Option<&Path>) -> Result<Outcome> {
    let rules = transfer::load_rules(rules)?;
    let text = fs::read_to_string(input)?;
    let mut trees = Vec::new();
    let mut maps = Vec::new();
    let mut failed = 0;
    for (i, tl) in read_trees(&text).into_iter().enumerate() {
        let result = tl
            .tree
            .map_err(Box::<dyn Error>::from)
            .and_then(|t| Ok(transfer::transfer(&t, &rules)?));
        match result {
            Ok(r) => {
                trees.push(r.tree.to_string());
                let map: Vec<_> = r.address_map.iter().map(|(s, t)| json!([s, t])).collect();
                maps.push(
                    json!({"sentence_index": i, "applied_rules": r.applied_rules, "address_map": map}).to_string(),
                );
            }
            Err(e) => {
                failed += 1;
                warn!("sentence {i} (line {}): {e}", tl.line);
            }
        }
    }
    write_lines(out, &trees)?;
    if let Some(p) = emit_map {
        write_lines(p, &maps)?;
    }
    Ok(if failed > 0 { Outcome::Partial } else { Outcome::Done })
}

#[allow(clippy::too_many_arguments)]
fn cmd_mwe(
    input: &Path,
    out: &Path,
    lexicon: Option<&Path>,
    augmented: Option<&Path>,
    rules: Option<&Path>,
    kb: Option<&Path>,
    chart: Option<&Path>,
    lang: &str,
) -> Result<Outcome> {
    let lexicon = load_or(
        lexicon,
        |p| Ok(LightVerbLexicon::load(p)?),
        || Ok(LightVerbLexicon::parse(bundled::LIGHT_VERBS)),
    )?;
    let augment_with = match augmented {
        None => None,
        Some(_) => Some((
            load_or(
                rules,
                |p| Ok(transfer::load_rules(p)?),
                || Ok(RuleSet::from_json(bundled::EN_HI_RULES)?),
            )?,
            load_or(
                kb,
                |p| Ok(KnowledgeBase::load(p)?),
                || Ok(KnowledgeBase::parse(bundled::EN_HI_KB)?),
            )?,
            load_or(
                chart,
                |p| Ok(TranslitChart::load(p)?),
                || Ok(TranslitChart::parse(bundled::DEVANAGARI_TRANSLIT)?),
            )?,
        )),
    };
    let text = fs::read_to_string(input)?;
    let mut span_lines = Vec::new();
    let mut tree_lines = Vec::new();
    let mut failed = 0;
    for (i, tl) in read_trees(&text).into_iter().enumerate() {
        let tree = match tl.tree {
            Ok(t) => t,
            Err(e) => {
                failed += 1;
                warn!("sentence {i} (line {}): {e}", tl.line);
                continue;
            }
        };
        let spans = mwe::recognize(&tree, &lexicon);
        if let Some((rules, kb, chart)) = &augment_with {
            let done = transfer::transfer(&tree, rules)
                .map_err(Box::<dyn Error>::from)
                .and_then(|r| Ok(mwe::augment(&r, &spans, kb, chart, lang)?));
            match done {
                Ok(a) => tree_lines.push(a.tree.to_string()),
                Err(e) => {
                    failed += 1;
                    warn!("sentence {i} (line {}): {e}", tl.line);
                    continue;
                }
            }
        }
        span_lines.push(json!({"sentence_index": i, "spans": spans}).to_string());
    }
    write_lines(out, &span_lines)?;
    if let Some(p) = augmented {
        write_lines(p, &tree_lines)?;
    }
    Ok(if failed > 0 { Outcome::Partial } else { Outcome::Done })
}

fn cmd_subword(action: SubwordAction) -> Result<Outcome> {
    match action {
        SubwordAction::Train { input, model, merges } => {
            let text = fs::read_to_string(input)?;
            let m = train_bpe(&word_frequencies(text.lines()), merges)?;
            m.save(&model)?;
            eprintln!("learned {} merges", m.merges().len());
        }
        SubwordAction::Apply { model, input, out } => {
            let m = BpeModel::load(model)?;
            let text = fs::read_to_string(input)?;
            let lines: Vec<String> = text.lines().map(|l| m.encode(l).join(" ")).collect();
            write_lines(&out, &lines)?;
        }
        SubwordAction::Decode { input, out } => {
            let text = fs::read_to_string(input)?;
            let lines: Vec<String> = text
                .lines()
                .map(|l| decode(&l.split_whitespace().collect::<Vec<_>>()))
                .collect();
            write_lines(&out, &lines)?;
        }
    }
    Ok(Outcome::Done)
}

fn cmd_braille(chart: &Path, input: &Path, out: &Path, stats: bool) -> Result<Outcome> {
    let chart = BrailleChart::load(chart)?;
    let text = fs::read_to_string(input)?;
    let mut lines = Vec::new();
    let (mut cells, mut unmapped) = (0, 0);
    for line in text.lines() {
        let e = encode_braille(line, &chart);
        cells += e
            .braille
            .chars()
            .filter(|c| ('\u{2800}'..='\u{283F}').contains(c))
            .count();
        unmapped += e.warning_count();
        lines.push(e.braille);
    }
    write_lines(out, &lines)?;
    if stats {
        println!(
            "{}",
            json!({"lines": lines.len(), "cells": cells, "unmapped": unmapped})
        );
    }
    if unmapped > 0 {
        warn!("{unmapped} characters had no chart entry");
    }
    Ok(Outcome::Done)
}

fn cmd_bleu(
    hyp: &Path,
    reference: &Path,
    orders: usize,
    smooth: &str,
    pair: &str,
    report: Option<&Path>,
) -> Result<Outcome> {
    let cfg = BleuConfig::uniform(orders, Smoothing::parse(smooth)?);
    cfg.validate()?;
    let rep = evaluate_corpus(hyp, reference, &cfg, pair)?;
    println!("BLEU = {:.4} (n = {})", rep.system_score, rep.n);
    if let Some(p) = report {
        let mut body = serde_json::to_string_pretty(&rep)?;
        body.push('\n');
        fs::write(p, body)?;
    }
    Ok(Outcome::Done)
}

fn cmd_pipeline(
    config: &Path,
    input: &Path,
    out: Option<PathBuf>,
    target: Option<PathBuf>,
    translations: Option<PathBuf>,
) -> Result<Outcome> {
    let cfg = pipeline::load_config(config)?;
    let opts = RunOptions {
        output_dir: out,
        target,
        translations,
    };
    let m = pipeline::run_pipeline(&cfg, input, &opts)?;
    eprintln!("processed {} of {} sentences", m.processed, m.n);
    Ok(if m.skipped.is_empty() {
        Outcome::Done
    } else {
        Outcome::Partial
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Parse {
            input,
            out,
            style,
            skeleton,
        } => cmd_parse(&input, out.as_deref(), style, skeleton),
        Command::Transfer {
            rules,
            input,
            out,
            emit_map,
        } => cmd_transfer(&rules, &input, &out, emit_map.as_deref()),
        Command::Mwe {
            input,
            out,
            lexicon,
            augmented,
            rules,
            kb,
            chart,
            lang,
        } => cmd_mwe(
            &input,
            &out,
            lexicon.as_deref(),
            augmented.as_deref(),
            rules.as_deref(),
            kb.as_deref(),
            chart.as_deref(),
            &lang,
        ),
        Command::Subword { action } => cmd_subword(action),
        Command::Braille {
            chart,
            input,
            out,
            stats,
        } => cmd_braille(&chart, &input, &out, stats),
        Command::Bleu {
            hyp,
            reference,
            orders,
            smooth,
            pair,
            report,
        } => cmd_bleu(&hyp, &reference, orders, &smooth, &pair, report.as_deref()),
        Command::Pipeline {
            config,
            input,
            out,
            target,
            translations,
        } => cmd_pipeline(&config, &input, out, target, translations),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(EXIT_PARTIAL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
