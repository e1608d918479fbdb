use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn fixture(name: &str) -> PathBuf {
    core_dir().join("tests/fixtures").join(name)
}

fn data(name: &str) -> PathBuf {
    core_dir().join("data").join(name)
}

fn bharti(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bharti"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&bharti(&[&"frobnicate"])), 1);
    assert_eq!(code(&bharti(&[])), 1);
    assert_eq!(code(&bharti(&[&"bleu", &"--hyp", &"x"])), 1);
}

#[test]
fn help_and_version_exit_zero() {
    let help = bharti(&[&"--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("pipeline"));
    assert_eq!(code(&bharti(&[&"--version"])), 0);
}

#[test]
fn missing_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = bharti(&[&"parse", &"--in", &dir.path().join("nope.txt")]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn parse_normalizes_and_reports_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    let o = bharti(&[
        &"parse",
        &"--in",
        &fixture("treebank_sample.txt"),
        &"--out",
        &out,
        &"--style",
        &"round",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        fs::read_to_string(fixture("treebank_sample.txt")).unwrap()
    );

    let o = bharti(&[
        &"parse",
        &"--in",
        &fixture("corpus_100_corrupt.txt"),
        &"--out",
        &out,
        &"--skeleton",
    ]);
    assert_eq!(code(&o), 3);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 99);
    assert!(text.lines().all(|l| l.starts_with("[S ")));
}

#[test]
fn transfer_writes_maps() {
    let dir = tempfile::tempdir().unwrap();
    let (out, map) = (dir.path().join("t.txt"), dir.path().join("map.jsonl"));
    let o = bharti(&[
        &"transfer",
        &"--rules",
        &data("rules/en-hi.starter.json"),
        &"--in",
        &fixture("worked_example/row2_source_tree.txt"),
        &"--out",
        &out,
        &"--emit-map",
        &map,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let tree = fs::read_to_string(&out).unwrap();
    let golden = fs::read_to_string(fixture("worked_example/row3_transfer_skeleton.txt")).unwrap();
    let skeleton = bharti_core::treebank::parse_tree(tree.trim()).unwrap().skeleton();
    assert_eq!(skeleton, golden.trim());
    let rec: serde_json::Value =
        serde_json::from_str(fs::read_to_string(&map).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(rec["sentence_index"], 0);
    assert_eq!(rec["applied_rules"][0]["rule"], "kavita-sharma-example");
    assert!(!rec["address_map"].as_array().unwrap().is_empty());
}

#[test]
fn mwe_spans_and_augmented_trees() {
    let dir = tempfile::tempdir().unwrap();
    let (spans, aug) = (dir.path().join("spans.jsonl"), dir.path().join("aug.txt"));
    let o = bharti(&[
        &"mwe",
        &"--in",
        &fixture("worked_example/row2_source_tree.txt"),
        &"--out",
        &spans,
        &"--augmented",
        &aug,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&spans).unwrap();
    for s in ["Kavita Sharma", "booked the ticket", "morning flight"] {
        assert!(text.contains(s), "{s} missing from {text}");
    }
    let golden = fs::read_to_string(fixture("worked_example/row4_augmented_tree.txt")).unwrap();
    assert_eq!(fs::read_to_string(&aug).unwrap().trim(), golden.trim());
}

#[test]
fn subword_train_apply_decode() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.bpe");
    let text = dir.path().join("text.txt");
    fs::write(&text, "low low lowest newer newest\nकविता कविता शर्मा\n").unwrap();
    assert_eq!(
        code(&bharti(&[
            &"subword",
            &"train",
            &"--in",
            &text,
            &"--model",
            &model,
            &"--merges",
            &"20"
        ])),
        0
    );
    assert!(fs::read_to_string(&model).unwrap().starts_with("bpe v1\n"));

    let (enc, dec) = (dir.path().join("enc.txt"), dir.path().join("dec.txt"));
    assert_eq!(
        code(&bharti(&[
            &"subword", &"apply", &"--model", &model, &"--in", &text, &"--out", &enc
        ])),
        0
    );
    assert!(fs::read_to_string(&enc).unwrap().contains("@@"));
    assert_eq!(
        code(&bharti(&[&"subword", &"decode", &"--in", &enc, &"--out", &dec])),
        0
    );
    assert_eq!(fs::read_to_string(&dec).unwrap(), fs::read_to_string(&text).unwrap());

    fs::write(&model, "bpe v9\n").unwrap();
    assert_eq!(
        code(&bharti(&[
            &"subword", &"apply", &"--model", &model, &"--in", &text, &"--out", &enc
        ])),
        2
    );
}

#[test]
fn braille_with_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.txt");
    let o = bharti(&[
        &"braille",
        &"--chart",
        &data("braille/devanagari.tsv"),
        &"--in",
        &fixture("translations_100.txt"),
        &"--out",
        &out,
        &"--stats",
    ]);
    assert_eq!(code(&o), 0);
    let stats: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(stats["lines"], 100);
    assert_eq!(stats["unmapped"], 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text
        .lines()
        .flat_map(str::chars)
        .all(|c| ('\u{2800}'..='\u{283F}').contains(&c)));
}

#[test]
fn bleu_prints_score_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = bharti(&[
        &"bleu",
        &"--hyp",
        &fixture("bleu_ref_50.txt"),
        &"--ref",
        &fixture("bleu_ref_50.txt"),
        &"--orders",
        &"3",
        &"--report",
        &report,
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "BLEU = 1.0000 (n = 50)");
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["n"], 50);
    assert_eq!(rep["language_pair"], "en-hi");

    // the shortest reference has three tokens, so no 4-gram can match
    let o = bharti(&[
        &"bleu",
        &"--hyp",
        &fixture("bleu_ref_50.txt"),
        &"--ref",
        &fixture("bleu_ref_50.txt"),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "BLEU = 0.9200 (n = 50)");

    let o = bharti(&[
        &"bleu",
        &"--hyp",
        &fixture("bleu_hyp_50.txt"),
        &"--ref",
        &fixture("corpus_100.txt"),
    ]);
    assert_eq!(code(&o), 2);
    let o = bharti(&[
        &"bleu",
        &"--hyp",
        &fixture("bleu_hyp_50.txt"),
        &"--ref",
        &fixture("bleu_ref_50.txt"),
        &"--smooth",
        &"bogus",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn pipeline_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let config = data("en-hi.pipeline.json");
    let ok = dir.path().join("ok");
    let o = bharti(&[
        &"pipeline",
        &"--config",
        &config,
        &"--in",
        &fixture("worked_example/row2_source_tree.txt"),
        &"--out",
        &ok,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(ok.join("manifest.json").exists());

    let bad = dir.path().join("bad");
    let o = bharti(&[
        &"pipeline",
        &"--config",
        &config,
        &"--in",
        &fixture("corpus_100_corrupt.txt"),
        &"--out",
        &bad,
    ]);
    assert_eq!(code(&o), 3);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(bad.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["processed"], 99);
    assert_eq!(m["skipped"][0]["line"], 37);

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"mode\": \"mwe\"").unwrap();
    let o = bharti(&[
        &"pipeline",
        &"--config",
        &broken,
        &"--in",
        &fixture("corpus_100.txt"),
        &"--out",
        &bad,
    ]);
    assert_eq!(code(&o), 2);
}
