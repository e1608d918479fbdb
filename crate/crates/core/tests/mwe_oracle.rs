mod common;

use std::collections::HashSet;

use bharti_core::bundled;
use bharti_core::mwe::{
    augment, recognize, KnowledgeBase, LightVerbLexicon, MweError, MweKind, SpanResolution, TranslitChart,
};
use bharti_core::transfer::{transfer, RuleSet, TransferResult};
use bharti_core::treebank::{NodeAddress, ParseTree};
use common::mwe_oracle as oracle;

fn lexicon() -> LightVerbLexicon {
    LightVerbLexicon::parse(bundled::LIGHT_VERBS)
}

#[test]
fn detector_matches_oracle_on_synthetic_trees() {
    let lex = lexicon();
    let mut r = common::rng(21);
    let mut kinds = HashSet::new();
    for _ in 0..200 {
        let t = common::sentence_tree(&mut r);
        let got: Vec<_> = recognize(&t, &lex).into_iter().map(|s| (s.kind, s.leaves)).collect();
        let want = oracle(&t);
        assert_eq!(got, want, "tree {t}");
        kinds.extend(got.iter().map(|g| g.0));
    }
    assert_eq!(kinds.len(), 3, "every kind should occur in the sample");
}

#[test]
fn spans_never_overlap_and_surface_matches() {
    let lex = lexicon();
    let mut r = common::rng(22);
    for _ in 0..300 {
        let t = common::sentence_tree(&mut r);
        let spans = recognize(&t, &lex);
        let mut seen = HashSet::new();
        for s in &spans {
            for a in &s.leaves {
                assert!(seen.insert(a.clone()), "overlap in {t}");
            }
            let words: Vec<&str> = s.leaves.iter().map(|a| t.get(a).unwrap().text().unwrap()).collect();
            assert_eq!(words.join(" "), s.surface);
        }
    }
}

fn resources() -> (RuleSet, KnowledgeBase, TranslitChart) {
    (
        RuleSet::from_json(bundled::EN_HI_RULES).unwrap(),
        KnowledgeBase::parse(bundled::EN_HI_KB).unwrap(),
        TranslitChart::parse(bundled::DEVANAGARI_TRANSLIT).unwrap(),
    )
}

#[test]
fn unknown_name_is_transliterated() {
    let (rules, kb, chart) = resources();
    let t: ParseTree = "[S [NP [NNP Narendra] [NNP Modi]] [VP [VBD visited] [NP [NNP Agra]]] [. .]]"
        .parse()
        .unwrap();
    let spans = recognize(&t, &lexicon());
    assert_eq!(spans.len(), 1);
    assert!(kb.lookup(&spans[0], "hi").is_none());
    let moved = transfer(&t, &rules).unwrap();
    let out = augment(&moved, &spans, &kb, &chart, "hi").unwrap();
    assert_eq!(out.outcomes[0].resolution, SpanResolution::Transliterated);
    assert_eq!(
        out.tree.to_string(),
        "[S [NP [NNP नरेन्द्रा] [NNP मोदी]] [VP [NP [NNP Agra]] [VBD visited]] [. .]]"
    );
}

#[test]
fn compound_noun_from_kb_per_word() {
    let (rules, kb, chart) = resources();
    let t: ParseTree = "[S [NP [PRP she]] [VP [VBD liked] [NP [DT the] [NN banana] [NN shake]]]]"
        .parse()
        .unwrap();
    let spans = recognize(&t, &lexicon());
    let out = augment(&transfer(&t, &rules).unwrap(), &spans, &kb, &chart, "hi").unwrap();
    assert_eq!(out.tree.sentence(), "she the बनाना शेक liked");
}

#[test]
fn missing_light_verb_is_left_alone() {
    let (rules, kb, chart) = resources();
    let t: ParseTree = "[S [NP [PRP he]] [VP [VBD made] [NP [DT a] [NN cake]]]]"
        .parse()
        .unwrap();
    let spans = recognize(&t, &lexicon());
    assert_eq!(spans[0].kind, MweKind::LightVerb);
    let moved = transfer(&t, &rules).unwrap();
    let out = augment(&moved, &spans, &kb, &chart, "hi").unwrap();
    assert_eq!(out.tree, moved.tree);
    assert_eq!(out.outcomes[0].resolution, SpanResolution::Untranslated);
}

#[test]
fn light_verb_without_aux_slot_joins_all_words() {
    let (rules, kb, chart) = resources();
    let t: ParseTree = "[S [NP [PRP he]] [VP [VBD took] [NP [DT a] [NN walk]]]]"
        .parse()
        .unwrap();
    let spans = recognize(&t, &lexicon());
    let out = augment(&transfer(&t, &rules).unwrap(), &spans, &kb, &chart, "hi").unwrap();
    assert_eq!(out.tree.to_string(), "[S [NP [PRP he]] [VP [NP] [VBD सैर_की]]]");
}

#[test]
fn dropped_span_leaf_is_an_error() {
    let (_, kb, chart) = resources();
    let t: ParseTree = "[NP [NNP Kavita] [NNP Sharma]]".parse().unwrap();
    let spans = recognize(&t, &lexicon());
    let mut moved = TransferResult::identity(t);
    moved.address_map.remove(&NodeAddress::new(vec![1]));
    assert!(matches!(
        augment(&moved, &spans, &kb, &chart, "hi"),
        Err(MweError::UnmappedAddress(a)) if a == NodeAddress::new(vec![1])
    ));
}

#[test]
fn kb_is_per_language() {
    let (rules, kb, chart) = resources();
    let t: ParseTree = "[NP [NNP Kavita] [NNP Sharma]]".parse().unwrap();
    let spans = recognize(&t, &lexicon());
    let moved = transfer(&t, &rules).unwrap();
    let hi = augment(&moved, &spans, &kb, &chart, "hi").unwrap();
    let gu = augment(&moved, &spans, &kb, &chart, "gu").unwrap();
    assert_eq!(hi.outcomes[0].resolution, SpanResolution::KnowledgeBase);
    assert_eq!(gu.outcomes[0].resolution, SpanResolution::Transliterated);
    assert_eq!(hi.tree.sentence(), gu.tree.sentence());
}
