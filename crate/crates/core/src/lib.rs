//! Syntax-directed English to Indic translation with multiword expression
//! handling, sub-word segmentation, Braille output and BLEU scoring.

pub mod braille;
pub mod evalmetrics;
pub mod mwe;
pub mod pipeline;
pub mod subword;
pub mod transfer;
pub mod treebank;

/// Data files shipped with the crate.
pub mod bundled {
    pub const EN_HI_RULES: &str = include_str!("../data/rules/en-hi.starter.json");
    pub const EN_HI_KB: &str = include_str!("../data/kb/en-hi.tsv");
    pub const LIGHT_VERBS: &str = include_str!("../data/light_verbs.txt");
    pub const DEVANAGARI_TRANSLIT: &str = include_str!("../data/translit/devanagari.tsv");
    pub const DEVANAGARI_BRAILLE: &str = include_str!("../data/braille/devanagari.tsv");

    /// Absolute path of the crate's `data/` directory at build time.
    pub fn data_dir() -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
    }
}
