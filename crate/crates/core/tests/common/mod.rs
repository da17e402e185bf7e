#![allow(dead_code)]

pub mod metric_oracle;
pub mod oracle;

use discomine::corpus::{load_corpus, Conversation, CorpusFormat};
use std::path::PathBuf;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load_fixture(name: &str) -> Vec<Conversation> {
    let format =
        if name.ends_with(".csv") { CorpusFormat::CsvColumnsPerTurn } else { CorpusFormat::JsonlConversations };
    load_corpus(&fixture(name), format).expect("fixture loads").0
}
