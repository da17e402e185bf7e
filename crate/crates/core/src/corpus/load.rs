use super::{Conversation, CorpusError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    /// One conversation per row: `topic, turn_0, turn_1, ...`.
    CsvColumnsPerTurn,
    /// One `{"id", "topic", "turns"}` object per line.
    JsonlConversations,
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::CsvColumnsPerTurn => "csv",
            CorpusFormat::JsonlConversations => "jsonl",
        })
    }
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" | "csv_columns_per_turn" => Ok(CorpusFormat::CsvColumnsPerTurn),
            "jsonl" | "jsonl_conversations" => Ok(CorpusFormat::JsonlConversations),
            other => Err(format!("unknown corpus format `{other}` (expected csv or jsonl)")),
        }
    }
}

/// Outcome of a load: conversations kept, conversations dropped for having no
/// usable turn, and per-record parse errors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub kept: usize,
    pub dropped: usize,
    pub errors: Vec<String>,
}

#[derive(Deserialize)]
struct JsonlRecord {
    id: String,
    #[serde(default)]
    topic: Option<String>,
    turns: Vec<String>,
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<(Vec<Conversation>, LoadReport), CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    let (convs, report, total) = match format {
        CorpusFormat::JsonlConversations => {
            let text = String::from_utf8_lossy(&bytes);
            parse_jsonl_inner(&text)
        }
        CorpusFormat::CsvColumnsPerTurn => parse_csv(&bytes),
    };
    if total > 0 && report.errors.len() * 2 > total {
        return Err(CorpusError::Format { path: path.to_path_buf(), format, failed: report.errors.len(), total });
    }
    Ok((convs, report))
}

/// Parses JSONL conversations from memory. Never fails; bad lines land in
/// the report.
pub fn parse_jsonl(text: &str) -> (Vec<Conversation>, LoadReport) {
    let (convs, report, _) = parse_jsonl_inner(text);
    (convs, report)
}

fn parse_jsonl_inner(text: &str) -> (Vec<Conversation>, LoadReport, usize) {
    let mut report = LoadReport::default();
    let mut convs = Vec::new();
    let mut seen = BTreeSet::new();
    let mut total = 0;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        let record: JsonlRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                report.errors.push(format!("line {}: {e}", lineno + 1));
                continue;
            }
        };
        if !seen.insert(record.id.clone()) {
            report.errors.push(format!("line {}: duplicate conversation id `{}`", lineno + 1, record.id));
            continue;
        }
        match Conversation::from_raw(record.id, record.topic.as_deref(), &record.turns) {
            Some(c) => convs.push(c),
            None => report.dropped += 1,
        }
    }
    report.kept = convs.len();
    (convs, report, total)
}

fn parse_csv(bytes: &[u8]) -> (Vec<Conversation>, LoadReport, usize) {
    let mut report = LoadReport::default();
    let mut convs = Vec::new();
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(bytes);
    let mut total = 0;
    for (rowno, record) in reader.records().enumerate() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                total += 1;
                report.errors.push(format!("row {}: {e}", rowno + 1));
                continue;
            }
        };
        let first = record.get(0).unwrap_or("").trim();
        if rowno == 0 && first.eq_ignore_ascii_case("topic") {
            continue;
        }
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        total += 1;
        let turns: Vec<&str> = record.iter().skip(1).collect();
        let topic = Some(first).filter(|t| !t.is_empty());
        match Conversation::from_raw(format!("row{}", rowno + 1), topic, &turns) {
            Some(c) => convs.push(c),
            None => report.dropped += 1,
        }
    }
    report.kept = convs.len();
    (convs, report, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn jsonl_two_conversations() {
        let f = write_tmp(
            r#"{"id": "a", "topic": "music", "turns": ["hi", "hello"]}
{"id": "b", "topic": null, "turns": ["it's a great album.", "however, it's probably not their best."]}
"#,
        );
        let (convs, report) = load_corpus(f.path(), CorpusFormat::JsonlConversations).unwrap();
        assert_eq!(convs.len(), 2);
        assert_eq!(report, LoadReport { kept: 2, dropped: 0, errors: vec![] });
        assert_eq!(convs[1].topic, None);
    }

    #[test]
    fn jsonl_record_without_turn_text_is_dropped() {
        let f = write_tmp(
            r#"{"id": "a", "turns": ["hi"]}
{"id": "b", "turns": ["", "   "]}
{"id": "c", "turns": ["bye"]}
"#,
        );
        let (convs, report) = load_corpus(f.path(), CorpusFormat::JsonlConversations).unwrap();
        assert_eq!(convs.len(), 2);
        assert_eq!(report.dropped, 1);
        assert_eq!(report.kept, 2);
    }

    #[test]
    fn malformed_records_are_collected_until_majority() {
        let f = write_tmp("{\"id\": \"a\", \"turns\": [\"hi\"]}\nnot json\n{\"id\": \"b\", \"turns\": [\"x\"]}\n");
        let (convs, report) = load_corpus(f.path(), CorpusFormat::JsonlConversations).unwrap();
        assert_eq!(convs.len(), 2);
        assert_eq!(report.errors.len(), 1);
        assert!(report.errors[0].starts_with("line 2"));

        let f = write_tmp("garbage\n{oops\n{\"id\": \"b\", \"turns\": [\"x\"]}\n");
        let err = load_corpus(f.path(), CorpusFormat::JsonlConversations).unwrap_err();
        assert!(matches!(err, CorpusError::Format { failed: 2, total: 3, .. }));
    }

    #[test]
    fn duplicate_ids_are_rejected_per_record() {
        let f = write_tmp("{\"id\": \"a\", \"turns\": [\"hi\"]}\n{\"id\": \"a\", \"turns\": [\"yo\"]}\n{\"id\": \"b\", \"turns\": [\"x\"]}\n");
        let (convs, report) = load_corpus(f.path(), CorpusFormat::JsonlConversations).unwrap();
        assert_eq!(convs.len(), 2);
        assert!(report.errors[0].contains("duplicate"));
    }

    #[test]
    fn csv_rows_with_trailing_empty_columns() {
        let f = write_tmp(
            "topic,turn_0,turn_1,turn_2\nmusic,I love Queen.,\"Me too, but mostly their early stuff.\",\nsports,,,\n",
        );
        let (convs, report) = load_corpus(f.path(), CorpusFormat::CsvColumnsPerTurn).unwrap();
        assert_eq!(convs.len(), 1);
        assert_eq!(report.dropped, 1);
        assert_eq!(convs[0].id, "row2");
        assert_eq!(convs[0].turns.len(), 2);
        assert_eq!(convs[0].turns[1].text, "me too, but mostly their early stuff.");
    }

    #[test]
    fn unreadable_path_names_the_path() {
        let err = load_corpus(Path::new("/definitely/not/here.jsonl"), CorpusFormat::JsonlConversations).unwrap_err();
        assert!(err.to_string().contains("/definitely/not/here.jsonl"));
    }

    #[test]
    fn loading_is_deterministic() {
        let f = write_tmp("{\"id\": \"a\", \"topic\": \"Music\", \"turns\": [\"It\u{2019}s fine.\"]}\n");
        let a = load_corpus(f.path(), CorpusFormat::JsonlConversations).unwrap();
        let b = load_corpus(f.path(), CorpusFormat::JsonlConversations).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0[0].turns[0].text, "it's fine.");
    }
}
