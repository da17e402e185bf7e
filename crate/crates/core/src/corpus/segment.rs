use super::Span;

const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "vs.", "etc.", "e.g.", "i.e.", "inc.", "ltd.", "co.",
    "mt.", "approx.", "dept.", "est.", "fig.",
];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']')
}

/// Splits an utterance into sentence spans. A boundary follows a run of
/// `.`, `!` or `?` (plus any closing quotes or brackets) when the next
/// character is whitespace or the end of text, except after a listed
/// abbreviation. Spans are trimmed, ordered and cover all non-whitespace
/// content.
pub fn split_sentences(text: &str) -> Vec<Span> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut last_content_end = 0;
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if start.is_none() {
            start = Some(pos);
        }
        if !is_terminator(c) {
            last_content_end = pos + c.len_utf8();
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && is_terminator(chars[j].1) {
            j += 1;
        }
        let run_len = j - i;
        while j < chars.len() && is_closer(chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(p, _)| p);
        last_content_end = end;
        let at_gap = j == chars.len() || chars[j].1.is_whitespace();
        let abbreviation = run_len == 1 && c == '.' && ends_with_abbreviation(&text[..pos + 1]);
        if at_gap && !abbreviation {
            if let Some(s) = start.take() {
                spans.push(Span::new(s, end));
            }
        }
        i = j;
    }
    if let Some(s) = start {
        spans.push(Span::new(s, last_content_end));
    }
    spans
}

fn ends_with_abbreviation(prefix: &str) -> bool {
    let word_start =
        prefix.rfind(char::is_whitespace).map_or(0, |p| p + prefix[p..].chars().next().map_or(1, char::len_utf8));
    let word = prefix[word_start..].trim_start_matches(['(', '"', '\'', '[']);
    ABBREVIATIONS.iter().any(|a| word.eq_ignore_ascii_case(a))
}
