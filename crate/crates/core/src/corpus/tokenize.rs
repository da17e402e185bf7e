use super::pos::{Pos, PosTagger, RuleTagger};
use super::{Span, Token};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Space,
    Word,
    Punct(char),
}

fn classify(chars: &[(usize, char)], i: usize) -> Class {
    let c = chars[i].1;
    if c.is_whitespace() {
        return Class::Space;
    }
    if c.is_alphanumeric() || c == '_' {
        return Class::Word;
    }
    let prev = i.checked_sub(1).map(|p| chars[p].1);
    let next = chars.get(i + 1).map(|&(_, n)| n);
    let alnum = |o: Option<char>| o.is_some_and(char::is_alphanumeric);
    let digit = |o: Option<char>| o.is_some_and(|ch| ch.is_ascii_digit());
    let joined = match c {
        '\'' | '-' | '/' | '&' => alnum(prev) && alnum(next),
        '.' => alnum(prev) && alnum(next),
        ',' | ':' => digit(prev) && digit(next),
        '$' | '#' | '@' => alnum(next),
        '%' => digit(prev),
        _ => false,
    };
    if joined {
        Class::Word
    } else {
        Class::Punct(c)
    }
}

/// Raw token spans: maximal word runs and runs of one repeated punctuation
/// character.
fn split_spans(text: &str) -> Vec<Span> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut current: Option<(usize, Class)> = None;
    for i in 0..chars.len() {
        let class = classify(&chars, i);
        let pos = chars[i].0;
        match (current, class) {
            (Some((_, prev)), c) if prev == c && c != Class::Space => {}
            (cur, c) => {
                if let Some((start, prev)) = cur {
                    if prev != Class::Space {
                        spans.push(Span::new(start, pos));
                    }
                }
                current = Some((pos, c));
            }
        }
    }
    if let Some((start, class)) = current {
        if class != Class::Space {
            spans.push(Span::new(start, text.len()));
        }
    }
    spans
}

/// Tokenizes and tags with the built-in rule tagger.
pub fn tokenize(sentence_text: &str) -> Vec<Token> {
    tokenize_with(sentence_text, &RuleTagger::default())
}

/// Splits on whitespace and punctuation, lowercases surfaces and tags them.
/// Tokens without any alphanumeric character are always `PUNCT`, whatever the
/// tagger says.
pub fn tokenize_with(sentence_text: &str, tagger: &dyn PosTagger) -> Vec<Token> {
    let spans = split_spans(sentence_text);
    let surfaces: Vec<String> = spans.iter().map(|s| s.slice(sentence_text).to_lowercase()).collect();
    let refs: Vec<&str> = surfaces.iter().map(String::as_str).collect();
    let tags = tagger.tag(&refs);
    debug_assert_eq!(tags.len(), refs.len());
    spans
        .into_iter()
        .zip(surfaces)
        .zip(tags)
        .map(|((span, surface), pos)| {
            let pos = if surface.chars().any(char::is_alphanumeric) { pos } else { Pos::Punct };
            Token { surface, pos, span }
        })
        .collect()
}

/// Number of non-punctuation tokens.
pub fn count_words(text: &str) -> usize {
    split_spans(text).into_iter().filter(|s| s.slice(text).chars().any(char::is_alphanumeric)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(text: &str) -> Vec<(String, Pos)> {
        tokenize(text).into_iter().map(|t| (t.surface, t.pos)).collect()
    }

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn tagged_example() {
        use Pos::*;
        let expected: Vec<(String, Pos)> = [("i", Pron), ("bought", Verb), ("it", Pron), (".", Punct)]
            .iter()
            .map(|&(s, p)| (s.to_string(), p))
            .collect();
        assert_eq!(pairs("i bought it."), expected);
    }

    #[test]
    fn standalone_so_is_conj() {
        assert_eq!(pairs("so"), vec![("so".to_string(), Pos::Conj)]);
    }

    #[test]
    fn punctuation_splitting() {
        assert_eq!(
            surfaces("they had a $5 off the price, so i bought it."),
            vec!["they", "had", "a", "$5", "off", "the", "price", ",", "so", "i", "bought", "it", "."]
        );
        assert_eq!(surfaces("wait...what?!"), vec!["wait", "...", "what", "?", "!"]);
        assert_eq!(surfaces("don't re-read 1,000 items"), vec!["don't", "re-read", "1,000", "items"]);
        assert_eq!(surfaces("price,so"), vec!["price", ",", "so"]);
        assert_eq!(surfaces("\"Hello\""), vec!["\"", "hello", "\""]);
    }

    #[test]
    fn spans_slice_the_input() {
        let text = "It's  A test, ok?";
        for t in tokenize(text) {
            assert_eq!(t.span.slice(text).to_lowercase(), t.surface);
        }
    }

    #[test]
    fn normalized_reconstruction() {
        let text = "they had a $5 off the price , so i bought it .";
        let toks = tokenize(text);
        let mut out = String::new();
        for t in &toks {
            if !out.is_empty() && !t.is_punct() {
                out.push(' ');
            }
            out.push_str(&t.surface);
        }
        assert_eq!(out, "they had a $5 off the price, so i bought it.");
    }

    #[test]
    fn word_count_ignores_punct() {
        assert_eq!(count_words("they had a $5 off the price"), 7);
        assert_eq!(count_words("what happened?"), 2);
        assert_eq!(count_words("..."), 0);
    }
}
