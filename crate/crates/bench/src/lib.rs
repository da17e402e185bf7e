//! Synthetic corpora for benchmarks.

use discomine::{Conversation, RelationPair};

const CLAUSES: &[&str] = &[
    "i watched the game last night",
    "my brother bought a new car",
    "we went to the beach on sunday",
    "she likes to read books about history",
    "the movie was longer than i expected",
    "they played music at the party",
    "he cooked dinner for the whole family",
    "i tried the new coffee shop downtown",
];

const JOINS: &[&str] = &["so", "but", "because", "and then", "however", "after", "if", "or"];

/// Deterministic corpus of `n` conversations, each with `turns` turns.
pub fn synthetic_corpus(n: usize, turns: usize) -> Vec<Conversation> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = |m: usize| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % m as u64) as usize
    };
    (0..n)
        .map(|i| {
            let texts: Vec<String> = (0..turns)
                .map(|_| {
                    let a = CLAUSES[next(CLAUSES.len())];
                    let b = CLAUSES[next(CLAUSES.len())];
                    match next(3) {
                        0 => format!("{a}, {} {b}.", JOINS[next(JOINS.len())]),
                        1 => format!("{a}. {} {b}.", JOINS[next(JOINS.len())]),
                        _ => format!("{a}."),
                    }
                })
                .collect();
            Conversation::from_raw(format!("bench{i}"), None, &texts).expect("valid conversation")
        })
        .collect()
}

/// Pairs mined from a synthetic corpus with the built-in lexicon.
pub fn synthetic_pairs(n: usize) -> Vec<RelationPair> {
    let convs = synthetic_corpus(n, 8);
    discomine::mine_corpus(&convs, &discomine::builtin_lexicon(), &Default::default()).expect("mining succeeds").0
}
