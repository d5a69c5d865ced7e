//! Sentence segmentation and tokenization.
//!
//! This stage establishes the proper-time coordinate `tau`: the index of a
//! sentence along the stream. Every rate in the scoring model (occurrence
//! frequency, coherence length, decay) is measured against it.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::vec::Vec;

/// A named input document. Bytes are decoded lossily; invalid UTF-8 never
/// aborts ingestion.
#[derive(Debug, Clone)]
pub struct RawDocument {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl RawDocument {
    pub fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        RawDocument {
            name: name.into(),
            bytes: bytes.into(),
        }
    }

    pub fn from_text(name: impl Into<String>, text: &str) -> Self {
        RawDocument::new(name, text.as_bytes().to_vec())
    }

    /// Decoded text; borrows when the bytes are already valid UTF-8.
    pub fn text(&self) -> Cow<'_, str> {
        String::from_utf8_lossy(&self.bytes)
    }
}

/// A normalized word unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// The character run as it appeared in the text.
    pub surface: String,
    /// Lowercased form with leading/trailing punctuation stripped. Interior
    /// hyphens and apostrophes are preserved. Never empty.
    pub norm: String,
    /// Count of alphanumeric characters in `norm`.
    pub char_count: u32,
    /// Count of uppercase letters in `surface`.
    pub capital_count: u32,
}

/// One sentence at stream position `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tau: u32,
    pub tokens: Vec<Token>,
}

/// Sentence terminators. `?`/`!` always end a sentence when followed by
/// whitespace; `.` is suppressed after known abbreviations, dotted
/// abbreviations (e.g. "H.M.S.") and single-character initials.
const TERMINATORS: [char; 3] = ['.', '!', '?'];

/// Closing quotes/brackets that may trail a terminator without breaking it.
const CLOSERS: [char; 8] = ['"', '\'', '\u{201d}', '\u{2019}', ')', '\u{00bb}', ']', '}'];

/// Common abbreviations that do not terminate a sentence.
const ABBREVIATIONS: [&str; 29] = [
    "mr", "mrs", "ms", "dr", "st", "prof", "rev", "hon", "capt", "col", "gen", "lt", "sgt", "jr",
    "sr", "messrs", "mme", "mlle", "vs", "etc", "viz", "cf", "vol", "no", "ch", "pp", "ed", "fig",
    "sec",
];

fn is_closer(c: char) -> bool {
    CLOSERS.contains(&c)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Iterator that scans the decoded text once and yields sentences in `tau`
/// order. Only the current sentence's tokens are materialized, so additional
/// memory stays bounded by the longest sentence regardless of document
/// length (the text itself is borrowed when the bytes are valid UTF-8).
pub struct SentenceStream<'a> {
    text: Cow<'a, str>,
    cursor: usize,
    tau: u32,
}

impl<'a> Iterator for SentenceStream<'a> {
    type Item = Sentence;

    fn next(&mut self) -> Option<Sentence> {
        loop {
            let rest = &self.text[self.cursor..];
            if rest.is_empty() {
                return None;
            }
            let (raw, remainder) = take_sentence(rest);
            self.cursor = self.text.len() - remainder.len();
            let tokens = tokenize(raw);
            if tokens.is_empty() {
                // Dropped without consuming a tau value.
                continue;
            }
            let sentence = Sentence {
                tau: self.tau,
                tokens,
            };
            self.tau += 1;
            return Some(sentence);
        }
    }
}

/// Split off the next raw sentence from `text`.
///
/// Returns the sentence text (terminator and trailing closers included) and
/// the remainder. When no terminator remains, the whole tail is one sentence.
fn take_sentence(text: &str) -> (&str, &str) {
    let mut iter = text.char_indices().peekable();
    while let Some((idx, c)) = iter.next() {
        if !TERMINATORS.contains(&c) {
            continue;
        }
        // Consume trailing closing quotes/brackets.
        let mut end = idx + c.len_utf8();
        while let Some(&(j, cj)) = iter.peek() {
            if is_closer(cj) {
                end = j + cj.len_utf8();
                iter.next();
            } else {
                break;
            }
        }
        // A terminator counts only before whitespace or end of input.
        let followed_ok = match text[end..].chars().next() {
            None => true,
            Some(next) => next.is_whitespace(),
        };
        if !followed_ok {
            continue;
        }
        if c == '.' && abbreviation_before(text, idx) {
            continue;
        }
        return (&text[..end], &text[end..]);
    }
    (text, "")
}

/// True when the word chunk immediately before the period at `dot_idx` is an
/// abbreviation: a member of the built-in list, a dotted form like "h.m.s",
/// or a single-character initial.
fn abbreviation_before(text: &str, dot_idx: usize) -> bool {
    let before = &text[..dot_idx];
    let chunk_start = before
        .rfind(|c: char| c.is_whitespace())
        .map(|p| p + 1)
        .unwrap_or(0);
    let chunk = before[chunk_start..].trim();
    let stripped = chunk.trim_matches(|c: char| matches!(c, '"' | '\'' | '(' | ')' | '[' | ']' | '{' | '}'));
    if stripped.contains('.') {
        return true;
    }
    if stripped.chars().count() == 1 && !stripped.is_empty() {
        return true;
    }
    let mut lower = String::with_capacity(stripped.len());
    for c in stripped.chars() {
        lower.extend(c.to_lowercase());
    }
    ABBREVIATIONS.contains(&lower.as_str())
}

/// Split sentence text into normalized tokens.
///
/// Whitespace separates candidate runs; em/en dashes and `--` runs also act
/// as separators. Leading and trailing punctuation is stripped, interior
/// hyphens and apostrophes are preserved, and the normalized form is
/// lowercased. Runs with no alphanumeric content produce no token.
pub fn tokenize(sentence_text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in sentence_text.split_whitespace() {
        for piece in split_dashes(chunk) {
            if let Some(token) = make_token(piece) {
                out.push(token);
            }
        }
    }
    out
}

/// Split a whitespace-delimited chunk on em/en dashes and runs of two or
/// more hyphens, which join words without surrounding spaces in print.
fn split_dashes(chunk: &str) -> Vec<&str> {
    let mut pieces = Vec::new();
    let mut start = 0;
    let mut chars = chunk.char_indices().peekable();
    while let Some((idx, c)) = chars.next() {
        let sep_len = if c == '\u{2014}' || c == '\u{2013}' {
            Some(c.len_utf8())
        } else if c == '-' && matches!(chars.peek(), Some(&(_, '-'))) {
            // Consume the whole hyphen run.
            let mut len = 1;
            while let Some(&(_, '-')) = chars.peek() {
                chars.next();
                len += 1;
            }
            Some(len)
        } else {
            None
        };
        if let Some(len) = sep_len {
            if idx > start {
                pieces.push(&chunk[start..idx]);
            }
            start = idx + len;
        }
    }
    if start < chunk.len() {
        pieces.push(&chunk[start..]);
    }
    pieces
}

fn make_token(piece: &str) -> Option<Token> {
    let core: &str = piece.trim_matches(|c: char| !is_word_char(c));
    if core.is_empty() {
        return None;
    }
    let mut norm = String::with_capacity(core.len());
    for c in core.chars() {
        norm.extend(c.to_lowercase());
    }
    let char_count = norm.chars().filter(|c| c.is_alphanumeric()).count() as u32;
    let capital_count = core.chars().filter(|c| c.is_uppercase()).count() as u32;
    Some(Token {
        surface: piece.into(),
        norm,
        char_count,
        capital_count,
    })
}

/// Segment a document into sentences, batch form.
pub fn segment_sentences(doc: &RawDocument) -> Vec<Sentence> {
    stream_iter(doc).collect()
}

/// Stream sentences one at a time in `tau` order with bounded memory.
pub fn stream_iter(doc: &RawDocument) -> SentenceStream<'_> {
    SentenceStream {
        text: doc.text(),
        cursor: 0,
        tau: 0,
    }
}
