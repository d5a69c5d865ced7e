//! The fractionating column: multi-scale n-gram extraction and the
//! occurrence ledger.
//!
//! Each sentence is split into parallel streams of n-grams (n = 1..n_max,
//! windows never cross a sentence boundary). The ledger records, per
//! fragment, its total occurrence count and every sentence position, plus
//! the stream totals needed to turn counts into rates.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::intent::IntentConfig;
use crate::math;
use crate::stream::Sentence;

/// A fragment at scale `n`: the normalized tokens joined by single spaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ngram {
    pub n: usize,
    pub key: String,
    /// Alphanumeric characters across the fragment's tokens.
    pub letters: u32,
    /// Uppercase letters observed in the source window.
    pub capitals: u32,
}

/// Occurrence history of one fragment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OccurrenceRecord {
    /// Total occurrences, intra-sentence repeats included.
    pub count: u64,
    /// Sentence index of every occurrence, non-decreasing.
    pub positions: Vec<u32>,
    /// Uppercase letters summed over all occurrences.
    pub capitals: u64,
}

impl OccurrenceRecord {
    /// Mean uppercase letters per occurrence.
    pub fn capitals_mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.capitals as f64 / self.count as f64
        }
    }
}

/// Per-scale occurrence maps plus stream totals.
#[derive(Debug, Clone, Default)]
pub struct OccurrenceLedger {
    scales: Vec<BTreeMap<String, OccurrenceRecord>>,
    sentence_total: u32,
    token_total: u64,
}

impl OccurrenceLedger {
    pub fn new(n_max: usize) -> Self {
        let mut scales = Vec::with_capacity(n_max);
        scales.resize(n_max, BTreeMap::new());
        OccurrenceLedger {
            scales,
            sentence_total: 0,
            token_total: 0,
        }
    }

    pub fn n_max(&self) -> usize {
        self.scales.len()
    }

    /// Number of sentences ingested.
    pub fn sentence_total(&self) -> u32 {
        self.sentence_total
    }

    /// Number of 1-gram tokens ingested (the stream length L).
    pub fn token_total(&self) -> u64 {
        self.token_total
    }

    pub fn record(&self, n: usize, key: &str) -> Option<&OccurrenceRecord> {
        self.scales.get(n - 1).and_then(|m| m.get(key))
    }

    /// Iterate records at scale `n` in key order.
    pub fn scale(&self, n: usize) -> impl Iterator<Item = (&String, &OccurrenceRecord)> {
        self.scales
            .get(n - 1)
            .into_iter()
            .flat_map(|m| m.iter())
    }

    pub fn distinct_at(&self, n: usize) -> usize {
        self.scales.get(n - 1).map(|m| m.len()).unwrap_or(0)
    }

    /// Fold a batch of extracted fragments into the ledger.
    ///
    /// Fragments must arrive in non-decreasing `tau` order relative to
    /// everything already ingested; stream totals update once per new
    /// sentence index.
    pub fn accumulate(&mut self, fragments: &[(Ngram, u32)]) -> Result<(), Error> {
        for (ngram, tau) in fragments {
            if self.sentence_total > 0 && *tau < self.sentence_total - 1 {
                return Err(Error::OutOfOrderTau {
                    expected_min: self.sentence_total - 1,
                    got: *tau,
                });
            }
            let rec = self.scales[ngram.n - 1]
                .entry(ngram.key.clone())
                .or_default();
            rec.count += 1;
            rec.positions.push(*tau);
            rec.capitals += ngram.capitals as u64;
            if ngram.n == 1 {
                self.token_total += 1;
            }
            if *tau >= self.sentence_total {
                self.sentence_total = *tau + 1;
            }
        }
        Ok(())
    }

    /// Extract and accumulate one sentence in a single step.
    pub fn ingest_sentence(&mut self, sentence: &Sentence) -> Result<(), Error> {
        let n_max = self.n_max();
        let fragments = extract_ngrams(sentence, n_max);
        self.accumulate(&fragments)
    }

    /// Occurrence frequency Φ(w) in occurrences per sentence.
    pub fn frequency(&self, n: usize, key: &str) -> Result<f64, Error> {
        if self.sentence_total == 0 {
            return Err(Error::EmptyLedger);
        }
        let count = self
            .record(n, key)
            .map(|r| r.count)
            .unwrap_or(0);
        Ok(count as f64 / self.sentence_total as f64)
    }

    /// Shannon entropy of the scale-`n` fragment distribution, in bits.
    pub fn shannon_entropy(&self, n: usize) -> Result<f64, Error> {
        let map = self.scales.get(n - 1).ok_or(Error::EmptyScale(n))?;
        if map.is_empty() {
            return Err(Error::EmptyScale(n));
        }
        let total: u64 = map.values().map(|r| r.count).sum();
        let total = total as f64;
        let mut s = 0.0;
        for rec in map.values() {
            let p = rec.count as f64 / total;
            s -= p * math::log2(p);
        }
        Ok(s)
    }

    /// 1-grams excluded from ranking eligibility: high-frequency spacers
    /// (occurrence ratio beyond `padding_ratio`) and words shorter than
    /// `min_word_len` characters.
    pub fn spacer_set(&self, cfg: &IntentConfig) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if self.sentence_total == 0 {
            return out;
        }
        for (key, rec) in self.scale(1) {
            let ratio = cfg.stream_ratio(rec.count);
            if ratio > cfg.padding_ratio || key.chars().count() < cfg.min_word_len {
                out.insert(key.clone());
            }
        }
        out
    }

    /// Snapshot as TSV: columns `n`, `key`, `count`, comma-separated
    /// positions. One row per fragment, scales ascending, keys sorted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str("n\tkey\tcount\tpositions\n");
        for n in 1..=self.n_max() {
            for (key, rec) in self.scale(n) {
                out.push_str(&alloc::format!("{n}\t{key}\t{}\t", rec.count));
                for (i, p) in rec.positions.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&alloc::format!("{p}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Emit every contiguous within-sentence window of n tokens, for each
/// n in 1..=n_max, in order. Sentences shorter than n emit nothing at
/// scale n.
pub fn extract_ngrams(sentence: &Sentence, n_max: usize) -> Vec<(Ngram, u32)> {
    let tokens = &sentence.tokens;
    let mut out = Vec::new();
    for n in 1..=n_max {
        if tokens.len() < n {
            break;
        }
        for window in tokens.windows(n) {
            let mut key = String::new();
            let mut letters = 0u32;
            let mut capitals = 0u32;
            for (i, t) in window.iter().enumerate() {
                if i > 0 {
                    key.push(' ');
                }
                key.push_str(&t.norm);
                letters += t.char_count;
                capitals += t.capital_count;
            }
            out.push((
                Ngram {
                    n,
                    key,
                    letters,
                    capitals,
                },
                sentence.tau,
            ));
        }
    }
    out
}

/// Alphanumeric character count of a stored key.
pub fn letters_in_key(key: &str) -> u32 {
    key.chars().filter(|c| c.is_alphanumeric()).count() as u32
}
