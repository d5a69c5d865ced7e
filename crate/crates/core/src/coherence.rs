//! Ambient-vs-anomalous classification, coherence intervals and the
//! interval-by-interval episode unfolding.
//!
//! Ambient fragments are the repeated, evenly spread background that makes
//! good index keys; anomalous fragments are rare, costly or clustered and
//! signal focused intent. The boundary is the `ambient_ratio` on the
//! occurrence ratio Φ/Φ0; padding-regime fragments and spacers never appear
//! on either side.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fraction::{extract_ngrams, letters_in_key, OccurrenceLedger, OccurrenceRecord};
use crate::intent::{
    gap_statistics, is_bursty, running_score, scored_intentionality, GapStats, IntentConfig,
    WorkModel,
};
use crate::stream::Sentence;

/// Fragments whose first or last word is this short bind to a neighbour and
/// cannot anchor a ranked phrase.
const MIN_EDGE_CHARS: usize = 3;

/// One tile of the stream, `coherence_len` sentences long except possibly
/// the final remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoherenceInterval {
    pub index: usize,
    pub tau_start: u32,
    pub tau_end: u32,
}

/// Ambient context vs anomalous intent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Label {
    Ambient,
    Anomalous,
}

/// A scored, labelled fragment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifiedFragment {
    pub n: usize,
    pub key: String,
    pub label: Label,
    pub count: u64,
    /// Occurrence ratio Φ/Φ0 on the stream scale.
    pub ratio: f64,
    pub work: f64,
    pub static_score: f64,
    /// Accumulated running intentionality over all occurrences.
    pub running_score_sum: f64,
    /// Anomalous-gap flag; `None` below two occurrences.
    pub bursty: Option<bool>,
}

/// Ranked ambient and anomalous lists for one scale within one interval.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaleLists {
    pub n: usize,
    pub ambient: Vec<ClassifiedFragment>,
    pub anomalous: Vec<ClassifiedFragment>,
}

/// Per-interval fragment lists.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalLists {
    pub interval: CoherenceInterval,
    pub scales: Vec<ScaleLists>,
}

/// The full interval-by-interval selection of fragments.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpisodeUnfolding {
    pub intervals: Vec<IntervalLists>,
}

/// Tile `sentence_count` sentences into coherence intervals: all
/// full-length except possibly the last, no gaps, no overlap.
pub fn partition(sentence_count: u32, cfg: &IntentConfig) -> Vec<CoherenceInterval> {
    let len = cfg.coherence_len as u32;
    let mut out = Vec::new();
    let mut start = 0u32;
    let mut index = 0usize;
    while start < sentence_count {
        let end = (start + len - 1).min(sentence_count - 1);
        out.push(CoherenceInterval {
            index,
            tau_start: start,
            tau_end: end,
        });
        start = end + 1;
        index += 1;
    }
    out
}

/// Eligibility sets shared by every classification path.
pub(crate) struct FragmentFilter {
    /// The spacer set: high-frequency 1-grams or words below the minimum
    /// length.
    spacers: BTreeSet<String>,
    /// High-frequency spacers only (padding ratio exceeded).
    freq_spacers: BTreeSet<String>,
    /// The very highest-frequency spacers (a padding_ratio beyond padding
    /// itself); these cannot begin or end a ranked fragment.
    hyper_spacers: BTreeSet<String>,
}

impl FragmentFilter {
    pub(crate) fn build(ledger: &OccurrenceLedger, cfg: &IntentConfig) -> Self {
        let mut spacers = BTreeSet::new();
        let mut freq_spacers = BTreeSet::new();
        let mut hyper_spacers = BTreeSet::new();
        let hyper_cutoff = cfg.padding_ratio * cfg.padding_ratio;
        for (key, rec) in ledger.scale(1) {
            let ratio = cfg.stream_ratio(rec.count);
            if ratio > cfg.padding_ratio {
                freq_spacers.insert(key.clone());
                spacers.insert(key.clone());
            } else if key.chars().count() < cfg.min_word_len {
                spacers.insert(key.clone());
            }
            if ratio > hyper_cutoff {
                hyper_spacers.insert(key.clone());
            }
        }
        FragmentFilter {
            spacers,
            freq_spacers,
            hyper_spacers,
        }
    }

    /// Ranking eligibility. Padding-regime fragments are excluded at every
    /// scale; 1-grams must clear the spacer set; longer fragments must be
    /// anchored by substantive words.
    pub(crate) fn eligible(&self, n: usize, key: &str, count: u64, cfg: &IntentConfig) -> bool {
        if cfg.stream_ratio(count) > cfg.padding_ratio {
            return false;
        }
        if n == 1 {
            return !self.spacers.contains(key);
        }
        let first = key.split(' ').next().unwrap_or("");
        let last = key.rsplit(' ').next().unwrap_or("");
        if first.chars().count() < MIN_EDGE_CHARS || last.chars().count() < MIN_EDGE_CHARS {
            return false;
        }
        if self.hyper_spacers.contains(first) || self.hyper_spacers.contains(last) {
            return false;
        }
        if key.split(' ').all(|w| self.freq_spacers.contains(w)) {
            return false;
        }
        true
    }
}

/// Shared scoring context for one ledger: the configured model plus the
/// Φ0 rescaling that puts the occurrence ratio and the sigmoid knee on the
/// stream scale (`coherence_len` occurrences).
pub(crate) struct ScoreContext<'a> {
    pub(crate) cfg: &'a IntentConfig,
    pub(crate) model: &'a WorkModel,
    scaled: IntentConfig,
    sentence_total: u32,
}

impl<'a> ScoreContext<'a> {
    pub(crate) fn new(
        ledger: &OccurrenceLedger,
        cfg: &'a IntentConfig,
        model: &'a WorkModel,
    ) -> Self {
        let mut scaled = cfg.clone();
        scaled.phi0 = cfg.phi0_for_stream(ledger.sentence_total());
        ScoreContext {
            cfg,
            model,
            scaled,
            sentence_total: ledger.sentence_total().max(1),
        }
    }

    fn fragment(&self, n: usize, key: &str, rec: &OccurrenceRecord, label: Label) -> ClassifiedFragment {
        let work = self.model.cost(letters_in_key(key), rec.capitals_mean());
        let phi = rec.count as f64 / self.sentence_total as f64;
        let static_score = scored_intentionality(work, phi, &self.scaled).unwrap_or(0.0);
        let stats = gap_statistics(rec);
        let bursty = match &stats {
            GapStats::Measured { .. } => Some(is_bursty(&stats).unwrap_or(false)),
            GapStats::Insufficient { .. } => None,
        };
        ClassifiedFragment {
            n,
            key: key.into(),
            label,
            count: rec.count,
            ratio: self.cfg.stream_ratio(rec.count),
            work,
            static_score,
            running_score_sum: running_sum(&rec.positions, work, self.cfg),
            bursty,
        }
    }
}

/// Running-intentionality total over a full occurrence history.
fn running_sum(positions: &[u32], work: f64, cfg: &IntentConfig) -> f64 {
    let mut sum = 0.0;
    let mut last: Option<u32> = None;
    for &p in positions {
        sum += running_score(work, p, last, cfg).unwrap_or(0.0);
        last = Some(p);
    }
    sum
}

/// Order: static score descending, then higher work, then key.
pub(crate) fn rank_order(a: &ClassifiedFragment, b: &ClassifiedFragment) -> core::cmp::Ordering {
    b.static_score
        .partial_cmp(&a.static_score)
        .unwrap_or(core::cmp::Ordering::Equal)
        .then_with(|| {
            b.work
                .partial_cmp(&a.work)
                .unwrap_or(core::cmp::Ordering::Equal)
        })
        .then_with(|| a.key.cmp(&b.key))
}

/// Split every eligible fragment of the document into ambient vs anomalous.
///
/// Ambient means the occurrence ratio reaches `ambient_ratio`; everything
/// else eligible is anomalous (rare, clustered, or a long singleton).
/// Singletons below scale 3 are spurious and dropped. The returned list is
/// ordered by scale, then rank.
pub fn classify_document(
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
) -> Vec<ClassifiedFragment> {
    let filter = FragmentFilter::build(ledger, cfg);
    classify_with_filter(ledger, cfg, model, &filter)
}

pub(crate) fn classify_with_filter(
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
    filter: &FragmentFilter,
) -> Vec<ClassifiedFragment> {
    let ctx = ScoreContext::new(ledger, cfg, model);
    let mut out = Vec::new();
    for n in 1..=cfg.n_max.min(ledger.n_max()) {
        let mut scale_rows = Vec::new();
        for (key, rec) in ledger.scale(n) {
            if !filter.eligible(n, key, rec.count, cfg) {
                continue;
            }
            if rec.count == 1 {
                if n >= 3 {
                    scale_rows.push(ctx.fragment(n, key, rec, Label::Anomalous));
                }
                continue;
            }
            let label = if cfg.stream_ratio(rec.count) >= cfg.ambient_ratio {
                Label::Ambient
            } else {
                Label::Anomalous
            };
            scale_rows.push(ctx.fragment(n, key, rec, label));
        }
        scale_rows.sort_by(rank_order);
        out.extend(scale_rows);
    }
    out
}

/// Classify interval by interval: a fragment present in interval k is
/// ambient there when it also recurs in the neighbouring interval (the next
/// one; the previous for the final interval) with at least three occurrences
/// across the pair, i.e. it persists across the coherence boundary. A
/// single-interval document reduces to the document-level classification.
pub fn unfold_episode(
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
) -> EpisodeUnfolding {
    let intervals = partition(ledger.sentence_total(), cfg);
    if intervals.is_empty() {
        return EpisodeUnfolding::default();
    }
    let filter = FragmentFilter::build(ledger, cfg);
    let ctx = ScoreContext::new(ledger, cfg, model);
    let n_top = cfg.n_max.min(ledger.n_max());
    let parts = intervals.len();
    let clen = cfg.coherence_len as u32;

    if parts == 1 {
        let flat = classify_with_filter(ledger, cfg, model, &filter);
        let mut scales = Vec::new();
        for n in 1..=n_top {
            let ambient = flat
                .iter()
                .filter(|f| f.n == n && f.label == Label::Ambient)
                .cloned()
                .collect();
            let anomalous = flat
                .iter()
                .filter(|f| f.n == n && f.label == Label::Anomalous)
                .cloned()
                .collect();
            scales.push(ScaleLists {
                n,
                ambient,
                anomalous,
            });
        }
        return EpisodeUnfolding {
            intervals: alloc::vec![IntervalLists {
                interval: intervals[0],
                scales,
            }],
        };
    }

    // interval index -> scale index -> (ambient, anomalous)
    let mut buckets: Vec<Vec<(Vec<ClassifiedFragment>, Vec<ClassifiedFragment>)>> =
        (0..parts)
            .map(|_| (0..n_top).map(|_| (Vec::new(), Vec::new())).collect())
            .collect();

    for n in 1..=n_top {
        for (key, rec) in ledger.scale(n) {
            if !filter.eligible(n, key, rec.count, cfg) {
                continue;
            }
            // occurrences per interval, in interval order
            let mut per_interval: Vec<(usize, u64)> = Vec::new();
            for &p in &rec.positions {
                let k = (p / clen) as usize;
                match per_interval.last_mut() {
                    Some((last_k, c)) if *last_k == k => *c += 1,
                    _ => per_interval.push((k, 1)),
                }
            }
            let count_in = |k: usize| -> u64 {
                per_interval
                    .iter()
                    .find(|(i, _)| *i == k)
                    .map(|(_, c)| *c)
                    .unwrap_or(0)
            };
            for &(k, local) in &per_interval {
                let neighbour = if k + 1 < parts { k + 1 } else { k - 1 };
                let paired = count_in(neighbour);
                let label = if paired > 0 && local + paired >= 3 {
                    Label::Ambient
                } else {
                    Label::Anomalous
                };
                let frag = ctx.fragment(n, key, rec, label);
                let slot = &mut buckets[k][n - 1];
                match label {
                    Label::Ambient => slot.0.push(frag),
                    Label::Anomalous => slot.1.push(frag),
                }
            }
        }
    }

    let mut out = Vec::with_capacity(parts);
    for (k, interval) in intervals.into_iter().enumerate() {
        let mut scales = Vec::with_capacity(n_top);
        for n in 1..=n_top {
            let (mut ambient, mut anomalous) = core::mem::take(&mut buckets[k][n - 1]);
            ambient.sort_by(rank_order);
            anomalous.sort_by(rank_order);
            scales.push(ScaleLists {
                n,
                ambient,
                anomalous,
            });
        }
        out.push(IntervalLists { interval, scales });
    }
    EpisodeUnfolding { intervals: out }
}

/// One running-intentionality emission.
#[derive(Debug, Clone, PartialEq)]
pub struct RunningEmission {
    pub n: usize,
    pub key: String,
    pub tau: u32,
    pub score: f64,
}

/// Incremental classifier: feed sentences in `tau` order, collect running
/// emissions, and finish with labels that match [`classify_document`] over
/// the same input.
pub struct RunningClassifier {
    cfg: IntentConfig,
    model: WorkModel,
    ledger: OccurrenceLedger,
    last_seen: Vec<alloc::collections::BTreeMap<String, u32>>,
    next_tau: u32,
}

impl RunningClassifier {
    pub fn new(cfg: IntentConfig, model: WorkModel) -> Self {
        let n_max = cfg.n_max;
        RunningClassifier {
            cfg,
            model,
            ledger: OccurrenceLedger::new(n_max),
            last_seen: (0..n_max).map(|_| alloc::collections::BTreeMap::new()).collect(),
            next_tau: 0,
        }
    }

    pub fn ledger(&self) -> &OccurrenceLedger {
        &self.ledger
    }

    /// Ingest the next sentence, emitting one running score per fragment
    /// occurrence.
    pub fn ingest(&mut self, sentence: &Sentence) -> Result<Vec<RunningEmission>, Error> {
        if self.next_tau > 0 && sentence.tau < self.next_tau {
            return Err(Error::OutOfOrderTau {
                expected_min: self.next_tau,
                got: sentence.tau,
            });
        }
        let fragments = extract_ngrams(sentence, self.cfg.n_max);
        let mut emissions = Vec::with_capacity(fragments.len());
        for (ngram, tau) in &fragments {
            let w = self.model.cost(ngram.letters, ngram.capitals as f64);
            let slot = &mut self.last_seen[ngram.n - 1];
            let last = slot.get(&ngram.key).copied();
            let score = running_score(w, *tau, last, &self.cfg)?;
            slot.insert(ngram.key.clone(), *tau);
            emissions.push(RunningEmission {
                n: ngram.n,
                key: ngram.key.clone(),
                tau: *tau,
                score,
            });
        }
        self.ledger.accumulate(&fragments)?;
        self.next_tau = sentence.tau + 1;
        Ok(emissions)
    }

    /// Final labels over everything ingested.
    pub fn finish(self) -> Vec<ClassifiedFragment> {
        classify_document(&self.ledger, &self.cfg, &self.model)
    }
}
