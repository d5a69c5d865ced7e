//! Fragment scoring: work model, static intentionality, regime
//! classification, gap/burstiness statistics, running intentionality and the
//! multi-scale sentence sum.

use alloc::collections::BTreeSet;
use alloc::string::String;

use crate::error::Error;
use crate::fraction::{extract_ngrams, Ngram, OccurrenceLedger};
use crate::math;
use crate::stream::Sentence;

/// Cost model for producing a fragment.
///
/// The premium is a per-capital multiplier on the letter cost, so scaling
/// `letter_cost` scales every work value (and every score) uniformly and
/// leaves rankings unchanged.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorkModel {
    /// Work units per letter.
    pub letter_cost: f64,
    /// Extra work per capitalized letter, as a fraction of `letter_cost`.
    pub capital_premium: f64,
}

impl Default for WorkModel {
    fn default() -> Self {
        WorkModel {
            letter_cost: 1.0,
            capital_premium: 0.2,
        }
    }
}

impl WorkModel {
    pub fn validate(&self) -> Result<(), Error> {
        if self.letter_cost.is_nan() || self.letter_cost <= 0.0 {
            return Err(Error::InvalidConfig("letter_cost must be > 0"));
        }
        if self.capital_premium.is_nan() || self.capital_premium < 0.0 {
            return Err(Error::InvalidConfig("capital_premium must be >= 0"));
        }
        Ok(())
    }

    /// Work of a fragment given its letter and capital counts.
    pub fn cost(&self, letters: u32, capitals: f64) -> f64 {
        self.letter_cost * (letters as f64 + self.capital_premium * capitals)
    }
}

/// All free parameters of the model. Rates are per sentence of proper time.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntentConfig {
    /// Sentences per coherence interval.
    pub coherence_len: usize,
    /// Threshold frequency Φ0 (occurrences per sentence).
    pub phi0: f64,
    /// Sigmoid offset ρ.
    pub rho: f64,
    /// Reciprocal coherence length λ (per sentence).
    pub lambda: f64,
    /// Spacer cutoff on Φ/Φ0.
    pub padding_ratio: f64,
    /// Minimum 1-gram length for ranking eligibility.
    pub min_word_len: usize,
    /// Largest n-gram scale.
    pub n_max: usize,
    /// Φ/Φ0 boundary between anomalous and ambient.
    pub ambient_ratio: f64,
}

impl Default for IntentConfig {
    fn default() -> Self {
        IntentConfig {
            coherence_len: 45,
            phi0: 1.0 / 45.0,
            rho: 1.0,
            lambda: 1.0 / 45.0,
            padding_ratio: 10.0,
            min_word_len: 5,
            n_max: 6,
            ambient_ratio: 0.5,
        }
    }
}

impl IntentConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.coherence_len < 2 {
            return Err(Error::InvalidConfig("coherence_len must be >= 2"));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.phi0) || !positive(self.lambda) || !positive(self.padding_ratio) {
            return Err(Error::InvalidConfig("rates must be strictly positive"));
        }
        if self.ambient_ratio.is_nan() || self.ambient_ratio >= self.padding_ratio {
            return Err(Error::InvalidConfig(
                "ambient_ratio must be below padding_ratio",
            ));
        }
        if self.n_max < 1 || self.n_max > 8 {
            return Err(Error::InvalidConfig("n_max must be in 1..=8"));
        }
        Ok(())
    }

    /// Occurrence ratio Φ/Φ0 on the stream scale: the classification scale
    /// pins the sigmoid knee at `coherence_len` total occurrences, so a
    /// fragment's standing does not dilute with document length.
    pub fn stream_ratio(&self, count: u64) -> f64 {
        count as f64 / self.coherence_len as f64
    }

    /// Φ0 expressed per sentence for a stream of `sentence_total` sentences,
    /// such that `phi / phi0_for_stream == stream_ratio(count)`.
    pub fn phi0_for_stream(&self, sentence_total: u32) -> f64 {
        self.coherence_len as f64 / sentence_total.max(1) as f64
    }
}

/// Frequency regime of a fragment relative to the intended threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Regime {
    /// Φ/Φ0 well below one: incidental or accidental.
    Spurious,
    /// Φ/Φ0 of order one: intended.
    Intended,
    /// Φ/Φ0 well above one: habitual padding or background noise.
    Padding,
}

/// Inter-occurrence gap statistics, in sentences.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GapStats {
    /// Fewer than two occurrences: gaps are undefined.
    Insufficient { occurrences: u64 },
    Measured {
        delta_max: u32,
        delta_min: u32,
        delta_mean: f64,
        occurrences: u64,
    },
}

impl GapStats {
    pub fn is_measured(&self) -> bool {
        matches!(self, GapStats::Measured { .. })
    }
}

/// Work of a fragment: letter cost times letters, plus the capital premium.
/// Additive over concatenation; the separator space costs nothing.
pub fn work(w: &Ngram, model: &WorkModel) -> f64 {
    model.cost(w.letters, w.capitals as f64)
}

/// Static intentionality of a fragment with frequency `phi`:
///
/// `I = phi * W / (1 + exp(phi/phi0 - rho))`
///
/// The numerator rewards repeated, costly fragments; the sigmoid denominator
/// curbs the score once repetition exceeds the coherence budget.
pub fn static_intentionality(
    w: &Ngram,
    phi: f64,
    cfg: &IntentConfig,
    model: &WorkModel,
) -> Result<f64, Error> {
    scored_intentionality(work(w, model), phi, cfg)
}

/// As [`static_intentionality`] but with a precomputed work value.
pub fn scored_intentionality(work: f64, phi: f64, cfg: &IntentConfig) -> Result<f64, Error> {
    if !phi.is_finite() {
        return Err(Error::NonFinite);
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    Ok(phi * work / (1.0 + math::exp(phi / cfg.phi0 - cfg.rho)))
}

/// Classify a frequency into the three-regime trichotomy. Boundary values
/// fall into `Intended`.
pub fn regime(phi: f64, cfg: &IntentConfig) -> Regime {
    let r = phi / cfg.phi0;
    if r < 1.0 / cfg.padding_ratio {
        Regime::Spurious
    } else if r > cfg.padding_ratio {
        Regime::Padding
    } else {
        Regime::Intended
    }
}

/// Gap statistics over the successive differences of a position list.
pub fn gap_statistics(record: &crate::fraction::OccurrenceRecord) -> GapStats {
    gap_statistics_of(&record.positions)
}

/// Gap statistics over an explicit position list.
pub fn gap_statistics_of(positions: &[u32]) -> GapStats {
    if positions.len() < 2 {
        return GapStats::Insufficient {
            occurrences: positions.len() as u64,
        };
    }
    let mut delta_max = 0u32;
    let mut delta_min = u32::MAX;
    let mut sum = 0u64;
    for pair in positions.windows(2) {
        let gap = pair[1] - pair[0];
        delta_max = delta_max.max(gap);
        delta_min = delta_min.min(gap);
        sum += gap as u64;
    }
    GapStats::Measured {
        delta_max,
        delta_min,
        delta_mean: sum as f64 / (positions.len() - 1) as f64,
        occurrences: positions.len() as u64,
    }
}

/// Anomalous-gap test: true iff `delta_max > delta_min + delta_mean`.
/// Callers must gate on measured statistics.
pub fn is_bursty(stats: &GapStats) -> Result<bool, Error> {
    match stats {
        GapStats::Insufficient { .. } => Err(Error::InsufficientOccurrences),
        GapStats::Measured {
            delta_max,
            delta_min,
            delta_mean,
            ..
        } => Ok(*delta_max as f64 > *delta_min as f64 + *delta_mean),
    }
}

/// Running intentionality at a repeat after a gap:
///
/// `I = W * (1 - exp(-lambda * (tau - tau_last)))`
///
/// A first occurrence (no `tau_last`) scores the full work, the infinite-
/// hiatus limit of the formula.
pub fn running_intentionality(
    w: &Ngram,
    tau: u32,
    tau_last: Option<u32>,
    cfg: &IntentConfig,
    model: &WorkModel,
) -> Result<f64, Error> {
    running_score(work(w, model), tau, tau_last, cfg)
}

/// As [`running_intentionality`] with a precomputed work value.
pub fn running_score(work: f64, tau: u32, tau_last: Option<u32>, cfg: &IntentConfig) -> Result<f64, Error> {
    match tau_last {
        None => Ok(work),
        Some(last) => {
            if tau < last {
                return Err(Error::OutOfOrderTau {
                    expected_min: last,
                    got: tau,
                });
            }
            let gap = (tau - last) as f64;
            Ok(work * (1.0 - math::exp(-cfg.lambda * gap)))
        }
    }
}

/// Multi-scale static intentionality of one sentence: the sum over
/// n = 1..n_max of the static score of every window, skipping spacer-set
/// 1-grams. Frequencies come from the ledger; Φ0 is used as configured.
pub fn multiscale_intentionality(
    sentence: &Sentence,
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
) -> Result<f64, Error> {
    let spacers = ledger.spacer_set(cfg);
    multiscale_with_spacers(sentence, ledger, cfg, model, &spacers)
}

/// As [`multiscale_intentionality`] with a precomputed spacer set, for
/// callers scoring many sentences against one ledger.
pub fn multiscale_with_spacers(
    sentence: &Sentence,
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
    spacers: &BTreeSet<String>,
) -> Result<f64, Error> {
    if sentence.tokens.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (ngram, _) in extract_ngrams(sentence, cfg.n_max) {
        if ngram.n == 1 && spacers.contains(&ngram.key) {
            continue;
        }
        let phi = ledger.frequency(ngram.n, &ngram.key)?;
        total += static_intentionality(&ngram, phi, cfg, model)?;
    }
    Ok(total)
}
