//! Streaming fractionation of narrative text into multi-scale n-gram streams,
//! with intentionality scoring over work and repetition dynamics.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`stream`] turns raw bytes into sentences of normalized tokens; the
//!    sentence counter is the proper-time coordinate `tau` for every rate in
//!    the model.
//! 2. [`fraction`] splits each sentence into parallel n-gram streams
//!    (n = 1..n_max) and accumulates an occurrence ledger: counts, positions
//!    and stream totals.
//! 3. [`intent`] scores fragments: a work model over letters, the static
//!    intentionality curve, regime classification, gap statistics and the
//!    running (hiatus-driven) score.
//! 4. [`coherence`] and [`report`] split fragments into ambient context vs
//!    anomalous intent, per document and per coherence interval, and package
//!    rankings, time series and method comparisons.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line front end live in the companion `fractint` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod coherence;
pub mod error;
pub mod fraction;
pub mod intent;
pub mod report;
pub mod stream;

pub use coherence::{
    classify_document, partition, unfold_episode, ClassifiedFragment, CoherenceInterval,
    EpisodeUnfolding, IntervalLists, Label, RunningClassifier, RunningEmission, ScaleLists,
};
pub use error::Error;
pub use fraction::{extract_ngrams, Ngram, OccurrenceLedger, OccurrenceRecord};
pub use intent::{
    gap_statistics, gap_statistics_of, is_bursty, multiscale_intentionality, regime,
    running_intentionality, running_score, scored_intentionality, static_intentionality, work,
    GapStats, IntentConfig, Regime, WorkModel,
};
pub use report::{
    build_report, compare_methods, lag_autocorrelation, running_series, AnalysisReport,
    Checkpoint, ConfigEcho, MethodComparison, ReportMeta, ReportOptions, ScaleRanking,
    TimeSeries, METHOD_NAMES,
};
pub use stream::{segment_sentences, stream_iter, tokenize, RawDocument, Sentence, SentenceStream, Token};

pub(crate) mod math {
    //! f64 math shims usable without std.

    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }

    pub fn log2(x: f64) -> f64 {
        libm::log2(x)
    }
}
