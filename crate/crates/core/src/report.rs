//! Analysis outputs: ranked summaries, the per-sentence running series, the
//! four-method comparison and the self-describing report.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::coherence::{
    classify_with_filter, partition, rank_order, unfold_episode, ClassifiedFragment,
    EpisodeUnfolding, FragmentFilter, Label,
};
use crate::fraction::{extract_ngrams, letters_in_key, OccurrenceLedger};
use crate::intent::{
    gap_statistics, is_bursty, running_score, scored_intentionality, GapStats, IntentConfig,
    WorkModel,
};
use crate::math;
use crate::stream::Sentence;

/// Per-sentence running intentionality: one point per sentence, `tau`
/// strictly increasing, values non-negative.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeSeries {
    pub points: Vec<(u32, f64)>,
}

/// The four ranking approaches compared against each other.
pub const METHOD_NAMES: [&str; 4] = [
    "global_frequency",
    "running_frequency",
    "global_coherence",
    "running_coherence",
];

/// Pairwise top-K overlap at one prefix checkpoint.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Checkpoint {
    /// Sentences read so far (prefix length).
    pub prefix: u32,
    /// overlap[i][j] = |top-K(i) ∩ top-K(j)| / K for the four methods.
    pub overlap: [[f64; 4]; 4],
}

/// Method-overlap table across prefix checkpoints.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MethodComparison {
    pub k: usize,
    pub methods: Vec<String>,
    pub checkpoints: Vec<Checkpoint>,
}

impl MethodComparison {
    pub fn overlap_at(&self, checkpoint: usize, a: usize, b: usize) -> f64 {
        self.checkpoints[checkpoint].overlap[a][b]
    }
}

/// Document metadata echoed into every report.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReportMeta {
    pub name: String,
    pub sentence_total: u32,
    pub token_total: u64,
}

/// Config echo: every free parameter that shaped the run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfigEcho {
    pub intent: IntentConfig,
    pub work: WorkModel,
    pub list_cap: usize,
    pub comparison_k: usize,
}

/// Ranked fragments for one scale.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaleRanking {
    pub n: usize,
    pub fragments: Vec<ClassifiedFragment>,
}

/// The complete analysis of one document.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisReport {
    pub meta: ReportMeta,
    pub config: ConfigEcho,
    pub ambient: Vec<ScaleRanking>,
    pub anomalous: Vec<ScaleRanking>,
    pub unfolding: EpisodeUnfolding,
    pub series: TimeSeries,
    pub comparison: MethodComparison,
}

/// Assembly options not part of the scoring model.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    /// Maximum fragments kept per scale per label (0 = unlimited).
    pub list_cap: usize,
    /// Top-K size for the method comparison.
    pub comparison_k: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            list_cap: 150,
            comparison_k: 50,
        }
    }
}

/// Per-sentence running intentionality series: the sum of running emissions
/// for each sentence's fragments, spacer 1-grams excluded.
pub fn running_series(
    sentences: &[Sentence],
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
) -> TimeSeries {
    let spacers = ledger.spacer_set(cfg);
    let mut last_seen: Vec<BTreeMap<String, u32>> = (0..cfg.n_max).map(|_| BTreeMap::new()).collect();
    let mut points = Vec::with_capacity(sentences.len());
    for sentence in sentences {
        let mut total = 0.0;
        for (ngram, tau) in extract_ngrams(sentence, cfg.n_max) {
            if ngram.n == 1 && spacers.contains(&ngram.key) {
                continue;
            }
            let w = model.cost(ngram.letters, ngram.capitals as f64);
            let slot = &mut last_seen[ngram.n - 1];
            let last = slot.get(&ngram.key).copied();
            if let Ok(score) = running_score(w, tau, last, cfg) {
                total += score;
            }
            slot.insert(ngram.key, tau);
        }
        points.push((sentence.tau, total));
    }
    TimeSeries { points }
}

/// Sample autocorrelation of the series values at the given lag.
pub fn lag_autocorrelation(series: &TimeSeries, lag: usize) -> f64 {
    let values: Vec<f64> = series.points.iter().map(|(_, v)| *v).collect();
    if values.len() <= lag + 1 {
        return 0.0;
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let var: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    if var == 0.0 {
        return 1.0;
    }
    let cov: f64 = (0..n - lag)
        .map(|i| (values[i] - mean) * (values[i + lag] - mean))
        .sum();
    cov / var
}

/// Identity of a fragment across method rankings.
type FragId = (usize, String);

struct MethodInput {
    id: FragId,
    work: f64,
    /// Global static score on the stream scale.
    global_static: f64,
    /// Bursty by the anomalous-gap inequality over global positions.
    bursty: bool,
    positions: Vec<u32>,
    first: u32,
}

fn collect_method_inputs(
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
) -> Vec<MethodInput> {
    let filter = FragmentFilter::build(ledger, cfg);
    let mut scaled = cfg.clone();
    scaled.phi0 = cfg.phi0_for_stream(ledger.sentence_total());
    let mut out = Vec::new();
    for n in 1..=cfg.n_max.min(ledger.n_max()) {
        for (key, rec) in ledger.scale(n) {
            if !filter.eligible(n, key, rec.count, cfg) {
                continue;
            }
            if rec.count == 1 && n < 3 {
                continue;
            }
            let work = model.cost(letters_in_key(key), rec.capitals_mean());
            let phi = rec.count as f64 / ledger.sentence_total().max(1) as f64;
            let global_static = scored_intentionality(work, phi, &scaled).unwrap_or(0.0);
            let stats = gap_statistics(rec);
            let bursty = matches!(stats, GapStats::Measured { .. }) && is_bursty(&stats).unwrap();
            out.push(MethodInput {
                id: (n, key.clone()),
                work,
                global_static,
                bursty,
                positions: rec.positions.clone(),
                first: rec.positions[0],
            });
        }
    }
    out
}

fn top_k_ids(scored: &mut Vec<(f64, f64, &FragId)>, k: usize) -> Vec<FragId> {
    let order = |a: &(f64, f64, &FragId), b: &(f64, f64, &FragId)| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal))
            .then_with(|| a.2.cmp(b.2))
    };
    if scored.len() > k {
        scored.select_nth_unstable_by(k - 1, order);
        scored.truncate(k);
    }
    scored.sort_by(order);
    scored.iter().take(k).map(|(_, _, id)| (*id).clone()).collect()
}

fn overlap(a: &[FragId], b: &[FragId], k: usize) -> f64 {
    let k_eff = k.min(a.len()).min(b.len());
    if k_eff == 0 {
        return 0.0;
    }
    let set: alloc::collections::BTreeSet<&FragId> = a.iter().take(k_eff).collect();
    let hits = b.iter().take(k_eff).filter(|id| set.contains(id)).count();
    hits as f64 / k_eff as f64
}

/// Compare the four ranking approaches at one checkpoint per coherence
/// interval: (1) static score on global frequency, (2) first-impression
/// decay without reset, (3) gap-statistics selection ranked by static score,
/// (4) accumulated running coherence. Reports pairwise top-K overlap.
pub fn compare_methods(
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
    k: usize,
) -> MethodComparison {
    let k = k.max(1);
    let inputs = collect_method_inputs(ledger, cfg, model);
    let intervals = partition(ledger.sentence_total(), cfg);
    let mut comparison = MethodComparison {
        k,
        methods: METHOD_NAMES.iter().map(|s| String::from(*s)).collect(),
        checkpoints: Vec::with_capacity(intervals.len()),
    };
    if inputs.is_empty() {
        return comparison;
    }

    // Running state per fragment for methods 2 and 4.
    let mut running_sum = alloc::vec![0.0f64; inputs.len()];
    let mut next_pos = alloc::vec![0usize; inputs.len()];
    let mut last_at = alloc::vec![None::<u32>; inputs.len()];

    // Global rankings (methods 1 and 3) are prefix-independent.
    let mut m1_scored: Vec<(f64, f64, &FragId)> = inputs
        .iter()
        .map(|f| (f.global_static, f.work, &f.id))
        .collect();
    let m1 = top_k_ids(&mut m1_scored, k);
    let mut m3_scored: Vec<(f64, f64, &FragId)> = inputs
        .iter()
        .filter(|f| f.bursty)
        .map(|f| (f.global_static, f.work, &f.id))
        .collect();
    let m3 = top_k_ids(&mut m3_scored, k);

    for interval in &intervals {
        let tau_c = interval.tau_end;
        let prefix_len = tau_c + 1;

        // advance running state to this checkpoint
        for (i, f) in inputs.iter().enumerate() {
            while next_pos[i] < f.positions.len() && f.positions[next_pos[i]] <= tau_c {
                let p = f.positions[next_pos[i]];
                running_sum[i] += running_score(f.work, p, last_at[i], cfg).unwrap_or(0.0);
                last_at[i] = Some(p);
                next_pos[i] += 1;
            }
        }

        // method 2: decay from first occurrence only, never re-based
        let mut m2_scored: Vec<(f64, f64, &FragId)> = inputs
            .iter()
            .filter(|f| f.first <= tau_c)
            .map(|f| {
                let age = (tau_c - f.first) as f64;
                (f.work * math::exp(-cfg.lambda * age), f.work, &f.id)
            })
            .collect();
        let m2 = top_k_ids(&mut m2_scored, k);

        // method 4: accumulated running coherence
        let mut m4_scored: Vec<(f64, f64, &FragId)> = inputs
            .iter()
            .enumerate()
            .filter(|(i, _)| next_pos[*i] > 0)
            .map(|(i, f)| (running_sum[i], f.work, &f.id))
            .collect();
        let m4 = top_k_ids(&mut m4_scored, k);

        let ranks = [&m1, &m2, &m3, &m4];
        let mut table = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                table[i][j] = overlap(ranks[i], ranks[j], k);
            }
        }
        comparison.checkpoints.push(Checkpoint {
            prefix: prefix_len,
            overlap: table,
        });
    }
    comparison
}

/// Assemble the full report: document summary, per-scale rankings, episode
/// unfolding, running series and method comparison.
pub fn build_report(
    name: &str,
    sentences: &[Sentence],
    ledger: &OccurrenceLedger,
    cfg: &IntentConfig,
    model: &WorkModel,
    options: &ReportOptions,
) -> AnalysisReport {
    let filter = FragmentFilter::build(ledger, cfg);
    let flat = classify_with_filter(ledger, cfg, model, &filter);
    let cap = if options.list_cap == 0 {
        usize::MAX
    } else {
        options.list_cap
    };

    let mut ambient = Vec::new();
    let mut anomalous = Vec::new();
    for n in 1..=cfg.n_max.min(ledger.n_max()) {
        let mut amb: Vec<ClassifiedFragment> = flat
            .iter()
            .filter(|f| f.n == n && f.label == Label::Ambient)
            .cloned()
            .collect();
        let mut anom: Vec<ClassifiedFragment> = flat
            .iter()
            .filter(|f| f.n == n && f.label == Label::Anomalous)
            .cloned()
            .collect();
        amb.sort_by(rank_order);
        anom.sort_by(rank_order);
        amb.truncate(cap);
        anom.truncate(cap);
        ambient.push(ScaleRanking { n, fragments: amb });
        anomalous.push(ScaleRanking { n, fragments: anom });
    }

    let mut unfolding = unfold_episode(ledger, cfg, model);
    for interval in &mut unfolding.intervals {
        for lists in &mut interval.scales {
            lists.ambient.truncate(cap);
            lists.anomalous.truncate(cap);
        }
    }

    AnalysisReport {
        meta: ReportMeta {
            name: String::from(name),
            sentence_total: ledger.sentence_total(),
            token_total: ledger.token_total(),
        },
        config: ConfigEcho {
            intent: cfg.clone(),
            work: model.clone(),
            list_cap: options.list_cap,
            comparison_k: options.comparison_k,
        },
        ambient,
        anomalous,
        unfolding,
        series: running_series(sentences, ledger, cfg, model),
        comparison: compare_methods(ledger, cfg, model, options.comparison_k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{segment_sentences, RawDocument};
    use alloc::format;
    use alloc::string::ToString;

    fn pipeline(text: &str) -> (Vec<Sentence>, OccurrenceLedger) {
        let cfg = IntentConfig::default();
        let doc = RawDocument::from_text("test", text);
        let sentences = segment_sentences(&doc);
        let mut ledger = OccurrenceLedger::new(cfg.n_max);
        for s in &sentences {
            ledger.ingest_sentence(s).unwrap();
        }
        (sentences, ledger)
    }

    #[test]
    fn empty_document_report() {
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (sentences, ledger) = pipeline("");
        let report = build_report(
            "empty",
            &sentences,
            &ledger,
            &cfg,
            &model,
            &ReportOptions::default(),
        );
        assert_eq!(report.meta.sentence_total, 0);
        assert_eq!(report.meta.token_total, 0);
        assert!(report.series.points.is_empty());
        assert!(report.unfolding.intervals.is_empty());
        assert!(report.ambient.iter().all(|s| s.fragments.is_empty()));
    }

    #[test]
    fn single_sentence_series_is_first_occurrence_sum() {
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (sentences, ledger) = pipeline("Gleaming harbour lights beckon sailors homeward.");
        let series = running_series(&sentences, &ledger, &cfg, &model);
        assert_eq!(series.points.len(), 1);
        // every fragment is a first occurrence: sum of works of all
        // non-spacer fragments at all scales
        let spacers = ledger.spacer_set(&cfg);
        let mut expected = 0.0;
        for (g, _) in extract_ngrams(&sentences[0], cfg.n_max) {
            if g.n == 1 && spacers.contains(&g.key) {
                continue;
            }
            expected += model.cost(g.letters, g.capitals as f64);
        }
        assert!((series.points[0].1 - expected).abs() < 1e-9);
    }

    #[test]
    fn repeated_sentence_series_declines_to_plateau() {
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let one = "Gleaming harbour lights beckon sailors homeward. ";
        let text: String = std::iter::repeat_n(one, 100).collect();
        let (sentences, ledger) = pipeline(&text);
        let series = running_series(&sentences, &ledger, &cfg, &model);
        assert_eq!(series.points.len(), 100);
        let v0 = series.points[0].1;
        let v1 = series.points[1].1;
        assert!(v1 < v0);
        // closed form: every fragment repeats at gap 1 from tau 1 onward
        let decay = 1.0 - math::exp(-cfg.lambda);
        for k in 1..100 {
            let vk = series.points[k].1;
            assert!(
                (vk - v0 * decay).abs() < 1e-9,
                "point {k} should equal first-occurrence sum times (1 - e^-lambda)"
            );
        }
    }

    #[test]
    fn series_values_nonnegative_and_tau_increasing() {
        let text = (0..60)
            .map(|i| format!("Sentence number {i} speaks of shifting matters. "))
            .collect::<String>();
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (sentences, ledger) = pipeline(&text);
        let series = running_series(&sentences, &ledger, &cfg, &model);
        let mut prev: Option<u32> = None;
        for (tau, v) in &series.points {
            assert!(*v >= 0.0);
            if let Some(p) = prev {
                assert!(*tau > p);
            }
            prev = Some(*tau);
        }
    }

    #[test]
    fn series_conserves_emission_total() {
        let text = "Wandering albatross circles. Wandering albatross returns. Quiet sea rests. Wandering albatross sleeps.";
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (sentences, ledger) = pipeline(text);
        let series = running_series(&sentences, &ledger, &cfg, &model);
        let series_sum: f64 = series.points.iter().map(|(_, v)| v).sum();

        // independent accumulation of every non-spacer emission
        let spacers = ledger.spacer_set(&cfg);
        let mut last: BTreeMap<(usize, String), u32> = BTreeMap::new();
        let mut total = 0.0;
        for s in &sentences {
            for (g, tau) in extract_ngrams(s, cfg.n_max) {
                if g.n == 1 && spacers.contains(&g.key) {
                    continue;
                }
                let w = model.cost(g.letters, g.capitals as f64);
                let prev = last.get(&(g.n, g.key.clone())).copied();
                total += running_score(w, tau, prev, &cfg).unwrap();
                last.insert((g.n, g.key), tau);
            }
        }
        assert!((series_sum - total).abs() < 1e-9);
    }

    #[test]
    fn overlap_metric_reflexive_symmetric_bounded() {
        let a: Vec<FragId> = (0..10).map(|i| (1usize, format!("w{i}"))).collect();
        let b: Vec<FragId> = (5..15).map(|i| (1usize, format!("w{i}"))).collect();
        assert_eq!(overlap(&a, &a, 10), 1.0);
        let ab = overlap(&a, &b, 10);
        let ba = overlap(&b, &a, 10);
        assert!((ab - ba).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&ab));
        assert!((ab - 0.5).abs() < 1e-15);
        let c: Vec<FragId> = (20..30).map(|i| (1usize, format!("w{i}"))).collect();
        assert_eq!(overlap(&a, &c, 10), 0.0);
    }

    #[test]
    fn comparison_shape_and_self_overlap() {
        let text = (0..120)
            .map(|i| {
                let theme = if i % 3 == 0 { "crimson banner rises" } else { "silent valley waits" };
                format!("Scene {i} where {theme} again. ")
            })
            .collect::<String>();
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (_, ledger) = pipeline(&text);
        let cmp = compare_methods(&ledger, &cfg, &model, 10);
        assert_eq!(cmp.methods.len(), 4);
        assert_eq!(cmp.checkpoints.len(), partition(ledger.sentence_total(), &cfg).len());
        for cp in &cmp.checkpoints {
            for i in 0..4 {
                assert!((cp.overlap[i][i] - 1.0).abs() < 1e-12 || cp.overlap[i][i] == 0.0);
                for j in 0..4 {
                    assert!((cp.overlap[i][j] - cp.overlap[j][i]).abs() < 1e-12);
                    assert!((0.0..=1.0).contains(&cp.overlap[i][j]));
                }
            }
        }
    }

    #[test]
    fn report_is_deterministic() {
        let text = (0..100)
            .map(|i| format!("Sentence {i} tells of harbour lights and weather. "))
            .collect::<String>();
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (sentences, ledger) = pipeline(&text);
        let opts = ReportOptions::default();
        let a = build_report("doc", &sentences, &ledger, &cfg, &model, &opts);
        let b = build_report("doc", &sentences, &ledger, &cfg, &model, &opts);
        assert_eq!(a, b);
    }

    #[test]
    fn list_cap_respected() {
        let text = (0..300)
            .map(|i| format!("Unique marker alpha{i} beta{i} gamma{i} delta{i}. ").to_string())
            .collect::<String>();
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (sentences, ledger) = pipeline(&text);
        let opts = ReportOptions {
            list_cap: 7,
            comparison_k: 5,
        };
        let report = build_report("doc", &sentences, &ledger, &cfg, &model, &opts);
        for s in report.ambient.iter().chain(report.anomalous.iter()) {
            assert!(s.fragments.len() <= 7);
        }
    }
}
