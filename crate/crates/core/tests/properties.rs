//! Property suites over the pipeline invariants: randomized texts against
//! brute-force oracles, score bounds, monotonicity and determinism.

use proptest::prelude::*;

use fractint_core::{
    classify_document, extract_ngrams, gap_statistics, is_bursty, partition, running_score,
    scored_intentionality, segment_sentences, stream_iter, tokenize, GapStats, IntentConfig,
    Ngram, OccurrenceLedger, RawDocument, Sentence, WorkModel,
};

const VOCAB: [&str; 26] = [
    "whale", "ocean", "captain", "harbor", "voyage", "remarkable", "stately", "pleasure",
    "lantern", "weather", "ish", "marvel", "wind", "sails", "anchor", "tide", "beacon",
    "journey", "quiet", "storm", "gull", "mast", "rope", "deck", "parent-species",
    "storm\u{2014}tide",
];

fn word() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&VOCAB[..])
}

/// A sentence of 1..=10 vocabulary words ending in a terminator.
fn sentence_text() -> impl Strategy<Value = String> {
    (prop::collection::vec(word(), 1..=10), prop::sample::select(vec![".", "!", "?"]))
        .prop_map(|(words, term)| format!("{}{}", words.join(" "), term))
}

fn document_text(max_sentences: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(sentence_text(), 1..=max_sentences)
        .prop_map(|sentences| sentences.join(" "))
}

fn ngram_from(key: &str) -> Ngram {
    let toks = tokenize(key);
    Ngram {
        n: toks.len(),
        key: toks.iter().map(|t| t.norm.clone()).collect::<Vec<_>>().join(" "),
        letters: toks.iter().map(|t| t.char_count).sum(),
        capitals: toks.iter().map(|t| t.capital_count).sum(),
    }
}

fn build_ledger(text: &str, n_max: usize) -> (Vec<Sentence>, OccurrenceLedger) {
    let doc = RawDocument::from_text("prop", text);
    let sentences = segment_sentences(&doc);
    let mut ledger = OccurrenceLedger::new(n_max);
    for s in &sentences {
        ledger.ingest_sentence(s).unwrap();
    }
    (sentences, ledger)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Work is additive over concatenation, for any cost model.
    #[test]
    fn work_additivity(
        a in prop::collection::vec(word(), 1..4),
        b in prop::collection::vec(word(), 1..4),
        letter_cost in 0.1f64..10.0,
        premium in 0.0f64..2.0,
    ) {
        let model = WorkModel { letter_cost, capital_premium: premium };
        let u = ngram_from(&a.join(" "));
        let v = ngram_from(&b.join(" "));
        let uv = ngram_from(&format!("{} {}", a.join(" "), b.join(" ")));
        let sum = fractint_core::work(&u, &model) + fractint_core::work(&v, &model);
        let joint = fractint_core::work(&uv, &model);
        prop_assert!((joint - sum).abs() < 1e-9);
    }

    /// 0 <= I <= phi*W/(1+e^-rho); score vanishes in the padding limit; and
    /// a log-spaced sweep over phi rises to a single maximum then falls.
    #[test]
    fn static_score_bounds_and_single_maximum(
        w in 0.5f64..50.0,
        phi0 in 0.001f64..1.0,
        rho in 0.1f64..3.0,
    ) {
        let cfg = IntentConfig { phi0, rho, ..IntentConfig::default() };
        let bound_denom = 1.0 + (-rho).exp();
        let mut values = Vec::new();
        let mut phi = phi0 * 1e-3;
        while phi < phi0 * 300.0 {
            let i = scored_intentionality(w, phi, &cfg).unwrap();
            prop_assert!(i >= 0.0);
            prop_assert!(i <= phi * w / bound_denom + 1e-12);
            values.push(i);
            phi *= 1.15;
        }
        // tail suppression: final value far below the peak
        let peak = values.iter().cloned().fold(0.0f64, f64::max);
        prop_assert!(*values.last().unwrap() < peak * 1e-6);
        // single maximum: strictly rising, then strictly falling
        let argmax = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        for i in 1..values.len() {
            if i <= argmax {
                prop_assert!(values[i] > values[i - 1]);
            } else {
                prop_assert!(values[i] < values[i - 1]);
            }
        }
    }

    /// 0 <= running < W for finite gaps, strictly increasing in the gap
    /// (within the range where 1 - e^{-lambda*gap} is resolvable in f64;
    /// beyond that the score saturates at W from below).
    #[test]
    fn running_score_bounds_and_monotonicity(
        w in 0.5f64..50.0,
        gaps in prop::collection::btree_set(1u32..1000, 2..20),
    ) {
        let cfg = IntentConfig::default();
        let mut prev: Option<f64> = None;
        for gap in gaps {
            let score = running_score(w, gap, Some(0), &cfg).unwrap();
            prop_assert!(score >= 0.0);
            prop_assert!(score < w);
            if let Some(p) = prev {
                prop_assert!(score > p, "longer hiatus must never score lower");
            }
            prev = Some(score);
        }
        // saturation: a huge hiatus approaches the full work from below
        let sat = running_score(w, 1_000_000, Some(0), &cfg).unwrap();
        prop_assert!(sat <= w);
        prop_assert!(sat >= 0.9999 * w);
        // first occurrence scores exactly the full work
        prop_assert!(running_score(w, 0, None, &cfg).unwrap() == w);
    }

    /// Scaling letter_cost by k > 0 scales every score by k and leaves all
    /// ranking orders unchanged.
    #[test]
    fn argmax_invariance_under_work_scaling(
        k in 0.01f64..100.0,
        frags in prop::collection::vec((1u32..20, 0u32..5, 1u64..300), 2..30),
    ) {
        let cfg = IntentConfig::default();
        let base = WorkModel::default();
        let scaled = WorkModel { letter_cost: base.letter_cost * k, ..base.clone() };
        let sentences = 300u32;
        let mut order_base: Vec<(usize, f64)> = Vec::new();
        let mut order_scaled: Vec<(usize, f64)> = Vec::new();
        for (i, (letters, caps, count)) in frags.iter().enumerate() {
            let phi = *count as f64 / sentences as f64;
            let wb = base.cost(*letters, *caps as f64);
            let ws = scaled.cost(*letters, *caps as f64);
            prop_assert!((ws - k * wb).abs() <= 1e-9 * ws.abs().max(1.0));
            let ib = scored_intentionality(wb, phi, &cfg).unwrap();
            let is = scored_intentionality(ws, phi, &cfg).unwrap();
            prop_assert!((is - k * ib).abs() <= 1e-9 * is.abs().max(1e-12));
            order_base.push((i, ib));
            order_scaled.push((i, is));
        }
        let rank = |mut v: Vec<(usize, f64)>| -> Vec<usize> {
            v.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            v.into_iter().map(|(i, _)| i).collect()
        };
        prop_assert_eq!(rank(order_base), rank(order_scaled));
    }

    /// Intervals tile the stream: no gap, no overlap, all full-length but
    /// the last.
    #[test]
    fn partition_tiling(count in 1u32..5000, clen in 2usize..200) {
        let cfg = IntentConfig { coherence_len: clen, ..IntentConfig::default() };
        let intervals = partition(count, &cfg);
        prop_assert_eq!(intervals.len(), (count as usize).div_ceil(clen));
        let mut expected_start = 0u32;
        for (i, iv) in intervals.iter().enumerate() {
            prop_assert_eq!(iv.index, i);
            prop_assert_eq!(iv.tau_start, expected_start);
            let len = iv.tau_end - iv.tau_start + 1;
            prop_assert!(len as usize <= clen);
            if i + 1 < intervals.len() {
                prop_assert_eq!(len as usize, clen);
            }
            expected_start = iv.tau_end + 1;
        }
        prop_assert_eq!(expected_start, count);
    }

    /// The streaming iterator yields exactly the batch segmentation.
    #[test]
    fn stream_equals_batch(text in document_text(40)) {
        let doc = RawDocument::from_text("d", &text);
        let batch = segment_sentences(&doc);
        let streamed: Vec<Sentence> = stream_iter(&doc).collect();
        prop_assert_eq!(batch, streamed);
    }

    /// Concatenating two terminator-ended texts segments to the
    /// concatenation of their individual segmentations, tau re-based.
    #[test]
    fn segmentation_concatenation(a in document_text(20), b in document_text(20)) {
        let doc_a = RawDocument::from_text("a", &a);
        let doc_b = RawDocument::from_text("b", &b);
        let joined = RawDocument::from_text("ab", &format!("{a} {b}"));
        let sa = segment_sentences(&doc_a);
        let sb = segment_sentences(&doc_b);
        let sj = segment_sentences(&joined);
        prop_assert_eq!(sj.len(), sa.len() + sb.len());
        for (i, s) in sj.iter().enumerate() {
            prop_assert_eq!(s.tau as usize, i);
            let expected = if i < sa.len() {
                &sa[i]
            } else {
                &sb[i - sa.len()]
            };
            prop_assert_eq!(&s.tokens, &expected.tokens);
        }
    }

    /// No token loss: the token count equals the number of
    /// separator-delimited runs containing an alphanumeric character.
    #[test]
    fn no_token_loss(text in document_text(30)) {
        let doc = RawDocument::from_text("d", &text);
        let total: usize = segment_sentences(&doc).iter().map(|s| s.tokens.len()).sum();
        // independent run counter: whitespace, em/en dashes and `--` runs
        // separate candidate runs; a run counts when it has a word character
        let mut runs = 0usize;
        let mut in_run = false;
        let mut has_word = false;
        let mut hyphens = 0usize;
        for c in text.chars() {
            let is_sep = c.is_whitespace() || c == '\u{2014}' || c == '\u{2013}';
            if is_sep {
                if in_run && has_word { runs += 1; }
                in_run = false; has_word = false; hyphens = 0;
                continue;
            }
            if c == '-' {
                hyphens += 1;
                if hyphens == 2 {
                    // split: close current run
                    if in_run && has_word { runs += 1; }
                    in_run = false; has_word = false;
                }
                continue;
            }
            hyphens = 0;
            in_run = true;
            if c.is_alphanumeric() { has_word = true; }
        }
        if in_run && has_word { runs += 1; }
        prop_assert_eq!(total, runs);
    }

    /// Entropy bounds and frequency normalization at every scale.
    #[test]
    fn entropy_and_normalization(text in document_text(40)) {
        let (_, ledger) = build_ledger(&text, 3);
        for n in 1..=3usize {
            let distinct = ledger.distinct_at(n);
            if distinct == 0 {
                continue;
            }
            let s = ledger.shannon_entropy(n).unwrap();
            prop_assert!(s >= -1e-12);
            prop_assert!(s <= (distinct as f64).log2() + 1e-9);
            let mut p_sum = 0.0;
            let total: u64 = ledger.scale(n).map(|(_, r)| r.count).sum();
            for (_, rec) in ledger.scale(n) {
                p_sum += rec.count as f64 / total as f64;
            }
            prop_assert!((p_sum - 1.0).abs() < 1e-9);
        }
    }

    /// Classification is deterministic across two independent runs.
    #[test]
    fn ranking_determinism(text in document_text(60)) {
        let cfg = IntentConfig::default();
        let model = WorkModel::default();
        let (_, ledger_a) = build_ledger(&text, cfg.n_max);
        let (_, ledger_b) = build_ledger(&text, cfg.n_max);
        let a = classify_document(&ledger_a, &cfg, &model);
        let b = classify_document(&ledger_b, &cfg, &model);
        prop_assert_eq!(a, b);
    }

    /// Burstiness agrees with a direct evaluation of the gap inequality.
    #[test]
    fn burstiness_matches_direct_inequality(
        positions in prop::collection::btree_set(0u32..500, 2..40),
    ) {
        let positions: Vec<u32> = positions.into_iter().collect();
        let gaps: Vec<u32> = positions.windows(2).map(|w| w[1] - w[0]).collect();
        let dmax = *gaps.iter().max().unwrap() as f64;
        let dmin = *gaps.iter().min().unwrap() as f64;
        let mean = gaps.iter().map(|g| *g as f64).sum::<f64>() / gaps.len() as f64;
        let stats = fractint_core::intent::gap_statistics_of(&positions);
        prop_assert_eq!(is_bursty(&stats).unwrap(), dmax > dmin + mean);
    }
}

/// The ledger must agree with a brute-force re-scan of every window on
/// small texts (kept under 200 sentences).
#[test]
fn ledger_equals_brute_force_oracle() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(1000));
    runner
        .run(&document_text(50), |text| {
            let n_max = 4usize;
            let (sentences, ledger) = build_ledger(&text, n_max);

            // Brute force: collect every window of every sentence, then for
            // each distinct key re-scan the whole collection (O(L^2)).
            let mut all: Vec<(usize, String, u32)> = Vec::new();
            for s in &sentences {
                for (g, tau) in extract_ngrams(s, n_max) {
                    all.push((g.n, g.key, tau));
                }
            }
            let mut keys: Vec<(usize, String)> =
                all.iter().map(|(n, k, _)| (*n, k.clone())).collect();
            keys.sort();
            keys.dedup();
            for (n, key) in &keys {
                let positions: Vec<u32> = all
                    .iter()
                    .filter(|(an, ak, _)| an == n && ak == key)
                    .map(|(_, _, t)| *t)
                    .collect();
                let rec = ledger.record(*n, key).expect("key present");
                prop_assert_eq!(rec.count as usize, positions.len());
                prop_assert_eq!(&rec.positions, &positions);
            }
            // and the ledger holds nothing else
            for n in 1..=n_max {
                prop_assert_eq!(
                    ledger.distinct_at(n),
                    keys.iter().filter(|(kn, _)| *kn == n).count()
                );
            }
            // sanity bound on the scale hierarchy
            for n in 1..n_max {
                let here = ledger.distinct_at(n);
                let next = ledger.distinct_at(n + 1);
                prop_assert!(next <= here * here || here == 0);
            }
            // token total equals scale-1 mass
            let mass: u64 = ledger.scale(1).map(|(_, r)| r.count).sum();
            prop_assert_eq!(mass, ledger.token_total());
            Ok(())
        })
        .unwrap();
}

/// Gap statistics on records match statistics on raw position lists.
#[test]
fn gap_statistics_record_consistency() {
    let (_, ledger) = build_ledger(
        "whale storm whale. quiet tide. whale returns. calm sea rests. whale sleeps.",
        2,
    );
    let rec = ledger.record(1, "whale").unwrap();
    let direct = fractint_core::intent::gap_statistics_of(&rec.positions);
    let via_record = gap_statistics(rec);
    assert_eq!(direct, via_record);
    assert!(matches!(via_record, GapStats::Measured { .. }));
}
