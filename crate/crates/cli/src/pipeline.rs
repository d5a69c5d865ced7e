//! End-to-end document analysis: read, segment, accumulate, report.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use fractint_core::{
    build_report, segment_sentences, AnalysisReport, IntentConfig, OccurrenceLedger,
    RawDocument, ReportOptions, Sentence, WorkModel,
};

use crate::gutenberg::strip_gutenberg;

/// A fully ingested document, ready for any report operation.
pub struct AnalyzedDocument {
    pub name: String,
    pub sentences: Vec<Sentence>,
    pub ledger: OccurrenceLedger,
}

/// Read a file into a document, optionally cutting Gutenberg boilerplate.
pub fn read_document(path: &Path, strip: bool) -> Result<RawDocument> {
    let bytes = fs::read(path).with_context(|| format!("cannot read input file {}", path.display()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    if strip {
        let text = String::from_utf8_lossy(&bytes);
        let stripped = strip_gutenberg(&text);
        Ok(RawDocument::from_text(name, &stripped))
    } else {
        Ok(RawDocument::new(name, bytes))
    }
}

/// Segment and accumulate one document against a fresh ledger.
pub fn ingest(doc: &RawDocument, cfg: &IntentConfig) -> Result<AnalyzedDocument> {
    cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    let sentences = segment_sentences(doc);
    let mut ledger = OccurrenceLedger::new(cfg.n_max);
    for sentence in &sentences {
        ledger
            .ingest_sentence(sentence)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
    }
    Ok(AnalyzedDocument {
        name: doc.name.clone(),
        sentences,
        ledger,
    })
}

/// Full pipeline for one input file.
pub fn analyze_file(
    path: &Path,
    strip: bool,
    cfg: &IntentConfig,
    model: &WorkModel,
    options: &ReportOptions,
) -> Result<AnalysisReport> {
    let doc = read_document(path, strip)?;
    let analyzed = ingest(&doc, cfg)?;
    Ok(build_report(
        &analyzed.name,
        &analyzed.sentences,
        &analyzed.ledger,
        cfg,
        model,
        options,
    ))
}
