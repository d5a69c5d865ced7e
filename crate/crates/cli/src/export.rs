//! Report serialization: JSON (canonical, lossless) and TSV (one file per
//! list section, for plotting pipelines).

use std::fs;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use fractint_core::{AnalysisReport, ClassifiedFragment, Label};

/// Canonical JSON with stable key order (struct declaration order).
pub fn to_json(report: &AnalysisReport) -> Result<String> {
    serde_json::to_string_pretty(report).context("report serialization failed")
}

/// Parse a JSON report back; inverse of [`to_json`].
pub fn from_json(text: &str) -> Result<AnalysisReport> {
    serde_json::from_str(text).context("report parse failed")
}

/// Write the JSON report to `destination`. Returns bytes written.
pub fn write_json(report: &AnalysisReport, destination: &Path) -> Result<usize> {
    let body = to_json(report)?;
    fs::write(destination, &body)
        .with_context(|| format!("cannot write {}", destination.display()))?;
    Ok(body.len())
}

fn label_str(label: Label) -> &'static str {
    match label {
        Label::Ambient => "ambient",
        Label::Anomalous => "anomalous",
    }
}

fn push_fragment_row(out: &mut String, scope: &str, f: &ClassifiedFragment) {
    let bursty = match f.bursty {
        Some(true) => "true",
        Some(false) => "false",
        None => "na",
    };
    let _ = writeln!(
        out,
        "{scope}\t{}\t{}\t{}\t{}\t{:.9}\t{:.9}\t{:.9}\t{bursty}",
        f.n,
        f.key,
        label_str(f.label),
        f.count,
        f.ratio,
        f.static_score,
        f.running_score_sum,
    );
}

/// TSV sections of a report, as (file name, contents) pairs.
pub fn tsv_sections(report: &AnalysisReport) -> Vec<(&'static str, String)> {
    let frag_header =
        "scope\tn\tkey\tlabel\tcount\tratio\tstatic_score\trunning_score_sum\tbursty\n";

    let mut ambient = String::from(frag_header);
    for scale in &report.ambient {
        for f in &scale.fragments {
            push_fragment_row(&mut ambient, "document", f);
        }
    }

    let mut anomalous = String::from(frag_header);
    for scale in &report.anomalous {
        for f in &scale.fragments {
            push_fragment_row(&mut anomalous, "document", f);
        }
    }

    let mut unfolding = String::from(frag_header);
    for interval in &report.unfolding.intervals {
        let scope = format!("interval-{}", interval.interval.index);
        for lists in &interval.scales {
            for f in lists.ambient.iter().chain(lists.anomalous.iter()) {
                push_fragment_row(&mut unfolding, &scope, f);
            }
        }
    }

    let mut series = String::from("tau\trunning_intentionality\n");
    for (tau, value) in &report.series.points {
        let _ = writeln!(series, "{tau}\t{value:.9}");
    }

    let mut comparison = String::from("prefix\tmethod_a\tmethod_b\toverlap\n");
    for cp in &report.comparison.checkpoints {
        for i in 0..4 {
            for j in (i + 1)..4 {
                let _ = writeln!(
                    comparison,
                    "{}\t{}\t{}\t{:.6}",
                    cp.prefix,
                    report.comparison.methods[i],
                    report.comparison.methods[j],
                    cp.overlap[i][j],
                );
            }
        }
    }

    vec![
        ("ambient.tsv", ambient),
        ("anomalous.tsv", anomalous),
        ("unfolding.tsv", unfolding),
        ("series.tsv", series),
        ("comparison.tsv", comparison),
    ]
}

/// Write the TSV sections into directory `destination`. Returns bytes
/// written.
pub fn write_tsv(report: &AnalysisReport, destination: &Path) -> Result<usize> {
    fs::create_dir_all(destination)
        .with_context(|| format!("cannot create {}", destination.display()))?;
    let mut bytes = 0;
    for (name, body) in tsv_sections(report) {
        let path = destination.join(name);
        fs::write(&path, &body).with_context(|| format!("cannot write {}", path.display()))?;
        bytes += body.len();
    }
    Ok(bytes)
}

/// Time-series TSV alone (`tau`, value per line).
pub fn series_tsv(report: &AnalysisReport) -> String {
    tsv_sections(report)
        .into_iter()
        .find(|(name, _)| *name == "series.tsv")
        .map(|(_, body)| body)
        .unwrap_or_default()
}
