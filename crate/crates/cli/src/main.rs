use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fractint_core::{
    compare_methods, running_series, unfold_episode, IntentConfig, ReportOptions, WorkModel,
};

use fractint::export;
use fractint::fetch;
use fractint::pipeline;

/// Fractionate narrative text into multi-scale n-gram streams and score
/// fragment intentionality.
#[derive(Parser)]
#[command(name = "fractint", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print progress diagnostics to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report: rankings, unfolding, series and comparison.
    Analyze(AnalyzeArgs),
    /// Interval-by-interval ambient/anomalous fragment lists only.
    Unfold(DocArgs),
    /// Method-overlap table across prefix checkpoints.
    Compare(CompareArgs),
    /// Per-sentence running intentionality as TSV.
    Series(SeriesArgs),
    /// Download a text over HTTP into the local cache.
    Fetch(FetchArgs),
}

/// Model parameters, each overridable by flag or FRACTINT_* environment
/// variable (flags win).
#[derive(Args, Clone)]
struct ModelArgs {
    /// Sentences per coherence interval.
    #[arg(long, env = "FRACTINT_COHERENCE_LEN", default_value_t = 45)]
    coherence_len: usize,

    /// Threshold frequency phi0 (occurrences per sentence).
    #[arg(long, env = "FRACTINT_PHI0", default_value_t = 1.0 / 45.0)]
    phi0: f64,

    /// Sigmoid offset rho.
    #[arg(long, env = "FRACTINT_RHO", default_value_t = 1.0)]
    rho: f64,

    /// Reciprocal coherence length lambda (per sentence).
    #[arg(long, env = "FRACTINT_LAMBDA", default_value_t = 1.0 / 45.0)]
    lambda: f64,

    /// Spacer cutoff on the occurrence ratio.
    #[arg(long, env = "FRACTINT_PADDING_RATIO", default_value_t = 10.0)]
    padding_ratio: f64,

    /// Minimum 1-gram length for ranking eligibility.
    #[arg(long, env = "FRACTINT_MIN_WORD_LEN", default_value_t = 5)]
    min_word_len: usize,

    /// Largest n-gram scale (1..=8).
    #[arg(long, env = "FRACTINT_N_MAX", default_value_t = 6)]
    n_max: usize,

    /// Ambient/anomalous boundary on the occurrence ratio.
    #[arg(long, env = "FRACTINT_AMBIENT_RATIO", default_value_t = 0.5)]
    ambient_ratio: f64,

    /// Work units per letter.
    #[arg(long, env = "FRACTINT_LETTER_COST", default_value_t = 1.0)]
    letter_cost: f64,

    /// Extra work per capitalized letter (fraction of letter cost).
    #[arg(long, env = "FRACTINT_CAPITAL_PREMIUM", default_value_t = 0.2)]
    capital_premium: f64,

    /// Cut text outside the Project Gutenberg START/END markers.
    #[arg(long, env = "FRACTINT_STRIP_GUTENBERG")]
    strip_gutenberg: bool,

    /// Maximum fragments per scale per label in reports (0 = unlimited).
    #[arg(long, env = "FRACTINT_LIST_CAP", default_value_t = 150)]
    list_cap: usize,
}

impl ModelArgs {
    fn intent(&self) -> IntentConfig {
        IntentConfig {
            coherence_len: self.coherence_len,
            phi0: self.phi0,
            rho: self.rho,
            lambda: self.lambda,
            padding_ratio: self.padding_ratio,
            min_word_len: self.min_word_len,
            n_max: self.n_max,
            ambient_ratio: self.ambient_ratio,
        }
    }

    fn work(&self) -> WorkModel {
        WorkModel {
            letter_cost: self.letter_cost,
            capital_premium: self.capital_premium,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input text files (UTF-8 plain text).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Output file (JSON) or directory (TSV / multiple inputs). Stdout when
    /// omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "tsv"])]
    format: String,

    /// Top-K list size for the method comparison.
    #[arg(long, env = "FRACTINT_COMPARISON_K", default_value_t = 50)]
    comparison_k: usize,

    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct DocArgs {
    /// Input text file (UTF-8 plain text).
    input: PathBuf,

    /// Output file. Stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "tsv"])]
    format: String,

    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct SeriesArgs {
    /// Input text file (UTF-8 plain text).
    input: PathBuf,

    /// Output file. Stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,

    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Input text file (UTF-8 plain text).
    input: PathBuf,

    /// Output file. Stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Ranking size K for the overlap measure.
    #[arg(long = "top-k", env = "FRACTINT_COMPARISON_K", default_value_t = 50)]
    top_k: usize,

    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct FetchArgs {
    /// URL to download (HTTP GET).
    url: String,

    /// Cache directory; downloads are keyed by URL hash and never repeated.
    #[arg(long, env = "FRACTINT_CACHE_DIR", default_value = ".fractint-cache")]
    cache_dir: PathBuf,
}

fn emit(body: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_analyze(args: &AnalyzeArgs, verbose: u8) -> Result<()> {
    let cfg = args.model.intent();
    let model = args.model.work();
    let options = ReportOptions {
        list_cap: args.model.list_cap,
        comparison_k: args.comparison_k,
    };
    if args.inputs.len() > 1 {
        let out_dir = args
            .output
            .clone()
            .ok_or_else(|| anyhow::anyhow!("-o DIR is required with multiple inputs"))?;
        std::fs::create_dir_all(&out_dir)
            .with_context(|| format!("cannot create {}", out_dir.display()))?;
        // One worker per document; documents share nothing mutable.
        let results: Vec<Result<(PathBuf, usize)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = args
                .inputs
                .iter()
                .map(|input| {
                    let cfg = &cfg;
                    let model = &model;
                    let options = &options;
                    let out_dir = &out_dir;
                    let format = args.format.as_str();
                    let strip = args.model.strip_gutenberg;
                    scope.spawn(move || -> Result<(PathBuf, usize)> {
                        let report = pipeline::analyze_file(input, strip, cfg, model, options)?;
                        let stem = input
                            .file_stem()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_else(|| "report".into());
                        if format == "json" {
                            let path = out_dir.join(format!("{stem}.json"));
                            let bytes = export::write_json(&report, &path)?;
                            Ok((path, bytes))
                        } else {
                            let dir = out_dir.join(stem);
                            let bytes = export::write_tsv(&report, &dir)?;
                            Ok((dir, bytes))
                        }
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for result in results {
            let (path, bytes) = result?;
            if verbose > 0 {
                eprintln!("wrote {} ({bytes} bytes)", path.display());
            }
        }
        return Ok(());
    }

    let input = &args.inputs[0];
    let report = pipeline::analyze_file(input, args.model.strip_gutenberg, &cfg, &model, &options)?;
    match (args.format.as_str(), &args.output) {
        ("json", out) => {
            let body = export::to_json(&report)?;
            emit(&(body + "\n"), out.as_deref())
        }
        ("tsv", Some(dir)) => {
            let bytes = export::write_tsv(&report, dir)?;
            if verbose > 0 {
                eprintln!("wrote {} ({bytes} bytes)", dir.display());
            }
            Ok(())
        }
        ("tsv", None) => {
            let mut all = String::new();
            for (name, body) in export::tsv_sections(&report) {
                all.push_str(&format!("# {name}\n{body}"));
            }
            emit(&all, None)
        }
        _ => unreachable!("format validated by clap"),
    }
}

fn run_unfold(args: &DocArgs) -> Result<()> {
    let cfg = args.model.intent();
    let model = args.model.work();
    let doc = pipeline::read_document(&args.input, args.model.strip_gutenberg)?;
    let analyzed = pipeline::ingest(&doc, &cfg)?;
    let unfolding = unfold_episode(&analyzed.ledger, &cfg, &model);
    if args.format == "json" {
        let body = serde_json::to_string_pretty(&unfolding).context("serialize unfolding")?;
        emit(&(body + "\n"), args.output.as_deref())
    } else {
        let mut body = String::from(
            "scope\tn\tkey\tlabel\tcount\tratio\tstatic_score\trunning_score_sum\tbursty\n",
        );
        for interval in &unfolding.intervals {
            for lists in &interval.scales {
                for (label, frags) in
                    [("ambient", &lists.ambient), ("anomalous", &lists.anomalous)]
                {
                    for f in frags {
                        let bursty = match f.bursty {
                            Some(true) => "true",
                            Some(false) => "false",
                            None => "na",
                        };
                        body.push_str(&format!(
                            "interval-{}\t{}\t{}\t{label}\t{}\t{:.9}\t{:.9}\t{:.9}\t{bursty}\n",
                            interval.interval.index,
                            lists.n,
                            f.key,
                            f.count,
                            f.ratio,
                            f.static_score,
                            f.running_score_sum,
                        ));
                    }
                }
            }
        }
        emit(&body, args.output.as_deref())
    }
}

fn run_compare(args: &CompareArgs) -> Result<()> {
    let cfg = args.model.intent();
    let model = args.model.work();
    let doc = pipeline::read_document(&args.input, args.model.strip_gutenberg)?;
    let analyzed = pipeline::ingest(&doc, &cfg)?;
    let cmp = compare_methods(&analyzed.ledger, &cfg, &model, args.top_k);
    let mut body = String::from("prefix\tmethod_a\tmethod_b\toverlap\n");
    for cp in &cmp.checkpoints {
        for i in 0..4 {
            for j in (i + 1)..4 {
                body.push_str(&format!(
                    "{}\t{}\t{}\t{:.6}\n",
                    cp.prefix, cmp.methods[i], cmp.methods[j], cp.overlap[i][j]
                ));
            }
        }
    }
    emit(&body, args.output.as_deref())
}

fn run_series(args: &SeriesArgs) -> Result<()> {
    let cfg = args.model.intent();
    let model = args.model.work();
    let doc = pipeline::read_document(&args.input, args.model.strip_gutenberg)?;
    let analyzed = pipeline::ingest(&doc, &cfg)?;
    let series = running_series(&analyzed.sentences, &analyzed.ledger, &cfg, &model);
    let mut body = String::from("tau\trunning_intentionality\n");
    for (tau, value) in &series.points {
        body.push_str(&format!("{tau}\t{value:.9}\n"));
    }
    emit(&body, args.output.as_deref())
}

fn run_fetch(args: &FetchArgs) -> Result<()> {
    let path = fetch::fetch(&args.url, &args.cache_dir)?;
    println!("{}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => run_analyze(args, cli.verbose),
        Command::Unfold(args) => run_unfold(args),
        Command::Compare(args) => run_compare(args),
        Command::Series(args) => run_series(args),
        Command::Fetch(args) => run_fetch(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
