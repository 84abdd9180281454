//! The `lexgrade` command line.
//!
//! Exit status is 0 on success, 1 when any document failed to fetch or
//! analyze, and 2 for configuration errors and malformed input files.
//! Diagnostics go to standard error only.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexgrade_core::{LinsearMode, SyllableRule};

use crate::corpus::{analyze_corpus, load_boilerplate, AnalysisOptions, CorpusError, DirectoryResolver};
use crate::fetcher::{FetchConfig, FetchStatus, Fetcher};
use crate::manifest::{load_manifest, Source};
use crate::report::{self, Format, ReportError, Results, RunMeta, StatsReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOCUMENT_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "lexgrade", version, about = "Readability grades for corpora of legal texts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download manifest documents by CELEX id into a text cache.
    Fetch(FetchArgs),
    /// Grade every manifest document and write one row per document.
    Analyze(AnalyzeArgs),
    /// Summaries, correlations and Cronbach's alpha of a results file.
    Stats(ResultsArgs),
    /// Per-year plot data of the sum variable from a results file.
    Report(ResultsArgs),
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum FormatArg {
    #[default]
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum LinsearArg {
    /// Average over consecutive 100-word samples.
    #[default]
    Windowed,
    /// First 100 words only.
    #[value(alias = "first-sample-compat")]
    Compat,
}

impl From<LinsearArg> for LinsearMode {
    fn from(m: LinsearArg) -> Self {
        match m {
            LinsearArg::Windowed => LinsearMode::Windowed,
            LinsearArg::Compat => LinsearMode::FirstSampleCompat,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum SyllableArg {
    #[default]
    Hyphenation,
    VowelGroup,
}

impl From<SyllableArg> for SyllableRule {
    fn from(s: SyllableArg) -> Self {
        match s {
            SyllableArg::Hyphenation => SyllableRule::Hyphenation,
            SyllableArg::VowelGroup => SyllableRule::VowelGroup,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, alias = "texts")]
    pub cache: PathBuf,
    /// Minimum gap between request starts, in milliseconds.
    #[arg(long, env = "LEXGRADE_DELAY_MS", default_value_t = 1000)]
    pub delay_ms: u64,
    #[arg(long, env = "LEXGRADE_CONCURRENCY", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub concurrency: u64,
    #[arg(long, env = "LEXGRADE_RETRIES", default_value_t = 3)]
    pub retries: u32,
    /// Wait before the first retry, in milliseconds; doubled per retry.
    #[arg(long, env = "LEXGRADE_BACKOFF_MS", default_value_t = 2000)]
    pub backoff_ms: u64,
    #[arg(long, env = "LEXGRADE_TIMEOUT_SECS", default_value_t = 60)]
    pub timeout_secs: u64,
    #[arg(long, env = "LEXGRADE_BASE_URL", default_value = crate::fetcher::DEFAULT_BASE_URL)]
    pub base_url: String,
    #[arg(long, env = "LEXGRADE_USER_AGENT")]
    pub user_agent: Option<String>,
    /// Download again even when a cached copy exists.
    #[arg(long)]
    pub refresh: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("text_root").required(true).args(["texts", "cache"]))]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory holding the document texts.
    #[arg(long)]
    pub texts: Option<PathBuf>,
    /// Fetcher cache directory (`<id>.txt` files).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub linsear_mode: LinsearArg,
    #[arg(long, value_enum, default_value_t)]
    pub syllables: SyllableArg,
    /// Extra boilerplate line patterns, one regular expression per line.
    #[arg(long)]
    pub boilerplate: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ResultsArgs {
    /// Results file written by `analyze` (CSV or JSON).
    #[arg(long)]
    pub results: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A failure that ends the run with the given exit status.
#[derive(Debug)]
struct Exit {
    code: u8,
    message: String,
}

fn config_error(message: impl std::fmt::Display) -> Exit {
    Exit { code: EXIT_CONFIG, message: message.to_string() }
}

fn emit(output: &OutputArgs, content: &str) -> Result<(), Exit> {
    match &output.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| config_error(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| config_error(format!("cannot write to standard output: {e}"))),
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))
}

fn fetch(args: &FetchArgs) -> Result<u8, Exit> {
    let records = load_manifest(&args.manifest).map_err(config_error)?;
    let mut ids = Vec::new();
    for record in &records {
        match &record.source {
            Source::Celex(id) => ids.push(id.clone()),
            Source::Local(path) => {
                eprintln!("skipped: {}: local source {}", record.id, path.display())
            }
        }
    }
    let mut config = FetchConfig::new(&args.cache);
    config.base_url = args.base_url.clone();
    config.delay = Duration::from_millis(args.delay_ms);
    config.concurrency = usize::try_from(args.concurrency).unwrap_or(usize::MAX);
    config.retries = args.retries;
    config.backoff = Duration::from_millis(args.backoff_ms);
    config.timeout = Duration::from_secs(args.timeout_secs);
    config.refresh = args.refresh;
    if let Some(agent) = &args.user_agent {
        config.user_agent = agent.clone();
    }
    let fetcher = Fetcher::new(config).map_err(config_error)?;
    let results = fetcher.fetch_all(&ids);

    let mut failed = 0;
    for r in &results {
        match &r.status {
            FetchStatus::FetchedFresh | FetchStatus::FromCache => {}
            FetchStatus::NotFound => {
                failed += 1;
                eprintln!("failed: {}: not found", r.id);
            }
            FetchStatus::TransportError { attempts, message } => {
                failed += 1;
                eprintln!("failed: {}: {message} after {attempts} attempt(s)", r.id);
            }
        }
    }
    let content = match Format::from(args.output.format) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&results).map_err(config_error)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut put = |fields: [&str; 4]| w.write_record(fields).map_err(config_error);
            put(["id", "status", "text_path", "retrieved_at"])?;
            for r in &results {
                let status = match r.status {
                    FetchStatus::FetchedFresh => "fetched_fresh",
                    FetchStatus::FromCache => "from_cache",
                    FetchStatus::NotFound => "not_found",
                    FetchStatus::TransportError { .. } => "transport_error",
                };
                let path = r.text_path.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
                let at = r.retrieved_at.map(|t| t.to_rfc3339()).unwrap_or_default();
                put([&r.id, status, &path, &at])?;
            }
            String::from_utf8(w.into_inner().map_err(config_error)?).map_err(config_error)?
        }
    };
    emit(&args.output, &content)?;
    eprintln!("fetched {} of {} document(s)", results.len() - failed, results.len());
    Ok(if failed > 0 { EXIT_DOCUMENT_FAILED } else { EXIT_OK })
}

fn analyze(args: &AnalyzeArgs) -> Result<u8, Exit> {
    let records = load_manifest(&args.manifest).map_err(config_error)?;
    let root = args.texts.as_ref().or(args.cache.as_ref()).expect("clap requires one root");
    let resolver = DirectoryResolver::new(root);
    let options = AnalysisOptions {
        linsear_mode: args.linsear_mode.into(),
        syllable_rule: args.syllables.into(),
        boilerplate: load_boilerplate(args.boilerplate.as_deref()).map_err(config_error)?,
    };
    let report = match analyze_corpus(&records, &resolver, &options) {
        Ok(r) => r,
        Err(CorpusError::NothingAnalyzed { failures }) => {
            for f in &failures {
                eprintln!("failed: {}: {}", f.id, f.reason);
            }
            return Err(Exit {
                code: EXIT_DOCUMENT_FAILED,
                message: "no document could be analyzed".into(),
            });
        }
        Err(e) => return Err(config_error(e)),
    };
    for f in &report.failures {
        eprintln!("failed: {}: {}", f.id, f.reason);
    }
    let results = Results {
        meta: RunMeta::new(options.linsear_mode, options.syllable_rule),
        documents: report.rows.iter().map(Into::into).collect(),
    };
    let content = results.write(args.output.format.into()).map_err(config_error)?;
    emit(&args.output, &content)?;
    eprintln!(
        "analyzed {} of {} document(s)",
        report.rows.len(),
        report.rows.len() + report.failures.len()
    );
    Ok(if report.failures.is_empty() { EXIT_OK } else { EXIT_DOCUMENT_FAILED })
}

fn load_results(path: &Path) -> Result<Results, Exit> {
    Results::parse(&read(path)?).map_err(|e: ReportError| config_error(format!("{}: {e}", path.display())))
}

fn stats(args: &ResultsArgs) -> Result<u8, Exit> {
    let results = load_results(&args.results)?;
    let stats = StatsReport::from_results(&results);
    if let Some(reason) = omitted(&stats) {
        eprintln!("note: correlations omitted: {reason}");
    }
    emit(&args.output, &stats.write(args.output.format.into()).map_err(config_error)?)?;
    Ok(EXIT_OK)
}

fn omitted(stats: &StatsReport) -> Option<&str> {
    match &stats.statistics.correlations {
        crate::corpus::Section::Omitted { reason } => Some(reason),
        crate::corpus::Section::Computed(_) => None,
    }
}

fn year_report(args: &ResultsArgs) -> Result<u8, Exit> {
    let results = load_results(&args.results)?;
    let rows = report::year_report(&results).map_err(config_error)?;
    emit(
        &args.output,
        &report::write_year_report(&rows, args.output.format.into()).map_err(config_error)?,
    )?;
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns its exit status.
pub fn run(cli: Cli) -> ExitCode {
    let outcome = match &cli.command {
        Command::Fetch(a) => fetch(a),
        Command::Analyze(a) => analyze(a),
        Command::Stats(a) => stats(a),
        Command::Report(a) => year_report(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Exit { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
