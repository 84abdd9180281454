//! Batch analysis of a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use lexgrade_core::indices::grade_profile;
use lexgrade_core::stats::{self, grade_column, StatsError};
use lexgrade_core::{
    CorrelationMatrix, DegenerateText, GradeVector, IndexKind, LinsearMode, SummaryStats,
    SyllableRule, TextMetrics, TextProfile, YearAggregate,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clean::{clean_text, Boilerplate};
use crate::manifest::{DocumentRecord, Source};

/// Settings shared by every document of a run.
#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub linsear_mode: LinsearMode,
    pub syllable_rule: SyllableRule,
    pub boilerplate: Boilerplate,
}

/// Supplies the raw text of a record.
pub trait TextResolver: Sync {
    fn resolve(&self, record: &DocumentRecord) -> Result<String, ResolveError>;
}

#[derive(Debug, thiserror::Error)]
pub enum ResolveError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Resolves local sources relative to `root` and CELEX sources to
/// `root/<id>.txt`, the fetcher's cache layout.
#[derive(Debug, Clone)]
pub struct DirectoryResolver {
    root: PathBuf,
}

impl DirectoryResolver {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn path_for(&self, record: &DocumentRecord) -> PathBuf {
        match &record.source {
            Source::Local(p) => self.root.join(p),
            Source::Celex(id) => self.root.join(format!("{id}.txt")),
        }
    }
}

impl TextResolver for DirectoryResolver {
    fn resolve(&self, record: &DocumentRecord) -> Result<String, ResolveError> {
        let path = self.path_for(record);
        fs::read_to_string(&path).map_err(|source| ResolveError::Io { path, source })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("{id}: no text left after cleaning")]
    Empty { id: String },
    #[error("{id}: {reason}")]
    Degenerate { id: String, reason: DegenerateText },
}

/// Cleans, segments and grades one document's text.
pub fn analyze_document(
    record: &DocumentRecord,
    text: &str,
    options: &AnalysisOptions,
) -> Result<(TextMetrics, GradeVector), DocumentError> {
    let cleaned = clean_text(text, &options.boilerplate);
    if cleaned.trim().is_empty() {
        return Err(DocumentError::Empty { id: record.id.clone() });
    }
    let profile = TextProfile::new(&cleaned, options.syllable_rule);
    let grades = grade_profile(&profile, options.linsear_mode).map_err(|reason| {
        DocumentError::Degenerate { id: record.id.clone(), reason }
    })?;
    Ok((profile.metrics(), grades))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentRow {
    pub record: DocumentRecord,
    pub metrics: TextMetrics,
    pub grades: GradeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub id: String,
    pub reason: String,
}

/// A statistic that is either computed or omitted with a reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section<T> {
    Computed(T),
    Omitted { reason: String },
}

impl<T> Section<T> {
    fn from_result(r: Result<T, StatsError>) -> Self {
        match r {
            Ok(v) => Section::Computed(v),
            Err(StatsError::TooFewObservations { .. }) => Section::Omitted { reason: "n < 2".into() },
            Err(e) => Section::Omitted { reason: e.to_string() },
        }
    }

    pub fn computed(&self) -> Option<&T> {
        match self {
            Section::Computed(v) => Some(v),
            Section::Omitted { .. } => None,
        }
    }
}

pub const SUM_VARIABLE_COLUMN: &str = "sum_variable";

/// Corpus-level statistics over graded documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStatistics {
    pub n: usize,
    /// Summary per grade column and for the sum variable, keyed by column name.
    pub summary: Vec<(String, SummaryStats)>,
    pub correlations: Section<CorrelationMatrix>,
    /// Cronbach's alpha over the Flesch-Kincaid, SMOG and ARI columns.
    pub alpha: Section<f64>,
}

impl CorpusStatistics {
    pub fn from_grades(grades: &[GradeVector]) -> Self {
        let mut summary = Vec::new();
        if !grades.is_empty() {
            for kind in IndexKind::ALL {
                let s = stats::describe(&grade_column(grades, kind)).expect("finite, non-empty");
                summary.push((kind.column().to_string(), s));
            }
            let sums: Vec<f64> = grades.iter().map(|g| g.sum_variable().value()).collect();
            summary.push((
                SUM_VARIABLE_COLUMN.to_string(),
                stats::describe(&sums).expect("finite, non-empty"),
            ));
        }
        let components: Vec<Vec<f64>> = [IndexKind::FleschKincaid, IndexKind::Smog, IndexKind::Ari]
            .into_iter()
            .map(|k| grade_column(grades, k))
            .collect();
        Self {
            n: grades.len(),
            summary,
            correlations: Section::from_result(stats::correlation_matrix(grades)),
            alpha: Section::from_result(stats::cronbach_alpha(&components)),
        }
    }

    pub fn summary_for(&self, column: &str) -> Option<&SummaryStats> {
        self.summary.iter().find(|(c, _)| c == column).map(|(_, s)| s)
    }
}

/// Per-year rows of the sum variable.
pub fn by_year(rows: &[(i32, GradeVector)]) -> Result<Vec<YearAggregate>, StatsError> {
    let pairs: Vec<(i32, f64)> = rows.iter().map(|(y, g)| (*y, g.sum_variable().value())).collect();
    stats::per_year_aggregate(&pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport {
    /// Successfully analyzed documents, in manifest order.
    pub rows: Vec<DocumentRow>,
    pub failures: Vec<Failure>,
    pub statistics: CorpusStatistics,
    pub by_year: Vec<YearAggregate>,
}

impl CorpusReport {
    pub fn grades(&self) -> Vec<GradeVector> {
        self.rows.iter().map(|r| r.grades).collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("manifest is empty")]
    EmptyManifest,
    #[error("no document could be analyzed ({} failures)", .failures.len())]
    NothingAnalyzed { failures: Vec<Failure> },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Analyzes every record, in parallel, and assembles the corpus report.
/// Rows follow manifest order; documents that fail are listed in
/// `failures`.
pub fn analyze_corpus(
    records: &[DocumentRecord],
    resolver: &dyn TextResolver,
    options: &AnalysisOptions,
) -> Result<CorpusReport, CorpusError> {
    if records.is_empty() {
        return Err(CorpusError::EmptyManifest);
    }
    let outcomes: Vec<Result<DocumentRow, Failure>> = records
        .par_iter()
        .map(|record| {
            let fail = |reason: String| Failure { id: record.id.clone(), reason };
            let text = resolver.resolve(record).map_err(|e| fail(e.to_string()))?;
            let (metrics, grades) =
                analyze_document(record, &text, options).map_err(|e| fail(e.to_string()))?;
            Ok(DocumentRow { record: record.clone(), metrics, grades })
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(f) => failures.push(f),
        }
    }
    if rows.is_empty() {
        return Err(CorpusError::NothingAnalyzed { failures });
    }

    let grades: Vec<GradeVector> = rows.iter().map(|r| r.grades).collect();
    let years: Vec<(i32, GradeVector)> = rows.iter().map(|r| (r.record.year, r.grades)).collect();
    Ok(CorpusReport {
        statistics: CorpusStatistics::from_grades(&grades),
        by_year: by_year(&years)?,
        rows,
        failures,
    })
}

/// Reads an optional extra boilerplate file: one pattern per line, `#`
/// comments and blank lines ignored.
pub fn load_boilerplate(path: Option<&Path>) -> Result<Boilerplate, String> {
    let mut b = Boilerplate::default();
    if let Some(path) = path {
        let content = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let patterns = content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        b.extend(patterns).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(b)
}
