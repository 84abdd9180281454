//! Results, statistics and per-year files in CSV and JSON.
//!
//! A results CSV starts with one `#` comment line carrying the run settings,
//! followed by a header and one row per document. The JSON form carries the
//! same settings and rows in one object. Statistics are written as JSON or
//! as a long CSV table with columns `section,name,field,value`.

use std::fmt;
use std::str::FromStr;

use lexgrade_core::stats::QUANTILE_CONVENTION;
use lexgrade_core::{
    CorrelationMatrix, GradeVector, IndexKind, LinsearMode, SummaryStats, SyllableRule,
    TextMetrics, YearAggregate,
};
use serde::{Deserialize, Serialize};

use crate::corpus::{by_year, CorpusStatistics, DocumentRow, Section};

pub const TOOL: &str = "lexgrade";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Text rendition the fetcher retrieves.
pub const TEXT_RENDITION: &str = "EUR-Lex HTML, English, non-consolidated";

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("results row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("malformed results file: {0}")]
    Malformed(String),
    #[error("malformed statistics file: {0}")]
    MalformedStats(String),
    #[error("cannot serialize output: {0}")]
    Serialize(String),
}

/// Settings a results file was produced with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    pub tool: String,
    pub version: String,
    pub linsear_mode: String,
    pub syllable_rule: String,
}

impl RunMeta {
    pub fn new(linsear_mode: LinsearMode, syllable_rule: SyllableRule) -> Self {
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            linsear_mode: linsear_mode.as_str().into(),
            syllable_rule: syllable_rule.as_str().into(),
        }
    }

    fn unknown() -> Self {
        Self {
            tool: TOOL.into(),
            version: "unknown".into(),
            linsear_mode: "unknown".into(),
            syllable_rule: "unknown".into(),
        }
    }

    fn comment_line(&self) -> String {
        format!(
            "# {} {} linsear_mode={} syllable_rule={}\n",
            self.tool, self.version, self.linsear_mode, self.syllable_rule
        )
    }

    fn from_comment(line: &str) -> Option<Self> {
        let mut parts = line.strip_prefix('#')?.split_whitespace();
        let mut meta = Self::unknown();
        meta.tool = parts.next()?.into();
        meta.version = parts.next()?.into();
        for part in parts {
            match part.split_once('=') {
                Some(("linsear_mode", v)) => meta.linsear_mode = v.into(),
                Some(("syllable_rule", v)) => meta.syllable_rule = v.into(),
                _ => {}
            }
        }
        Some(meta)
    }
}

/// One document of a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub id: String,
    pub doc_type: String,
    pub year: i32,
    pub domain: String,
    pub sentence_count: usize,
    pub word_count: usize,
    pub syllable_count: usize,
    pub polysyllable_count: usize,
    pub character_count: usize,
    pub letter_count: usize,
    pub easy_word_count: usize,
    pub hard_word_count: usize,
    pub g1_flesch_kincaid: i32,
    pub g2_smog: i32,
    pub g3_ari: i32,
    pub g4_coleman_liau: i32,
    pub g5_linsear: i32,
    pub sum_variable: f64,
}

impl ResultRow {
    pub fn grades(&self) -> GradeVector {
        GradeVector {
            flesch_kincaid: self.g1_flesch_kincaid,
            smog: self.g2_smog,
            ari: self.g3_ari,
            coleman_liau: self.g4_coleman_liau,
            linsear_write: self.g5_linsear,
        }
    }

    pub fn metrics(&self) -> TextMetrics {
        TextMetrics {
            sentence_count: self.sentence_count,
            word_count: self.word_count,
            syllable_count: self.syllable_count,
            polysyllable_count: self.polysyllable_count,
            character_count: self.character_count,
            letter_count: self.letter_count,
            easy_word_count: self.easy_word_count,
            hard_word_count: self.hard_word_count,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if !(1000..=9999).contains(&self.year) {
            return Err(format!("invalid year {}: expected four digits", self.year));
        }
        let expected = self.grades().sum_variable().value();
        if !self.sum_variable.is_finite() || (self.sum_variable - expected).abs() > SUM_TOLERANCE {
            return Err(format!(
                "sum_variable {} does not match the mean of g1..g3 ({expected})",
                self.sum_variable
            ));
        }
        Ok(())
    }
}

impl From<&DocumentRow> for ResultRow {
    fn from(row: &DocumentRow) -> Self {
        let m = &row.metrics;
        let g = &row.grades;
        Self {
            id: row.record.id.clone(),
            doc_type: row.record.doc_type.as_str().into(),
            year: row.record.year,
            domain: row.record.domain.as_str().into(),
            sentence_count: m.sentence_count,
            word_count: m.word_count,
            syllable_count: m.syllable_count,
            polysyllable_count: m.polysyllable_count,
            character_count: m.character_count,
            letter_count: m.letter_count,
            easy_word_count: m.easy_word_count,
            hard_word_count: m.hard_word_count,
            g1_flesch_kincaid: g.flesch_kincaid,
            g2_smog: g.smog,
            g3_ari: g.ari,
            g4_coleman_liau: g.coleman_liau,
            g5_linsear: g.linsear_write,
            sum_variable: g.sum_variable().value(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Results {
    #[serde(flatten)]
    pub meta: RunMeta,
    pub documents: Vec<ResultRow>,
}

impl Results {
    pub fn grades(&self) -> Vec<GradeVector> {
        self.documents.iter().map(ResultRow::grades).collect()
    }

    pub fn write(&self, format: Format) -> Result<String, ReportError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut out = self.meta.comment_line();
                let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                writer.write_record(RESULT_COLUMNS).map_err(ser)?;
                for row in &self.documents {
                    writer.serialize(row).map_err(ser)?;
                }
                let bytes = writer.into_inner().map_err(ser)?;
                out.push_str(&String::from_utf8(bytes).map_err(ser)?);
                Ok(out)
            }
        }
    }

    /// Parses either format; JSON is recognized by a leading `{`.
    pub fn parse(content: &str) -> Result<Self, ReportError> {
        let results = if content.trim_start().starts_with('{') {
            serde_json::from_str::<Results>(content).map_err(|e| ReportError::Malformed(e.to_string()))?
        } else {
            parse_results_csv(content)?
        };
        for (i, row) in results.documents.iter().enumerate() {
            row.validate().map_err(|message| ReportError::Row { row: i + 1, message })?;
        }
        Ok(results)
    }
}

pub const RESULT_COLUMNS: [&str; 18] = [
    "id",
    "doc_type",
    "year",
    "domain",
    "sentence_count",
    "word_count",
    "syllable_count",
    "polysyllable_count",
    "character_count",
    "letter_count",
    "easy_word_count",
    "hard_word_count",
    "g1_flesch_kincaid",
    "g2_smog",
    "g3_ari",
    "g4_coleman_liau",
    "g5_linsear",
    "sum_variable",
];

fn ser(e: impl fmt::Display) -> ReportError {
    ReportError::Serialize(e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, ReportError> {
    let mut s = serde_json::to_string_pretty(value).map_err(ser)?;
    s.push('\n');
    Ok(s)
}

fn parse_results_csv(content: &str) -> Result<Results, ReportError> {
    let meta = content
        .lines()
        .next()
        .and_then(RunMeta::from_comment)
        .unwrap_or_else(RunMeta::unknown);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(content.as_bytes());
    let headers = reader.headers().map_err(|e| ReportError::Malformed(e.to_string()))?.clone();
    if headers.iter().ne(RESULT_COLUMNS) {
        return Err(ReportError::Malformed(format!(
            "header must be {}",
            RESULT_COLUMNS.join(",")
        )));
    }
    let mut documents = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| ReportError::Row { row, message: e.to_string() })?;
        let parsed: ResultRow = record
            .deserialize(Some(&headers))
            .map_err(|e| ReportError::Row { row, message: e.to_string() })?;
        documents.push(parsed);
    }
    Ok(Results { meta, documents })
}

/// Corpus statistics of a results file, with the settings needed to audit
/// them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    #[serde(flatten)]
    pub meta: RunMeta,
    pub quantile_convention: String,
    pub text_rendition: String,
    #[serde(flatten)]
    pub statistics: CorpusStatistics,
}

impl StatsReport {
    pub fn from_results(results: &Results) -> Self {
        Self {
            meta: results.meta.clone(),
            quantile_convention: QUANTILE_CONVENTION.into(),
            text_rendition: TEXT_RENDITION.into(),
            statistics: CorpusStatistics::from_grades(&results.grades()),
        }
    }

    pub fn write(&self, format: Format) -> Result<String, ReportError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => self.write_csv(),
        }
    }

    fn write_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |section: &str, name: &str, field: &str, value: String| {
            w.write_record([section, name, field, value.as_str()])
        };
        put("section", "name", "field", "value".into()).map_err(ser)?;
        let m = &self.meta;
        for (name, value) in [
            ("tool", &m.tool),
            ("version", &m.version),
            ("linsear_mode", &m.linsear_mode),
            ("syllable_rule", &m.syllable_rule),
            ("quantile_convention", &self.quantile_convention),
            ("text_rendition", &self.text_rendition),
        ] {
            put("meta", name, "", value.clone()).map_err(ser)?;
        }
        let s = &self.statistics;
        put("meta", "n", "", s.n.to_string()).map_err(ser)?;
        for (column, st) in &s.summary {
            for (field, value) in summary_fields(st) {
                put("summary", column, field, value).map_err(ser)?;
            }
        }
        match &s.correlations {
            Section::Computed(matrix) => {
                for (i, a) in matrix.labels.iter().enumerate() {
                    for (j, b) in matrix.labels.iter().enumerate() {
                        put("correlation", a.column(), b.column(), matrix.values[i][j].to_string())
                            .map_err(ser)?;
                    }
                }
            }
            Section::Omitted { reason } => put("correlation", "", "omitted", reason.clone()).map_err(ser)?,
        }
        match &s.alpha {
            Section::Computed(alpha) => put("alpha", "cronbach", "value", alpha.to_string()).map_err(ser)?,
            Section::Omitted { reason } => put("alpha", "cronbach", "omitted", reason.clone()).map_err(ser)?,
        }
        String::from_utf8(w.into_inner().map_err(ser)?).map_err(ser)
    }

    /// Parses either output format back into a report.
    pub fn parse(content: &str) -> Result<Self, ReportError> {
        if content.trim_start().starts_with('{') {
            serde_json::from_str(content).map_err(|e| ReportError::MalformedStats(e.to_string()))
        } else {
            parse_stats_csv(content).map_err(ReportError::MalformedStats)
        }
    }
}

fn summary_fields(s: &SummaryStats) -> [(&'static str, String); 8] {
    [
        ("n", s.n.to_string()),
        ("mean", s.mean.to_string()),
        ("standard_deviation", s.standard_deviation.to_string()),
        ("median", s.median.to_string()),
        ("q1", s.q1.to_string()),
        ("q3", s.q3.to_string()),
        ("min", s.min.to_string()),
        ("max", s.max.to_string()),
    ]
}

fn parse_stats_csv(content: &str) -> Result<StatsReport, String> {
    let mut reader = csv::Reader::from_reader(content.as_bytes());
    let mut meta = RunMeta::unknown();
    let mut quantile_convention = String::new();
    let mut text_rendition = String::new();
    let mut n = None;
    let mut summary: Vec<(String, SummaryStats)> = Vec::new();
    let mut matrix: Option<CorrelationMatrix> = None;
    let mut correlations = None;
    let mut alpha = None;
    let num = |v: &str| v.parse::<f64>().map_err(|e| format!("{v:?}: {e}"));

    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let [section, name, field, value] = [0, 1, 2, 3].map(|i| record.get(i).unwrap_or(""));
        match section {
            "meta" => match name {
                "tool" => meta.tool = value.into(),
                "version" => meta.version = value.into(),
                "linsear_mode" => meta.linsear_mode = value.into(),
                "syllable_rule" => meta.syllable_rule = value.into(),
                "quantile_convention" => quantile_convention = value.into(),
                "text_rendition" => text_rendition = value.into(),
                "n" => n = Some(value.parse::<usize>().map_err(|e| e.to_string())?),
                other => return Err(format!("unknown meta field {other:?}")),
            },
            "summary" => {
                if summary.last().is_none_or(|(c, _)| c != name) {
                    let empty = SummaryStats {
                        n: 0,
                        mean: 0.0,
                        standard_deviation: 0.0,
                        median: 0.0,
                        q1: 0.0,
                        q3: 0.0,
                        min: 0.0,
                        max: 0.0,
                    };
                    summary.push((name.into(), empty));
                }
                let s = &mut summary.last_mut().expect("pushed above").1;
                match field {
                    "n" => s.n = value.parse().map_err(|e: std::num::ParseIntError| e.to_string())?,
                    "mean" => s.mean = num(value)?,
                    "standard_deviation" => s.standard_deviation = num(value)?,
                    "median" => s.median = num(value)?,
                    "q1" => s.q1 = num(value)?,
                    "q3" => s.q3 = num(value)?,
                    "min" => s.min = num(value)?,
                    "max" => s.max = num(value)?,
                    other => return Err(format!("unknown summary field {other:?}")),
                }
            }
            "correlation" if field == "omitted" => {
                correlations = Some(Section::Omitted { reason: value.into() })
            }
            "correlation" => {
                let a = IndexKind::from_column(name).ok_or_else(|| format!("unknown column {name:?}"))?;
                let b = IndexKind::from_column(field).ok_or_else(|| format!("unknown column {field:?}"))?;
                let m = matrix.get_or_insert(CorrelationMatrix { labels: IndexKind::ALL, values: [[0.0; 5]; 5] });
                let pos = |k| IndexKind::ALL.iter().position(|&l| l == k).expect("known kind");
                m.values[pos(a)][pos(b)] = num(value)?;
            }
            "alpha" if field == "omitted" => alpha = Some(Section::Omitted { reason: value.into() }),
            "alpha" => alpha = Some(Section::Computed(num(value)?)),
            other => return Err(format!("unknown section {other:?}")),
        }
    }
    let correlations = match (matrix, correlations) {
        (Some(m), None) => Section::Computed(m),
        (None, Some(omitted)) => omitted,
        _ => return Err("correlation section missing or inconsistent".into()),
    };
    Ok(StatsReport {
        meta,
        quantile_convention,
        text_rendition,
        statistics: CorpusStatistics {
            n: n.ok_or("meta n missing")?,
            summary,
            correlations,
            alpha: alpha.ok_or("alpha section missing")?,
        },
    })
}

/// Per-year rows of the sum variable, ascending by year.
pub fn year_report(results: &Results) -> Result<Vec<YearAggregate>, ReportError> {
    let rows: Vec<(i32, GradeVector)> =
        results.documents.iter().map(|r| (r.year, r.grades())).collect();
    by_year(&rows).map_err(|e| ReportError::Malformed(e.to_string()))
}

pub fn write_year_report(rows: &[YearAggregate], format: Format) -> Result<String, ReportError> {
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["year", "count", "mean", "median"]).map_err(ser)?;
            for r in rows {
                w.write_record([
                    r.year.to_string(),
                    r.count.to_string(),
                    r.mean.to_string(),
                    r.median.to_string(),
                ])
                .map_err(ser)?;
            }
            String::from_utf8(w.into_inner().map_err(ser)?).map_err(ser)
        }
    }
}

pub fn parse_year_report(content: &str) -> Result<Vec<YearAggregate>, ReportError> {
    if content.trim_start().starts_with('[') {
        return serde_json::from_str(content).map_err(|e| ReportError::Malformed(e.to_string()));
    }
    let mut reader = csv::Reader::from_reader(content.as_bytes());
    reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| ReportError::Malformed(e.to_string()))
}
