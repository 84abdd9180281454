//! Corpus manifests.
//!
//! A manifest is either a CSV file with the header
//! `id,doc_type,year,title,domain,source` (any column order) or a JSON array
//! of objects with the same keys. `source` may be
//!
//! * `celex:<ID>` or a bare CELEX identifier: the text is fetched by id,
//! * a path, resolved against the texts directory,
//! * empty: fetch by `id` when it is a CELEX identifier, otherwise `<id>.txt`.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fetcher::is_celex;

pub const COLUMNS: [&str; 6] = ["id", "doc_type", "year", "title", "domain", "source"];

/// Document types admitted to the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DocType {
    Directive,
    Regulation,
    Decision,
    #[serde(rename = "COM")]
    Com,
    #[serde(rename = "SWD")]
    Swd,
    Recommendation,
    #[serde(rename = "JOIN")]
    Join,
}

impl DocType {
    pub const ALL: [DocType; 7] = [
        DocType::Directive,
        DocType::Regulation,
        DocType::Decision,
        DocType::Com,
        DocType::Swd,
        DocType::Recommendation,
        DocType::Join,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Directive => "Directive",
            Self::Regulation => "Regulation",
            Self::Decision => "Decision",
            Self::Com => "COM",
            Self::Swd => "SWD",
            Self::Recommendation => "Recommendation",
            Self::Join => "JOIN",
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocType {
    type Err = RowError;

    fn from_str(s: &str) -> Result<Self, RowError> {
        let t = s.trim();
        let alias = match t.to_ascii_lowercase().as_str() {
            "communication" => Some(Self::Com),
            "staff working document" => Some(Self::Swd),
            "joint declaration" => Some(Self::Join),
            _ => None,
        };
        alias
            .or_else(|| Self::ALL.into_iter().find(|d| d.as_str().eq_ignore_ascii_case(t)))
            .ok_or_else(|| RowError::UnknownDocType(t.to_string()))
    }
}

/// Policy domains of the Digital Single Market.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    GeneralRules,
    ElectronicCommunications,
    PersonalDataPrivacy,
    CopyrightAudiovisual,
    DataEconomyProtection,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::GeneralRules,
        Domain::ElectronicCommunications,
        Domain::PersonalDataPrivacy,
        Domain::CopyrightAudiovisual,
        Domain::DataEconomyProtection,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::GeneralRules => "general_rules",
            Self::ElectronicCommunications => "electronic_communications",
            Self::PersonalDataPrivacy => "personal_data_privacy",
            Self::CopyrightAudiovisual => "copyright_audiovisual",
            Self::DataEconomyProtection => "data_economy_protection",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn squash(s: &str) -> String {
    s.chars().filter(char::is_ascii_alphanumeric).map(|c| c.to_ascii_lowercase()).collect()
}

impl FromStr for Domain {
    type Err = RowError;

    fn from_str(s: &str) -> Result<Self, RowError> {
        let key = squash(s);
        Self::ALL
            .into_iter()
            .find(|d| squash(d.as_str()) == key)
            .ok_or_else(|| RowError::UnknownDomain(s.trim().to_string()))
    }
}

/// Where a document's text comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Local(PathBuf),
    Celex(String),
}

impl Source {
    fn parse(raw: &str, id: &str) -> Self {
        let raw = raw.trim();
        if let Some(celex) = raw.strip_prefix("celex:") {
            return Source::Celex(celex.trim().to_string());
        }
        if raw.is_empty() {
            return if is_celex(id) {
                Source::Celex(id.to_string())
            } else {
                Source::Local(PathBuf::from(format!("{id}.txt")))
            };
        }
        if is_celex(raw) {
            Source::Celex(raw.to_string())
        } else {
            Source::Local(PathBuf::from(raw))
        }
    }

    pub fn celex(&self) -> Option<&str> {
        match self {
            Source::Celex(id) => Some(id),
            Source::Local(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub id: String,
    pub doc_type: DocType,
    pub year: i32,
    pub title: String,
    pub domain: Domain,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RowError {
    #[error("empty id")]
    EmptyId,
    #[error("missing value for {0}")]
    Missing(&'static str),
    #[error(
        "unknown doc_type {0:?}: expected one of Directive, Regulation, Decision, COM, SWD, \
         Recommendation, JOIN"
    )]
    UnknownDocType(String),
    #[error(
        "unknown domain {0:?}: expected one of general_rules, electronic_communications, \
         personal_data_privacy, copyright_audiovisual, data_economy_protection"
    )]
    UnknownDomain(String),
    #[error("invalid year {0:?}: expected four digits")]
    InvalidYear(String),
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("manifest CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("manifest JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("manifest JSON must be an array of objects")]
    NotAnArray,
    #[error("manifest is missing columns: {}", .0.join(", "))]
    MissingColumns(Vec<String>),
    #[error("manifest has unknown columns: {}", .0.join(", "))]
    UnknownColumns(Vec<String>),
    #[error("manifest row {row}: {error}")]
    Row { row: usize, error: RowError },
    #[error("manifest row {row}: duplicate id {id:?} (first seen in row {first})")]
    DuplicateId { id: String, row: usize, first: usize },
}

fn check_columns<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<(), ManifestError> {
    let names: Vec<&str> = names.into_iter().map(str::trim).collect();
    let missing: Vec<String> = COLUMNS
        .iter()
        .filter(|c| !names.contains(c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ManifestError::MissingColumns(missing));
    }
    let unknown: Vec<String> = names
        .iter()
        .filter(|n| !COLUMNS.contains(n))
        .map(|n| n.to_string())
        .collect();
    if !unknown.is_empty() {
        return Err(ManifestError::UnknownColumns(unknown));
    }
    Ok(())
}

fn parse_year(raw: &str) -> Result<i32, RowError> {
    let t = raw.trim();
    if t.len() != 4 || !t.bytes().all(|b| b.is_ascii_digit()) || t.starts_with('0') {
        return Err(RowError::InvalidYear(t.to_string()));
    }
    Ok(t.parse().expect("four ascii digits"))
}

fn build_record(fields: &HashMap<&str, String>) -> Result<DocumentRecord, RowError> {
    let get = |k: &'static str| fields.get(k).map(|v| v.trim()).ok_or(RowError::Missing(k));
    let id = get("id")?;
    if id.is_empty() {
        return Err(RowError::EmptyId);
    }
    Ok(DocumentRecord {
        id: id.to_string(),
        doc_type: get("doc_type")?.parse()?,
        year: parse_year(get("year")?)?,
        title: get("title")?.to_string(),
        domain: get("domain")?.parse()?,
        source: Source::parse(get("source")?, id),
    })
}

fn validate(rows: Vec<HashMap<&str, String>>) -> Result<Vec<DocumentRecord>, ManifestError> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut records = Vec::with_capacity(rows.len());
    for (i, fields) in rows.iter().enumerate() {
        let row = i + 1;
        let record = build_record(fields).map_err(|error| ManifestError::Row { row, error })?;
        if let Some(&first) = seen.get(&record.id) {
            return Err(ManifestError::DuplicateId { id: record.id, row, first });
        }
        seen.insert(record.id.clone(), row);
        records.push(record);
    }
    Ok(records)
}

/// Parses CSV manifest content. Row numbers count data rows from 1.
pub fn parse_csv(content: &str) -> Result<Vec<DocumentRecord>, ManifestError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(content.as_bytes());
    let headers = reader.headers()?.clone();
    check_columns(headers.iter())?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { .. } => ManifestError::Row {
                row: i + 1,
                error: RowError::Missing("one or more columns"),
            },
            _ => ManifestError::Csv(e),
        })?;
        let fields: HashMap<&str, String> = COLUMNS
            .iter()
            .map(|&c| {
                let idx = headers.iter().position(|h| h.trim() == c).unwrap();
                (c, record.get(idx).unwrap_or_default().to_string())
            })
            .collect();
        rows.push(fields);
    }
    validate(rows)
}

/// Parses JSON manifest content: an array of objects keyed by [`COLUMNS`].
pub fn parse_json(content: &str) -> Result<Vec<DocumentRecord>, ManifestError> {
    let value: serde_json::Value = serde_json::from_str(content)?;
    let items = value.as_array().ok_or(ManifestError::NotAnArray)?;
    let mut rows = Vec::with_capacity(items.len());
    for item in items {
        let object = item.as_object().ok_or(ManifestError::NotAnArray)?;
        check_columns(object.keys().map(String::as_str))?;
        let mut fields = HashMap::new();
        for &c in &COLUMNS {
            let text = match object.get(c) {
                Some(serde_json::Value::String(s)) => s.clone(),
                Some(serde_json::Value::Number(n)) => n.to_string(),
                Some(serde_json::Value::Null) | None => String::new(),
                Some(other) => other.to_string(),
            };
            fields.insert(c, text);
        }
        rows.push(fields);
    }
    validate(rows)
}

/// Loads a manifest; files ending in `.json` are parsed as JSON, anything
/// else as CSV.
pub fn load_manifest(path: &Path) -> Result<Vec<DocumentRecord>, ManifestError> {
    let content = fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        parse_json(&content)
    } else {
        parse_csv(&content)
    }
}
