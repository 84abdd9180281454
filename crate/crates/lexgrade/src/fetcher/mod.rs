//! Polite retrieval of EUR-Lex documents into a local text cache.
//!
//! Each document is cached as `<id>.txt` (extracted text) next to
//! `<id>.meta` (JSON with the source URL and retrieval time). A cached
//! document is never requested again unless a refresh is asked for.

mod html;
mod politeness;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Duration;

use chrono::{DateTime, Utc};
use regex::Regex;
use reqwest::StatusCode;
use serde::{Deserialize, Serialize};

pub use html::extract_text_from_html;
pub use politeness::{Gate, Permit};

pub const DEFAULT_BASE_URL: &str = "https://eur-lex.europa.eu";

/// Whether `id` is shaped like a CELEX number, e.g. `32016R0679`.
pub fn is_celex(id: &str) -> bool {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[0-9CE]\d{4}[A-Z]{1,2}\d{1,6}(\(\d{1,3}\))?$").unwrap())
        .is_match(id)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed CELEX id {0:?}")]
pub struct MalformedCelex(pub String);

/// English HTML rendition of a CELEX document.
pub fn celex_url(base: &str, id: &str) -> Result<String, MalformedCelex> {
    if !is_celex(id) {
        return Err(MalformedCelex(id.to_string()));
    }
    Ok(format!("{}/legal-content/EN/TXT/HTML/?uri=CELEX:{id}", base.trim_end_matches('/')))
}

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub base_url: String,
    pub cache_dir: PathBuf,
    /// Minimum gap between the starts of two requests.
    pub delay: Duration,
    /// Requests in flight at once.
    pub concurrency: usize,
    /// Extra attempts after a retryable failure.
    pub retries: u32,
    /// Wait before the first retry; doubled for each further retry.
    pub backoff: Duration,
    pub timeout: Duration,
    pub user_agent: String,
    /// Ignore cached copies.
    pub refresh: bool,
}

impl FetchConfig {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            base_url: DEFAULT_BASE_URL.to_string(),
            cache_dir: cache_dir.into(),
            delay: Duration::from_millis(1000),
            concurrency: 1,
            retries: 3,
            backoff: Duration::from_millis(2000),
            timeout: Duration::from_secs(60),
            user_agent: format!(
                "lexgrade/{} (readability research; polite batch fetcher)",
                env!("CARGO_PKG_VERSION")
            ),
            refresh: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum FetchStatus {
    FetchedFresh,
    FromCache,
    NotFound,
    TransportError { attempts: u32, message: String },
}

impl FetchStatus {
    pub fn is_success(&self) -> bool {
        matches!(self, FetchStatus::FetchedFresh | FetchStatus::FromCache)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchResult {
    pub id: String,
    #[serde(flatten)]
    pub status: FetchStatus,
    pub text_path: Option<PathBuf>,
    pub retrieved_at: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub source_url: String,
    pub retrieved_at: DateTime<Utc>,
}

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("cannot create cache directory {path}: {source}")]
    CacheDir { path: PathBuf, source: std::io::Error },
    #[error("cannot build HTTP client: {0}")]
    Client(#[from] reqwest::Error),
}

enum Attempt {
    Body(String, bool),
    NotFound,
    Retry(String),
    Fatal(String),
}

pub struct Fetcher {
    config: FetchConfig,
    client: reqwest::blocking::Client,
    gate: Gate,
}

impl Fetcher {
    pub fn new(config: FetchConfig) -> Result<Self, FetchError> {
        fs::create_dir_all(&config.cache_dir)
            .map_err(|source| FetchError::CacheDir { path: config.cache_dir.clone(), source })?;
        let client = reqwest::blocking::Client::builder()
            .user_agent(config.user_agent.clone())
            .timeout(config.timeout)
            .build()?;
        let gate = Gate::new(config.concurrency, config.delay);
        Ok(Self { config, client, gate })
    }

    pub fn config(&self) -> &FetchConfig {
        &self.config
    }

    pub fn text_path(&self, id: &str) -> PathBuf {
        self.config.cache_dir.join(format!("{id}.txt"))
    }

    pub fn meta_path(&self, id: &str) -> PathBuf {
        self.config.cache_dir.join(format!("{id}.meta"))
    }

    fn read_meta(&self, id: &str) -> Option<CacheMeta> {
        let raw = fs::read_to_string(self.meta_path(id)).ok()?;
        serde_json::from_str(&raw).ok()
    }

    fn request(&self, url: &str) -> Attempt {
        let _permit = self.gate.acquire();
        let response = match self.client.get(url).send() {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = response.status();
        if status == StatusCode::NOT_FOUND || status == StatusCode::GONE {
            return Attempt::NotFound;
        }
        if status.is_server_error() || status == StatusCode::TOO_MANY_REQUESTS {
            return Attempt::Retry(format!("HTTP {status}"));
        }
        if !status.is_success() {
            return Attempt::Fatal(format!("HTTP {status}"));
        }
        let plain = response
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .is_some_and(|v| v.starts_with("text/plain"));
        match response.text() {
            Ok(body) => Attempt::Body(body, plain),
            Err(e) => Attempt::Retry(e.to_string()),
        }
    }

    fn store(&self, id: &str, text: &str, meta: &CacheMeta) -> std::io::Result<()> {
        write_atomic(&self.config.cache_dir, &self.text_path(id), text.as_bytes())?;
        let meta = serde_json::to_vec_pretty(meta).map_err(std::io::Error::other)?;
        write_atomic(&self.config.cache_dir, &self.meta_path(id), &meta)
    }

    /// Returns the cached copy when present, otherwise downloads, extracts
    /// and caches the document. Server errors and transport failures are
    /// retried with exponential backoff; a 404 is final.
    pub fn fetch_document(&self, id: &str) -> FetchResult {
        let text_path = self.text_path(id);
        let result = |status, retrieved_at, cached: bool| FetchResult {
            id: id.to_string(),
            status,
            text_path: cached.then(|| text_path.clone()),
            retrieved_at,
        };
        if !self.config.refresh && text_path.is_file() {
            let retrieved_at = self.read_meta(id).map(|m| m.retrieved_at);
            return result(FetchStatus::FromCache, retrieved_at, true);
        }

        let url = match celex_url(&self.config.base_url, id) {
            Ok(url) => url,
            Err(e) => {
                let status = FetchStatus::TransportError { attempts: 0, message: e.to_string() };
                return result(status, None, false);
            }
        };
        let mut attempts = 0;
        loop {
            attempts += 1;
            let message = match self.request(&url) {
                Attempt::Body(body, plain) => {
                    let text = if plain { body } else { extract_text_from_html(&body) };
                    let meta = CacheMeta { source_url: url.clone(), retrieved_at: Utc::now() };
                    return match self.store(id, &text, &meta) {
                        Ok(()) => result(FetchStatus::FetchedFresh, Some(meta.retrieved_at), true),
                        Err(e) => result(
                            FetchStatus::TransportError {
                                attempts,
                                message: format!("cache write failed: {e}"),
                            },
                            None,
                            false,
                        ),
                    };
                }
                Attempt::NotFound => return result(FetchStatus::NotFound, None, false),
                Attempt::Fatal(message) => {
                    return result(FetchStatus::TransportError { attempts, message }, None, false)
                }
                Attempt::Retry(message) => message,
            };
            if attempts > self.config.retries {
                return result(FetchStatus::TransportError { attempts, message }, None, false);
            }
            std::thread::sleep(self.config.backoff.saturating_mul(1 << (attempts - 1).min(16)));
        }
    }

    /// Fetches every id with up to `concurrency` workers. Results follow the
    /// order of `ids`.
    pub fn fetch_all(&self, ids: &[String]) -> Vec<FetchResult> {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<FetchResult>>> = Mutex::new(vec![None; ids.len()]);
        let workers = self.config.concurrency.max(1).min(ids.len().max(1));
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(id) = ids.get(i) else { break };
                    let r = self.fetch_document(id);
                    slots.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(r);
                });
            }
        });
        slots
            .into_inner()
            .unwrap_or_else(|e| e.into_inner())
            .into_iter()
            .map(|r| r.expect("every slot filled"))
            .collect()
    }
}

fn write_atomic(dir: &Path, target: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(target).map_err(|e| e.error)?;
    Ok(())
}
