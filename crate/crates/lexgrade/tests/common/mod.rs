#![allow(dead_code)]

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn corpus_dir() -> PathBuf {
    fixtures().join("corpus")
}

pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub body: String,
}

impl Response {
    pub fn html(body: impl Into<String>) -> Self {
        Self { status: 200, content_type: "text/html; charset=utf-8", body: body.into() }
    }

    pub fn status(status: u16) -> Self {
        Self { status, content_type: "text/plain", body: String::new() }
    }
}

#[derive(Debug, Clone)]
pub struct Request {
    pub path: String,
    pub user_agent: Option<String>,
    pub received: Instant,
}

#[derive(Default)]
struct Log {
    requests: Vec<Request>,
    in_flight: usize,
    peak: usize,
}

type Handler = dyn Fn(&str, usize) -> Response + Send + Sync;

/// HTTP/1.1 server on a loopback port that answers every request through
/// `handler(path, nth_request_for_path)` and records what it saw.
pub struct StubServer {
    pub base_url: String,
    log: Arc<Mutex<Log>>,
}

impl StubServer {
    pub fn start(latency: Duration, handler: impl Fn(&str, usize) -> Response + Send + Sync + 'static) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let base_url = format!("http://{}", listener.local_addr().unwrap());
        let log = Arc::new(Mutex::new(Log::default()));
        let handler: Arc<Handler> = Arc::new(handler);
        let accept_log = log.clone();
        thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(stream) = stream else { continue };
                let (log, handler) = (accept_log.clone(), handler.clone());
                thread::spawn(move || serve(stream, &log, &*handler, latency));
            }
        });
        Self { base_url, log }
    }

    pub fn requests(&self) -> Vec<Request> {
        self.log.lock().unwrap().requests.clone()
    }

    pub fn peak_in_flight(&self) -> usize {
        self.log.lock().unwrap().peak
    }
}

fn serve(stream: TcpStream, log: &Mutex<Log>, handler: &Handler, latency: Duration) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut request_line = String::new();
    if reader.read_line(&mut request_line).unwrap_or(0) == 0 {
        return;
    }
    let mut user_agent = None;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.eq_ignore_ascii_case("user-agent") {
                user_agent = Some(value.trim().to_string());
            }
        }
    }
    let path = request_line.split_whitespace().nth(1).unwrap_or("").to_string();
    let nth = {
        let mut log = log.lock().unwrap();
        let nth = log.requests.iter().filter(|r| r.path == path).count();
        log.requests.push(Request { path: path.clone(), user_agent, received: Instant::now() });
        log.in_flight += 1;
        log.peak = log.peak.max(log.in_flight);
        nth
    };
    thread::sleep(latency);
    let response = handler(&path, nth);
    log.lock().unwrap().in_flight -= 1;
    let mut stream = stream;
    let head = format!(
        "HTTP/1.1 {} Stub\r\nContent-Type: {}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        response.status,
        response.content_type,
        response.body.len()
    );
    let _ = stream.write_all(head.as_bytes());
    let _ = stream.write_all(response.body.as_bytes());
    let _ = stream.flush();
}

/// The CELEX id embedded in a stub request path.
pub fn celex_of(path: &str) -> &str {
    path.rsplit("CELEX:").next().unwrap_or("")
}

/// Values recorded by an independent script in `fixtures/corpus/expected.txt`.
#[derive(Debug, Default)]
pub struct Expected {
    /// `(id, [(metric, value)])` in manifest order.
    pub metrics: Vec<(String, Vec<(String, usize)>)>,
    /// `(id, mode, [g1..g5])`.
    pub grades: Vec<(String, String, [i32; 5])>,
    /// `(column, [(field, value)])`.
    pub summary: Vec<(String, Vec<(String, f64)>)>,
    pub correlations: Vec<(String, String, f64)>,
    pub alpha: f64,
}

impl Expected {
    pub fn load() -> Self {
        let text = std::fs::read_to_string(corpus_dir().join("expected.txt")).unwrap();
        let mut e = Expected::default();
        for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let kv = |items: &[&str]| -> Vec<(String, String)> {
                items
                    .iter()
                    .map(|p| {
                        let (k, v) = p.split_once('=').unwrap();
                        (k.to_string(), v.to_string())
                    })
                    .collect()
            };
            match parts[0] {
                "summary" => e.summary.push((
                    parts[1].into(),
                    kv(&parts[2..]).into_iter().map(|(k, v)| (k, v.parse().unwrap())).collect(),
                )),
                "correlation" => e.correlations.push((parts[1].into(), parts[2].into(), parts[3].parse().unwrap())),
                "alpha" => e.alpha = parts[1].parse().unwrap(),
                id if parts[1].contains('=') => e.metrics.push((
                    id.into(),
                    kv(&parts[1..]).into_iter().map(|(k, v)| (k, v.parse().unwrap())).collect(),
                )),
                id => {
                    let g: Vec<i32> = parts[2..].iter().map(|v| v.parse().unwrap()).collect();
                    e.grades.push((id.into(), parts[1].into(), g.try_into().unwrap()));
                }
            }
        }
        e
    }

    pub fn grades_for(&self, mode: &str) -> Vec<[i32; 5]> {
        self.grades.iter().filter(|g| g.1 == mode).map(|g| g.2).collect()
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Manifest whose documents are fetched by CELEX id from a stub server.
pub fn stub_corpus(dir: &Path) -> (StubServer, PathBuf) {
    let texts = corpus_dir().join("texts");
    let pages: Vec<(&str, String)> = [
        ("31995L0046", "transposition.txt"),
        ("32002L0014", "employment.txt"),
        ("32016R0679", "data_protection.txt"),
    ]
    .into_iter()
    .map(|(id, file)| {
        let body: String = fs::read_to_string(texts.join(file))
            .unwrap()
            .split("\n\n")
            .map(|p| format!("<p>{p}</p>\n"))
            .collect();
        (id, format!("<html><head><title>{id}</title></head><body><nav>Menu</nav>{body}</body></html>"))
    })
    .collect();
    let server = StubServer::start(Duration::ZERO, move |path, _| {
        let id = celex_of(path);
        match pages.iter().find(|(p, _)| *p == id) {
            Some((_, html)) => Response::html(html.clone()),
            None => Response::status(404),
        }
    });
    let manifest = dir.join("manifest.csv");
    fs::write(
        &manifest,
        "id,doc_type,year,title,domain,source\n\
         31995L0046,Directive,1995,Transposition,personal_data_privacy,celex:31995L0046\n\
         32002L0014,Directive,2002,Employees,general_rules,celex:32002L0014\n\
         32016R0679,Regulation,2016,GDPR,personal_data_privacy,celex:32016R0679\n",
    )
    .unwrap();
    (server, manifest)
}
