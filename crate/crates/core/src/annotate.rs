//! Client for UDPipe-compatible REST annotation services.
//!
//! Raw text is posted as a form-encoded request and the CoNLL-U document in
//! the `result` member of the JSON reply is persisted. An offline mode reads
//! pre-annotated `.conllu` files instead, so nothing downstream needs the
//! live service.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;
use thiserror::Error;

use crate::conllu::{self, parse_conllu};
use crate::io::write_atomic;

pub const DEFAULT_ENDPOINT: &str = "https://lindat.mff.cuni.cz/services/udpipe/api/process";
pub const DEFAULT_MODEL: &str = "english-ewt";
/// Environment variable overriding the default endpoint.
pub const ENDPOINT_ENV: &str = "THAT_UDPIPE_URL";
/// Minimum spacing between two requests to a remote endpoint.
pub const MIN_REQUEST_INTERVAL: Duration = Duration::from_millis(500);

const BODY_EXCERPT_LEN: usize = 200;

#[derive(Debug, Error)]
pub enum AnnotateError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("UDPipe API Error: {status}, {body}")]
    Service { status: u16, body: String },

    #[error("transport error: {0}")]
    Transport(String),

    #[error("unexpected response: {0}")]
    BadResponse(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl AnnotateError {
    /// Service and transport failures may succeed on a later attempt.
    pub fn is_retryable(&self) -> bool {
        matches!(self, AnnotateError::Service { .. } | AnnotateError::Transport(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotateRequest {
    pub data: String,
    pub model: String,
    pub tokenizer: bool,
    pub tagger: bool,
    pub parser: bool,
}

impl Default for AnnotateRequest {
    fn default() -> Self {
        AnnotateRequest {
            data: String::new(),
            model: DEFAULT_MODEL.to_owned(),
            tokenizer: true,
            tagger: true,
            parser: true,
        }
    }
}

impl AnnotateRequest {
    pub fn new(data: impl Into<String>) -> Self {
        AnnotateRequest { data: data.into(), ..Default::default() }
    }

    pub fn with_data(&self, data: impl Into<String>) -> Self {
        AnnotateRequest { data: data.into(), ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), AnnotateError> {
        if self.data.trim().is_empty() {
            return Err(AnnotateError::InvalidRequest("data is empty".to_owned()));
        }
        if self.model.trim().is_empty() {
            return Err(AnnotateError::InvalidRequest("model is empty".to_owned()));
        }
        Ok(())
    }

    /// Form fields in the order the service expects them.
    pub fn form_fields(&self) -> Vec<(&'static str, String)> {
        let flag = |b: bool| if b { "yes" } else { "no" }.to_owned();
        vec![
            ("data", self.data.clone()),
            ("model", self.model.clone()),
            ("tokenizer", flag(self.tokenizer)),
            ("tagger", flag(self.tagger)),
            ("parser", flag(self.parser)),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotateResponse {
    pub conllu: String,
    pub status: u16,
    pub service_message: String,
}

#[derive(Deserialize)]
struct Envelope {
    result: String,
    #[serde(default)]
    model: Option<String>,
}

/// Where annotations come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    /// Read pre-annotated `.conllu` files.
    Offline,
    Remote(String),
}

impl Endpoint {
    /// Parses an endpoint argument; the literal `offline` selects offline
    /// mode.
    pub fn parse(s: &str) -> Self {
        if s == "offline" {
            Endpoint::Offline
        } else {
            Endpoint::Remote(s.to_owned())
        }
    }

    /// `THAT_UDPIPE_URL` if set, otherwise the public service.
    pub fn from_env() -> Self {
        match std::env::var(ENDPOINT_ENV) {
            Ok(url) if !url.is_empty() => Endpoint::parse(&url),
            _ => Endpoint::Remote(DEFAULT_ENDPOINT.to_owned()),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Offline => f.write_str("offline"),
            Endpoint::Remote(url) => f.write_str(url),
        }
    }
}

fn excerpt(body: &str) -> String {
    body.chars().take(BODY_EXCERPT_LEN).collect()
}

/// Sends one annotation request and returns the CoNLL-U result.
pub fn annotate_text(req: &AnnotateRequest, endpoint: &str) -> Result<AnnotateResponse, AnnotateError> {
    req.validate()?;
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(120))
        .build()
        .map_err(|e| AnnotateError::Transport(e.to_string()))?;
    let response = client
        .post(endpoint)
        .form(&req.form_fields())
        .send()
        .map_err(|e| AnnotateError::Transport(e.to_string()))?;
    let status = response.status().as_u16();
    let body = response.text().map_err(|e| AnnotateError::Transport(e.to_string()))?;
    decode_response(status, &body)
}

/// Interprets a service reply. Non-200 statuses become
/// [`AnnotateError::Service`]; a 200 must carry a parseable `result`.
pub fn decode_response(status: u16, body: &str) -> Result<AnnotateResponse, AnnotateError> {
    if status != 200 {
        return Err(AnnotateError::Service { status, body: excerpt(body) });
    }
    let envelope: Envelope =
        serde_json::from_str(body).map_err(|e| AnnotateError::BadResponse(format!("invalid JSON envelope: {}", e)))?;
    parse_conllu(&envelope.result, "response")
        .map_err(|e| AnnotateError::BadResponse(format!("result is not valid CoNLL-U: {}", e)))?;
    Ok(AnnotateResponse {
        conllu: envelope.result,
        status,
        service_message: envelope.model.unwrap_or_default(),
    })
}

/// Enforces a minimum interval between consecutive calls to [`wait`].
///
/// [`wait`]: RateLimiter::wait
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    last: Option<Instant>,
}

impl RateLimiter {
    pub fn new(interval: Duration) -> Self {
        RateLimiter { interval, last: None }
    }

    pub fn wait(&mut self) {
        if let Some(last) = self.last {
            let elapsed = last.elapsed();
            if elapsed < self.interval {
                thread::sleep(self.interval - elapsed);
            }
        }
        self.last = Some(Instant::now());
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnnotateSummary {
    pub files_done: usize,
    pub files_skipped: usize,
    pub files_failed: Vec<(String, String)>,
}

/// Annotates every input file into `<stem>.conllu` under `output_dir`.
///
/// Remote mode reads `*.txt` inputs; offline mode reads `*.conllu` inputs and
/// validates them before copying. Existing outputs are skipped, so an
/// interrupted run can be resumed. Per-file failures are collected in the
/// summary; only an unusable output directory aborts the batch.
pub fn annotate_directory(
    input_dir: &Path,
    output_dir: &Path,
    template: &AnnotateRequest,
    endpoint: &Endpoint,
) -> Result<AnnotateSummary, AnnotateError> {
    annotate_directory_with(input_dir, output_dir, template, endpoint, MIN_REQUEST_INTERVAL)
}

/// [`annotate_directory`] with an explicit request interval.
pub fn annotate_directory_with(
    input_dir: &Path,
    output_dir: &Path,
    template: &AnnotateRequest,
    endpoint: &Endpoint,
    interval: Duration,
) -> Result<AnnotateSummary, AnnotateError> {
    fs::create_dir_all(output_dir).map_err(|source| AnnotateError::Io { path: output_dir.to_owned(), source })?;
    let pattern = match endpoint {
        Endpoint::Offline => "*.conllu",
        Endpoint::Remote(_) => "*.txt",
    };
    let inputs = conllu::list_files(input_dir, pattern).map_err(|e| match e {
        conllu::ConlluError::Io { path, source } => AnnotateError::Io { path, source },
        other => AnnotateError::BadResponse(other.to_string()),
    })?;

    let mut limiter = RateLimiter::new(interval);
    let mut summary = AnnotateSummary::default();
    for input in inputs {
        let stem = conllu::file_stem(&input);
        let out_path = output_dir.join(format!("{}.conllu", stem));
        if out_path.exists() {
            summary.files_skipped += 1;
            continue;
        }
        let result = match endpoint {
            Endpoint::Offline => offline_copy(&input),
            Endpoint::Remote(url) => {
                limiter.wait();
                remote_annotate(&input, template, url)
            }
        };
        match result {
            Ok(conllu) => {
                write_atomic(&out_path, conllu.as_bytes())
                    .map_err(|source| AnnotateError::Io { path: out_path.clone(), source })?;
                summary.files_done += 1;
            }
            Err(e) => {
                log::warn!("{}: {}", input.display(), e);
                summary.files_failed.push((stem, e.to_string()));
            }
        }
    }
    Ok(summary)
}

fn read_input(path: &Path) -> Result<String, AnnotateError> {
    fs::read_to_string(path).map_err(|source| AnnotateError::Io { path: path.to_owned(), source })
}

fn offline_copy(path: &Path) -> Result<String, AnnotateError> {
    let text = read_input(path)?;
    parse_conllu(&text, &conllu::file_stem(path)).map_err(|e| AnnotateError::BadResponse(e.to_string()))?;
    Ok(text)
}

fn remote_annotate(path: &Path, template: &AnnotateRequest, url: &str) -> Result<String, AnnotateError> {
    let text = read_input(path)?;
    Ok(annotate_text(&template.with_data(text), url)?.conllu)
}
