//! Configuration-driven HTTP translation adapter.

use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::probegen::{Direction, Probe};
use crate::translate::{Backend, Failure, FailureKind, Origin};

/// How to reach one translation service. Credentials are read from the
/// environment variable named by `auth_env`, never from the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointDescriptor {
    pub id: String,
    /// `{source_lang}` and `{target_lang}` are substituted.
    pub url: String,
    pub auth_header: Option<String>,
    pub auth_env: Option<String>,
    /// Prepended to the credential, e.g. `"Bearer "`.
    #[serde(default)]
    pub auth_prefix: String,
    /// JSON body field → value template (`{text}`, `{source_lang}`,
    /// `{target_lang}`). A field name ending in `[]` wraps the value in an array.
    pub request: BTreeMap<String, String>,
    /// Dot path to the translated string, e.g. `translations.0.text`.
    pub response_path: String,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff_ms")]
    pub backoff_ms: u64,
    #[serde(default = "default_max_backoff_ms")]
    pub max_backoff_ms: u64,
    /// Requests per second ceiling; absent means unlimited.
    pub max_rps: Option<u32>,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
}

fn default_retries() -> u32 {
    3
}
fn default_backoff_ms() -> u64 {
    500
}
fn default_max_backoff_ms() -> u64 {
    30_000
}
fn default_timeout_ms() -> u64 {
    30_000
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RemoteError {
    #[error("endpoint {endpoint}: environment variable {var} is not set")]
    MissingCredential { endpoint: String, var: String },
    #[error("endpoint {endpoint}: {message}")]
    Config { endpoint: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

pub trait HttpTransport: Send + Sync {
    fn post_json(
        &self,
        url: &str,
        headers: &[(String, String)],
        body: &Value,
    ) -> Result<HttpResponse, String>;
}

/// Blocking transport backed by ureq.
pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build();
        UreqTransport {
            agent: config.into(),
        }
    }
}

impl HttpTransport for UreqTransport {
    fn post_json(
        &self,
        url: &str,
        headers: &[(String, String)],
        body: &Value,
    ) -> Result<HttpResponse, String> {
        let mut req = self.agent.post(url);
        for (k, v) in headers {
            req = req.header(k.as_str(), v.as_str());
        }
        let mut resp = req.send_json(body).map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| e.to_string())?;
        Ok(HttpResponse { status, body })
    }
}

/// Time source for backoff and rate limiting.
pub trait Clock: Send + Sync {
    /// Monotonic time since an arbitrary origin.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
}

pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock {
            origin: Instant::now(),
        }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Clock that only moves when slept on. Used by tests.
#[derive(Debug, Default)]
pub struct VirtualClock {
    now: Mutex<Duration>,
}

impl VirtualClock {
    pub fn advance(&self, d: Duration) {
        *self.now.lock().unwrap_or_else(|e| e.into_inner()) += d;
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> Duration {
        *self.now.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn sleep(&self, d: Duration) {
        self.advance(d);
    }
}

/// Admits at most `max_per_sec` calls in any sliding one-second window.
#[derive(Debug)]
pub struct RateLimiter {
    max_per_sec: u32,
    recent: Mutex<VecDeque<Duration>>,
}

impl RateLimiter {
    pub fn new(max_per_sec: u32) -> Self {
        RateLimiter {
            max_per_sec: max_per_sec.max(1),
            recent: Mutex::new(VecDeque::new()),
        }
    }

    /// Blocks (via `clock`) until a call may start, then records it.
    pub fn acquire(&self, clock: &dyn Clock) -> Duration {
        let window = Duration::from_secs(1);
        loop {
            let wait = {
                let mut recent = self.recent.lock().unwrap_or_else(|e| e.into_inner());
                let now = clock.now();
                while recent.front().is_some_and(|&t| t + window <= now) {
                    recent.pop_front();
                }
                if recent.len() < self.max_per_sec as usize {
                    recent.push_back(now);
                    return now;
                }
                recent[0] + window - now
            };
            clock.sleep(wait);
        }
    }
}

pub struct RemoteBackend {
    descriptor: EndpointDescriptor,
    credential: Option<String>,
    transport: Box<dyn HttpTransport>,
    clock: Arc<dyn Clock>,
    limiter: Option<RateLimiter>,
    attempts: AtomicUsize,
}

impl RemoteBackend {
    /// Resolves the credential through `env`; a missing variable is an error
    /// before any request is made.
    pub fn new(
        descriptor: EndpointDescriptor,
        transport: Box<dyn HttpTransport>,
        clock: Arc<dyn Clock>,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, RemoteError> {
        let config = |message: String| RemoteError::Config {
            endpoint: descriptor.id.clone(),
            message,
        };
        if descriptor.request.is_empty() {
            return Err(config("request field map is empty".into()));
        }
        if descriptor.response_path.trim().is_empty() {
            return Err(config("response_path is empty".into()));
        }
        let credential = match (&descriptor.auth_header, &descriptor.auth_env) {
            (Some(_), Some(var)) => Some(env(var).filter(|v| !v.is_empty()).ok_or_else(|| {
                RemoteError::MissingCredential {
                    endpoint: descriptor.id.clone(),
                    var: var.clone(),
                }
            })?),
            (None, None) => None,
            _ => {
                return Err(config(
                    "auth_header and auth_env must be given together".into(),
                ))
            }
        };
        Ok(RemoteBackend {
            limiter: descriptor.max_rps.map(RateLimiter::new),
            descriptor,
            credential,
            transport,
            clock,
            attempts: AtomicUsize::new(0),
        })
    }

    /// Production constructor: ureq transport, wall clock, process env.
    pub fn from_env(descriptor: EndpointDescriptor) -> Result<Self, RemoteError> {
        let timeout = Duration::from_millis(descriptor.timeout_ms);
        RemoteBackend::new(
            descriptor,
            Box::new(UreqTransport::new(timeout)),
            Arc::new(SystemClock::default()),
            |v| std::env::var(v).ok(),
        )
    }

    /// HTTP attempts made so far, retries included.
    pub fn attempts(&self) -> usize {
        self.attempts.load(Ordering::SeqCst)
    }

    fn fill(template: &str, text: &str, direction: Direction) -> String {
        template
            .replace("{source_lang}", direction.source_lang())
            .replace("{target_lang}", direction.target_lang())
            .replace("{text}", text)
    }

    fn request_body(&self, text: &str, direction: Direction) -> Value {
        let mut body = serde_json::Map::new();
        for (field, template) in &self.descriptor.request {
            let value = Value::String(Self::fill(template, text, direction));
            match field.strip_suffix("[]") {
                Some(name) => body.insert(name.to_string(), Value::Array(vec![value])),
                None => body.insert(field.clone(), value),
            };
        }
        Value::Object(body)
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let ms = self
            .descriptor
            .backoff_ms
            .saturating_mul(1u64 << attempt.min(20))
            .min(self.descriptor.max_backoff_ms);
        Duration::from_millis(ms)
    }

    /// Translates one string, retrying 429, 5xx and transport failures with
    /// exponential backoff.
    pub fn remote_translate(&self, text: &str, direction: Direction) -> Result<String, Failure> {
        let url = Self::fill(&self.descriptor.url, "", direction);
        let mut headers = Vec::new();
        if let (Some(h), Some(c)) = (&self.descriptor.auth_header, &self.credential) {
            headers.push((h.clone(), format!("{}{c}", self.descriptor.auth_prefix)));
        }
        let body = self.request_body(text, direction);
        let mut attempt = 0u32;
        loop {
            if let Some(l) = &self.limiter {
                l.acquire(self.clock.as_ref());
            }
            self.attempts.fetch_add(1, Ordering::SeqCst);
            let outcome = self.transport.post_json(&url, &headers, &body);
            let retryable = match &outcome {
                Ok(r) if (200..300).contains(&r.status) => {
                    return extract(&r.body, &self.descriptor.response_path);
                }
                Ok(r) => r.status == 429 || r.status >= 500,
                Err(_) => true,
            };
            log::info!(
                "{}: attempt {} failed ({})",
                self.descriptor.id,
                attempt + 1,
                match &outcome {
                    Ok(r) => format!("HTTP {}", r.status),
                    Err(e) => e.clone(),
                }
            );
            if !retryable || attempt >= self.descriptor.max_retries {
                return Err(match outcome {
                    Ok(r) => Failure::new(
                        FailureKind::Http,
                        format!("HTTP {} after {} attempts", r.status, attempt + 1),
                    ),
                    Err(e) => Failure::new(
                        FailureKind::Transport,
                        format!("{e} after {} attempts", attempt + 1),
                    ),
                });
            }
            self.clock.sleep(self.backoff(attempt));
            attempt += 1;
        }
    }
}

/// Follows a dot path (object keys and array indices) to a string.
pub fn extract(body: &str, path: &str) -> Result<String, Failure> {
    let decode = |m: String| Failure::new(FailureKind::Decode, m);
    let mut v: Value =
        serde_json::from_str(body).map_err(|e| decode(format!("invalid JSON: {e}")))?;
    for seg in path.split('.') {
        v = match v {
            Value::Object(mut m) => m
                .remove(seg)
                .ok_or_else(|| decode(format!("no field {seg:?} on path {path}")))?,
            Value::Array(mut a) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| decode(format!("{seg:?} is not an array index on path {path}")))?;
                if i >= a.len() {
                    return Err(decode(format!("index {i} out of range on path {path}")));
                }
                a.swap_remove(i)
            }
            _ => {
                return Err(decode(format!(
                    "cannot descend into {seg:?} on path {path}"
                )))
            }
        };
    }
    match v {
        Value::String(s) => Ok(s),
        other => Err(decode(format!("value at {path} is not a string: {other}"))),
    }
}

impl Backend for RemoteBackend {
    fn id(&self) -> &str {
        &self.descriptor.id
    }

    fn origin(&self) -> Origin {
        Origin::Live
    }

    fn translate(&self, probe: &Probe) -> Result<String, Failure> {
        self.remote_translate(&probe.source_text, probe.direction)
    }
}
