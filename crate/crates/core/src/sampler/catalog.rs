//! Repository-catalog client for per-stratum project counts, with an
//! on-disk response cache that allows offline replay.

use std::path::PathBuf;
use std::time::Duration;

use sha2::{Digest, Sha256};

use super::{stratum_bounds, SamplerError};

/// Environment variable holding the catalog access token.
pub const TOKEN_VARIABLE: &str = "GITHUB_TOKEN";

const API: &str = "https://api.github.com/search/repositories";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engagement {
    Stars,
    Forks,
}

impl std::str::FromStr for Engagement {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stars" => Ok(Engagement::Stars),
            "forks" => Ok(Engagement::Forks),
            _ => Err(SamplerError::Invalid(format!("unknown engagement `{s}` (stars or forks)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogQuery {
    pub language: String,
    pub engagement: Engagement,
    pub strata: Vec<u32>,
    /// Only count repositories created before this date (`YYYY-MM-DD`).
    pub created_before: Option<String>,
}

pub fn stratum_query_url(q: &CatalogQuery, stratum: u32) -> String {
    let (lo, hi) = stratum_bounds(stratum);
    let field = match q.engagement {
        Engagement::Stars => "stars",
        Engagement::Forks => "forks",
    };
    let mut terms = format!("language:{}+{field}:{lo}..{hi}", q.language);
    if let Some(date) = &q.created_before {
        terms.push_str(&format!("+created:<{date}"));
    }
    format!("{API}?q={terms}&per_page=1")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

pub trait Transport {
    fn get(&self, url: &str, token: Option<&str>) -> Result<HttpResponse, SamplerError>;
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl Default for UreqTransport {
    fn default() -> Self {
        let config = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(30)))
            .build();
        UreqTransport { agent: ureq::Agent::new_with_config(config) }
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str, token: Option<&str>) -> Result<HttpResponse, SamplerError> {
        let mut req = self
            .agent
            .get(url)
            .header("Accept", "application/vnd.github+json")
            .header("User-Agent", concat!("cqual/", env!("CARGO_PKG_VERSION")));
        if let Some(t) = token {
            req = req.header("Authorization", &format!("Bearer {t}"));
        }
        let mut resp = req.call().map_err(|e| SamplerError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp.body_mut().read_to_string().map_err(|e| SamplerError::Transport(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

pub struct CatalogClient<T: Transport> {
    transport: T,
    token: Option<String>,
    cache_dir: Option<PathBuf>,
    offline: bool,
    pub max_retries: u32,
    pub backoff: Duration,
    sleep: fn(Duration),
}

impl<T: Transport> CatalogClient<T> {
    pub fn new(transport: T, token: Option<String>, cache_dir: Option<PathBuf>) -> Self {
        CatalogClient {
            transport,
            token,
            cache_dir,
            offline: false,
            max_retries: 5,
            backoff: Duration::from_secs(2),
            sleep: std::thread::sleep,
        }
    }

    /// Serve only from the cache.
    pub fn offline(mut self, offline: bool) -> Self {
        self.offline = offline;
        self
    }

    /// Replaces the sleep between retries, e.g. with a no-op in tests.
    pub fn with_sleep(mut self, sleep: fn(Duration)) -> Self {
        self.sleep = sleep;
        self
    }

    fn cache_path(&self, url: &str) -> Option<PathBuf> {
        let digest = Sha256::digest(url.as_bytes());
        let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.cache_dir.as_ref().map(|d| d.join(format!("{name}.json")))
    }

    /// Response body for `url`, from the cache when present.
    pub fn fetch(&self, url: &str) -> Result<String, SamplerError> {
        let cached = self.cache_path(url);
        if let Some(path) = &cached {
            if let Ok(body) = std::fs::read_to_string(path) {
                log::debug!("cache hit {url}");
                return Ok(body);
            }
        }
        if self.offline {
            return Err(SamplerError::NotCached(url.to_owned()));
        }
        if self.token.is_none() {
            log::warn!("{TOKEN_VARIABLE} not set; catalog queries are unauthenticated");
        }
        let mut attempt = 0;
        loop {
            attempt += 1;
            let resp = self.transport.get(url, self.token.as_deref())?;
            match resp.status {
                200..=299 => {
                    if let Some(path) = &cached {
                        if let Some(dir) = path.parent() {
                            std::fs::create_dir_all(dir).map_err(SamplerError::Io)?;
                        }
                        let tmp = path.with_extension("part");
                        std::fs::write(&tmp, &resp.body).map_err(SamplerError::Io)?;
                        std::fs::rename(&tmp, path).map_err(SamplerError::Io)?;
                    }
                    return Ok(resp.body);
                }
                401 => return Err(SamplerError::Auth(format!("HTTP 401 for {url}"))),
                403 | 429 => {
                    if attempt > self.max_retries {
                        return Err(SamplerError::RateLimited { url: url.to_owned(), attempts: attempt });
                    }
                    let wait = self.backoff * 2u32.saturating_pow(attempt - 1);
                    log::warn!("rate limited, retrying in {:.1}s", wait.as_secs_f64());
                    (self.sleep)(wait);
                }
                status => return Err(SamplerError::Http { status, url: url.to_owned() }),
            }
        }
    }

    /// Number of matching repositories in each requested stratum.
    pub fn fetch_stratum_counts(&self, query: &CatalogQuery) -> Result<Vec<u64>, SamplerError> {
        query
            .strata
            .iter()
            .map(|&i| {
                let url = stratum_query_url(query, i);
                let body = self.fetch(&url)?;
                let json: serde_json::Value =
                    serde_json::from_str(&body).map_err(|e| SamplerError::Response(format!("{url}: {e}")))?;
                json.get("total_count")
                    .and_then(serde_json::Value::as_u64)
                    .ok_or_else(|| SamplerError::Response(format!("{url}: no total_count")))
            })
            .collect()
    }
}
