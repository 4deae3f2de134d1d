//! Stratified repository sampling and inclusion checks.

mod catalog;
mod inclusion;
mod plan;

pub use catalog::{
    stratum_query_url, CatalogClient, CatalogQuery, Engagement, HttpResponse, Transport, UreqTransport,
    TOKEN_VARIABLE,
};
pub use inclusion::{check_inclusion, half_year_counts, InclusionReport, RepoDescriptor, Verdict, HALF_YEAR_SECS};
pub use plan::{plan_strata, selection_probability, stratum_bounds, StratumPlan};

#[derive(Debug, thiserror::Error)]
pub enum SamplerError {
    #[error("invalid sampling input: {0}")]
    Invalid(String),
    #[error("catalog authentication failed (check GITHUB_TOKEN): {0}")]
    Auth(String),
    #[error("catalog rate limit still in force after {attempts} attempts: {url}")]
    RateLimited { url: String, attempts: u32 },
    #[error("catalog returned HTTP {status} for {url}")]
    Http { status: u16, url: String },
    #[error("no cached response for {0} and network access is disabled")]
    NotCached(String),
    #[error("catalog transport: {0}")]
    Transport(String),
    #[error("unexpected catalog response: {0}")]
    Response(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
