use std::path::PathBuf;

use sse_core::{DomainError, ParamError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid channel parameters (n = {n}, c = {c}, delta = {delta}): {source}")]
    Params {
        n: usize,
        c: f64,
        delta: f64,
        source: ParamError,
    },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    ParseConfig {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}
