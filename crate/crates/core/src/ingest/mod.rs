//! Parsers for weather history, crowd profiles and the configuration file.

mod config;
mod crowd;
mod weather;

use std::fmt;

use thiserror::Error;

pub use config::{load_config, Config, ConfigError};
pub use crowd::{
    parse_crowd_profile, parse_timestamp, write_crowd_profile, CrowdMeasure, CrowdProfileEntry, CrowdSource,
};
pub use weather::{parse_weather_csv, write_weather_csv, WeatherRecord};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A data row problem. `line` is 1-based in the source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowFault {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RowFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Result of a tolerant parse: `records.len() + faults.len() == rows`.
/// `notes` flags rows that were kept after adjustment.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseReport<T> {
    pub records: Vec<T>,
    pub faults: Vec<RowFault>,
    pub notes: Vec<RowFault>,
    pub rows: usize,
}

impl<T> Default for ParseReport<T> {
    fn default() -> Self {
        Self {
            records: Vec::new(),
            faults: Vec::new(),
            notes: Vec::new(),
            rows: 0,
        }
    }
}

pub(crate) fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "y" => Some(true),
        "false" | "0" | "no" | "n" => Some(false),
        _ => None,
    }
}
