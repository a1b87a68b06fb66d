//! The JSON envelope written next to every command's data files.

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const TOOL: &str = "gaborlab";

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// `SOURCE_DATE_EPOCH` when set; otherwise `null`, which keeps reports reproducible.
    pub timestamp: Option<u64>,
    pub config: RunConfig,
    pub payload: Value,
    pub notes: Vec<String>,
}

impl ReportEnvelope {
    pub fn new(command: &str, config: &RunConfig, payload: Value, notes: Vec<String>) -> Self {
        Self {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            timestamp: source_date_epoch(),
            config: config.clone(),
            payload,
            notes,
        }
    }
}

fn source_date_epoch() -> Option<u64> {
    std::env::var("SOURCE_DATE_EPOCH").ok()?.trim().parse().ok()
}
