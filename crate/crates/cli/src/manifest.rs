use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::args::Command;
use crate::error::{CliError, CliResult};

/// Version of the JSON documents and CSV column layouts.
pub const SCHEMA_VERSION: u32 = 1;

/// Everything needed to reproduce a run. Replaying the recorded command
/// gives identical output apart from `timestamp`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    #[serde(flatten)]
    pub command: Command,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// RFC 3339, UTC. Honors `SOURCE_DATE_EPOCH`.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &Command) -> Self {
        RunManifest {
            schema_version: SCHEMA_VERSION,
            command: command.clone(),
            seed: command.seed(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// Reads a bare manifest or a result document with a `manifest` field.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("manifest: {e}")))?;
        let inner = match value.get("manifest") {
            Some(m) => m.clone(),
            None => value,
        };
        serde_json::from_value(inner).map_err(|e| CliError::Invalid(format!("manifest: {e}")))
    }
}

fn timestamp() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    fixed
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}
