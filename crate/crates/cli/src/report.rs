//! The JSON envelope every subcommand emits under `--format json`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, contents: &[u8]) -> Self {
        InputDigest {
            path: path.to_string(),
            bytes: contents.len(),
            sha256: hex::encode(Sha256::digest(contents)),
        }
    }
}

/// Field order is fixed by this declaration and `result` holds a
/// `serde_json::Value`, whose maps are key-sorted, so equal runs serialize to
/// equal bytes. Wall-clock time is the one nondeterministic field and is only
/// present under `--timing`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub inputs: Vec<InputDigest>,
    pub status: &'static str,
    pub exit_code: i32,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u128>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
