//! Versioned JSON reports. Keys are sorted (serde_json's default map is
//! ordered), and `timings_ms` fields are left out of the result digest so
//! two runs on the same input agree byte for byte once timings are removed.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TIMING_KEY: &str = "timings_ms";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Drops every `timings_ms` field, recursively.
pub fn strip_timings(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            Value::Object(m.iter().filter(|(k, _)| k.as_str() != TIMING_KEY).map(|(k, v)| (k.clone(), strip_timings(v))).collect())
        }
        Value::Array(a) => Value::Array(a.iter().map(strip_timings).collect()),
        other => other.clone(),
    }
}

/// `{schema, version, command, input_digest, result, result_digest}`.
pub fn envelope(command: &str, input: Option<&str>, result: impl Serialize) -> Value {
    let result = serde_json::to_value(result).expect("reports serialize");
    let digest = sha256_hex(strip_timings(&result).to_string().as_bytes());
    json!({
        "schema": SCHEMA,
        "version": VERSION,
        "command": command,
        "input_digest": input.map(|t| sha256_hex(t.as_bytes())),
        "result": result,
        "result_digest": digest,
    })
}

pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values render") + "\n"
}
