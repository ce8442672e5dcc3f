//! Query handling behind the `goodtrace` command: a JSON query grammar with a
//! canonical form, dispatch to the decision procedures, and an append-only
//! JSONL ledger of verdict records.
//!
//! A record's `digest` is the SHA-256 of the canonical query text. Everything
//! in a record except `wall_time_ms` is a function of the query alone, so
//! re-running a corpus reproduces its ledger up to timings.

mod dispatch;
mod schema;

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub use schema::{BasisSpec, GroupSpec, Kind, Options, Payload, Query};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Compute(#[from] goodtrace::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerdictRecord {
    pub digest: String,
    pub kind: Kind,
    pub query: Value,
    pub verdict: bool,
    pub certificate: Value,
    /// Present when the query asked for the oracle cross-check.
    pub oracle: Option<Value>,
    pub version: &'static str,
    pub wall_time: Duration,
}

impl VerdictRecord {
    /// `false` only when an oracle ran and disagreed.
    pub fn oracle_agrees(&self) -> bool {
        self.oracle
            .as_ref()
            .is_none_or(|o| o["agree"] == Value::Bool(true))
    }

    /// Every field that depends only on the query.
    pub fn deterministic_part(&self) -> Value {
        let mut m = Map::new();
        m.insert("digest".into(), json!(self.digest));
        m.insert("kind".into(), json!(self.kind.as_str()));
        m.insert("query".into(), self.query.clone());
        m.insert("verdict".into(), json!(self.verdict));
        m.insert("certificate".into(), self.certificate.clone());
        if let Some(o) = &self.oracle {
            m.insert("oracle".into(), o.clone());
        }
        m.insert("version".into(), json!(self.version));
        Value::Object(m)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.deterministic_part();
        let ms = (self.wall_time.as_secs_f64() * 1e6).round() / 1e3;
        v["wall_time_ms"] = json!(ms);
        v
    }

    /// One JSON object on a single line.
    pub fn to_line(&self) -> String {
        self.to_json().to_string()
    }

    pub fn human(&self) -> String {
        let mut out = format!(
            "{}: {}\nverdict: {}\n",
            self.kind,
            &self.digest[..16],
            self.verdict
        );
        if let Some(reason) = self.certificate.get("reason").and_then(Value::as_str) {
            out.push_str(&format!("reason: {reason}\n"));
        }
        out.push_str("certificate:\n");
        out.push_str(&indent(
            &serde_json::to_string_pretty(&self.certificate).expect("serializable"),
        ));
        if let Some(o) = &self.oracle {
            out.push_str(&format!(
                "oracle: {} ({})\n",
                if self.oracle_agrees() {
                    "agrees"
                } else {
                    "DISAGREES"
                },
                o["method"].as_str().unwrap_or_default()
            ));
        }
        out
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

pub fn digest(q: &Query) -> String {
    Sha256::digest(q.canonical().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn run_query(q: &Query) -> Result<VerdictRecord, CliError> {
    let start = Instant::now();
    let outcome = dispatch::dispatch(&q.payload, &q.options)?;
    Ok(VerdictRecord {
        digest: digest(q),
        kind: q.kind(),
        query: q.to_value(),
        verdict: outcome.verdict,
        certificate: outcome.certificate,
        oracle: outcome.oracle,
        version: VERSION,
        wall_time: start.elapsed(),
    })
}

/// Parses a batch: one query per line, skipping blank lines and lines
/// starting with `#`.
pub fn parse_batch(text: &str) -> Result<Vec<Query>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            Query::parse(l).map_err(|e| match e {
                CliError::Schema(m) => CliError::Schema(format!("line {}: {m}", i + 1)),
                other => other,
            })
        })
        .collect()
}

/// Appends records to the ledger, one line each, in the order given.
pub fn append_to_ledger(path: &Path, records: &[VerdictRecord]) -> Result<(), CliError> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&r.to_line());
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())?;
    Ok(())
}
