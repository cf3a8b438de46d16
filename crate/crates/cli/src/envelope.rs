//! Report envelope: schema header, command echo, results, and a checksum
//! over the serialized results array. Wall-clock timings are opt-in and the
//! default output carries none, so identical runs produce identical bytes.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub schema_version: &'static str,
    pub command: String,
    pub params: Value,
    pub results: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Value>,
    /// `sha256:<hex>` over the JSON bytes of `results`.
    pub checksum: String,
}

impl ReportEnvelope {
    pub fn new(command: &str, params: Value, results: Vec<Value>, timings: Option<Value>) -> Self {
        let bytes = serde_json::to_vec(&results).expect("results serialize");
        let digest = Sha256::digest(&bytes);
        let mut checksum = String::with_capacity(71);
        checksum.push_str("sha256:");
        for byte in digest {
            checksum.push_str(&format!("{byte:02x}"));
        }
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            params,
            results,
            timings,
            checksum,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serialize");
        s.push('\n');
        s
    }

    /// True when any result carries a status that should flip the exit code.
    pub fn has_finding(&self) -> bool {
        self.results.iter().any(|r| {
            matches!(
                r.get("status").and_then(Value::as_str),
                Some("mismatch") | Some("falsification") | Some("paper claim unreproduced")
            )
        })
    }

    /// Fixed-column CSV projection. Column values come from the result
    /// objects; absent fields project as empty cells.
    pub fn to_csv_string(&self, columns: &[&str]) -> String {
        let mut out = String::new();
        out.push_str(&columns.join(","));
        out.push('\n');
        for row in &self.results {
            let cells: Vec<String> = columns
                .iter()
                .map(|c| match row.get(*c) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn checksum_covers_results_exactly() {
        let a = ReportEnvelope::new("x", json!({}), vec![json!({"v": 1})], None);
        let b = ReportEnvelope::new("y", json!({"p": 2}), vec![json!({"v": 1})], None);
        assert_eq!(a.checksum, b.checksum); // same results, same checksum
        let c = ReportEnvelope::new("x", json!({}), vec![json!({"v": 2})], None);
        assert_ne!(a.checksum, c.checksum);
    }

    #[test]
    fn finding_statuses_flip_the_flag() {
        let clean = ReportEnvelope::new("x", json!({}), vec![json!({"status": "match"})], None);
        assert!(!clean.has_finding());
        let bad = ReportEnvelope::new("x", json!({}), vec![json!({"status": "mismatch"})], None);
        assert!(bad.has_finding());
        let fals = ReportEnvelope::new("x", json!({}), vec![json!({"status": "falsification"})], None);
        assert!(fals.has_finding());
    }

    #[test]
    fn csv_projects_fixed_columns() {
        let env = ReportEnvelope::new(
            "x",
            json!({}),
            vec![json!({"a": 1, "b": "t", "c": 2.5}), json!({"a": 2})],
            None,
        );
        assert_eq!(env.to_csv_string(&["a", "b", "c"]), "a,b,c\n1,t,2.5\n2,,\n");
    }
}
