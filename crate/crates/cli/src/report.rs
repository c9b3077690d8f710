//! JSON rendering of verification results.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use qracah_core::report::{Check, Status, Witness};
use qracah_core::Matrix;

use crate::config::Suite;

/// Witness matrices larger than this in either direction are truncated to
/// their top-left corner plus a SHA-256 of the full matrix.
pub const WITNESS_LIMIT: usize = 12;

pub fn matrix_digest(m: &Matrix) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}x{}\n", m.rows(), m.cols()));
    for row in m.row_strings() {
        h.update(row.join(","));
        h.update("\n");
    }
    hex::encode(h.finalize())
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Scalar(x) => json!({ "kind": "scalar", "value": x.to_string() }),
        Witness::Text(s) => json!({ "kind": "text", "value": s }),
        Witness::Matrix(m) => {
            let truncated = m.rows() > WITNESS_LIMIT || m.cols() > WITNESS_LIMIT;
            let rows: Vec<Vec<String>> = m
                .row_strings()
                .into_iter()
                .take(WITNESS_LIMIT)
                .map(|r| r.into_iter().take(WITNESS_LIMIT).collect())
                .collect();
            let mut v = json!({
                "kind": "matrix",
                "rows": m.rows(),
                "cols": m.cols(),
                "entries": rows,
                "truncated": truncated,
            });
            if truncated {
                v["sha256"] = json!(matrix_digest(m));
            }
            v
        }
    }
}

pub fn check_json(suite: Suite, c: &Check, timing: bool) -> Value {
    let mut v = json!({
        "suite": suite.name(),
        "name": c.name,
        "anchor": c.anchor,
        "status": c.status.as_str(),
    });
    if let Some(w) = &c.witness {
        v["witness"] = witness_json(w);
    }
    if timing {
        v["elapsed_us"] = json!(c.elapsed.as_micros() as u64);
    }
    v
}

pub fn summary_json<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Value {
    let mut counts = [0usize; 4];
    for c in checks {
        counts[match c.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::Skipped => 3,
        }] += 1;
    }
    json!({
        "total": counts.iter().sum::<usize>(),
        "pass": counts[0],
        "fail": counts[1],
        "inconclusive": counts[2],
        "skipped": counts[3],
    })
}
