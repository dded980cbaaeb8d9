//! Full structure reports as canonical JSON or plain text.
//!
//! Frame labels: `"k"` is `Z_k`, `"kb"` is `conj Z_k` (1-based). Tensor
//! components are listed sparsely under keys like `"(1,2,1b,2b)"`.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::analysis::Analysis;
use crate::document::StructureDocument;
use crate::error::Error;
use crate::hermitian::HermitianTriple;
use crate::scalar::format_gaussian;
use crate::tensor::ComplexTensor;
use crate::theorems::{all_verdicts, heisenberg_normalize, taming_obstruction, taming_to_json};

pub const ENGINE_NAME: &str = "qkflat";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever the JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Lowercase hex SHA-256 of the canonical emission of `doc`.
pub fn input_digest(doc: &StructureDocument) -> String {
    Sha256::digest(doc.emit().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// `"3"` for `Z_3`, `"3b"` for `conj Z_3`.
pub fn frame_label(a: usize, n: usize) -> String {
    if a < n {
        format!("{}", a + 1)
    } else {
        format!("{}b", a - n + 1)
    }
}

/// Nonzero components keyed by their frame labels.
pub fn sparse_components(t: &ComplexTensor, n: usize) -> Value {
    let mut out = Map::new();
    for (idx, v) in t.nonzero_entries() {
        let labels: Vec<String> = idx.iter().map(|&a| frame_label(a, n)).collect();
        out.insert(format!("({})", labels.join(",")), json!(format_gaussian(v)));
    }
    Value::Object(out)
}

/// `∇_{F_a} F_b = Σ_c Γ[a][b][c] F_c` as `{"(a,b)": {"c": value}}`.
fn connection_table(gamma: &ComplexTensor, n: usize) -> Value {
    let mut out = Map::new();
    let m = 2 * n;
    for a in 0..m {
        for b in 0..m {
            let mut row = Map::new();
            for c in 0..m {
                let v = gamma.get(&[a, b, c]);
                if !num_traits::Zero::is_zero(v) {
                    row.insert(frame_label(c, n), json!(format_gaussian(v)));
                }
            }
            if !row.is_empty() {
                out.insert(format!("({},{})", frame_label(a, n), frame_label(b, n)), Value::Object(row));
            }
        }
    }
    Value::Object(out)
}

fn heisenberg_json(triple: &HermitianTriple) -> Value {
    match heisenberg_normalize(triple) {
        Ok(h) => {
            let p = h.change.matrix();
            let vectors: Vec<Vec<String>> =
                (0..3).map(|c| (0..6).map(|r| format_gaussian(p.get(&[r, c]))).collect()).collect();
            json!({
                "result": "normalized",
                "pivot": [h.pivot.0 + 1, h.pivot.1 + 1],
                "w": vectors,
                "brackets": connection_table(&h.brackets, 3),
            })
        }
        Err(e @ (Error::NotApplicable(_) | Error::WrongDimension { .. })) => {
            json!({ "result": "not_applicable", "reason": e.to_string() })
        }
        Err(e) => json!({ "result": "error", "reason": e.to_string() }),
    }
}

/// Everything the engine computes for one structure; key order is canonical.
pub fn report_value(doc: &StructureDocument, triple: &HermitianTriple) -> Value {
    let a = Analysis::new(triple.clone());
    let n = a.n();
    let mut out = Map::new();
    out.insert(
        "engine".into(),
        json!({ "name": ENGINE_NAME, "version": ENGINE_VERSION, "schema": SCHEMA_VERSION }),
    );
    out.insert("input".into(), json!({ "name": doc.name, "dim": triple.dim(), "sha256": input_digest(doc) }));
    out.insert("classification".into(), json!(a.classification()));
    out.insert(
        "connection".into(),
        json!({
            "levi_civita": connection_table(&a.levi_civita().in_frame(a.frame()), n),
            "canonical": connection_table(&a.canonical().in_frame(a.frame()), n),
        }),
    );
    out.insert("curvature".into(), serde_json::to_value(a.curvature_report()).expect("serializable"));
    out.insert(
        "components".into(),
        json!({
            "riemann": sparse_components(a.riemann_frame(), n),
            "hermitian": sparse_components(a.hermitian_frame(), n),
            // Indexed (i, j, k, l) for 𝓡_{i j̄ k l̄}, so every label is unbarred.
            "tosatti": sparse_components(&a.tosatti().components, usize::MAX),
        }),
    );
    out.insert("verdicts".into(), json!(all_verdicts(&a)));
    if triple.dim() == 6 {
        let taming = match taming_obstruction(triple) {
            Ok(r) => taming_to_json(&r),
            Err(e) => json!({ "result": "not_applicable", "reason": e.to_string() }),
        };
        out.insert("taming".into(), taming);
        out.insert("heisenberg".into(), heisenberg_json(triple));
    }
    Value::Object(out)
}

/// Canonical pretty JSON with a trailing newline.
pub fn report_json(doc: &StructureDocument, triple: &HermitianTriple) -> String {
    let mut s = serde_json::to_string_pretty(&report_value(doc, triple)).expect("serializable");
    s.push('\n');
    s
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "n/a".into(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if m.is_empty() => out.push((prefix.to_string(), "(none)".into())),
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

const SECTION_ORDER: [&str; 9] =
    ["engine", "input", "classification", "curvature", "verdicts", "connection", "components", "taming", "heisenberg"];

/// Plain-text rendering of [`report_value`]: one `key: value` line per leaf,
/// grouped by section.
pub fn render_text(report: &Value) -> String {
    let mut s = String::new();
    let obj = report.as_object().expect("report is an object");
    for (section, body) in SECTION_ORDER.iter().filter_map(|k| obj.get(*k).map(|v| (*k, v))) {
        s.push_str(&format!("== {section}\n"));
        match (section, body) {
            ("verdicts", Value::Array(vs)) => {
                for v in vs {
                    let met = v["hypotheses_met"].as_bool().unwrap_or(false);
                    let holds = v["conclusion_holds"].as_bool().unwrap_or(false);
                    let status = match (met, holds) {
                        (false, _) => "vacuous",
                        (true, true) => "holds",
                        (true, false) => "COUNTEREXAMPLE",
                    };
                    s.push_str(&format!("{}: {status}\n", scalar_text(&v["statement"])));
                }
            }
            _ => {
                let mut lines = Vec::new();
                flatten("", body, &mut lines);
                for (k, v) in lines {
                    if k.is_empty() {
                        s.push_str(&format!("{v}\n"));
                    } else {
                        s.push_str(&format!("{k}: {v}\n"));
                    }
                }
            }
        }
    }
    s
}
