//! JSON structure documents.
//!
//! ```json
//! {"name": "…", "dim": 4,
//!  "brackets": {"[1,2]": {"3": "1"}},
//!  "J": [["0","0","-1","0"], …],
//!  "g": "identity"}
//! ```
//!
//! Indices are 1-based. Exactly one of `g` (matrix or `"identity"`) and
//! `omega` (taming form) must be present. Emission is canonical: keys sorted,
//! only brackets `[a,b]` with `a < b`, zero entries omitted.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::hermitian::{AlmostComplexStructure, HermitianTriple, InvariantMetric};
use crate::lie::LieAlgebra;
use crate::linalg::is_identity;
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::tensor::RealTensor;

#[derive(Clone, Debug, PartialEq)]
pub enum MetricSpec {
    Identity,
    Metric(Vec<Vec<Rational>>),
    /// The metric is induced by this taming form.
    Taming(Vec<Vec<Rational>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureDocument {
    pub name: String,
    pub dim: usize,
    /// `(a, b) → {k → c_ab^k}` with 0-based indices and `a < b`.
    pub brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
    pub j: Vec<Vec<Rational>>,
    pub metric: MetricSpec,
}

fn syntax(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Syntax { path: path.into(), message: message.into() }
}

fn rational_at(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| e.at(path)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
        _ => Err(syntax(path, "expected a rational string such as \"-3/4\"")),
    }
}

fn matrix_at(v: &Value, path: &str, dim: usize) -> Result<Vec<Vec<Rational>>> {
    let rows = v.as_array().ok_or_else(|| syntax(path, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(syntax(path, format!("expected {dim} rows, found {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            let rp = format!("{path}[{}]", r + 1);
            let cells = row.as_array().ok_or_else(|| syntax(&rp, "expected an array"))?;
            if cells.len() != dim {
                return Err(syntax(&rp, format!("expected {dim} entries, found {}", cells.len())));
            }
            cells.iter().enumerate().map(|(c, x)| rational_at(x, &format!("{rp}[{}]", c + 1))).collect()
        })
        .collect()
}

/// `"[a,b]"` with 1-based indices.
fn parse_pair(key: &str, dim: usize, path: &str) -> Result<(usize, usize)> {
    let inner = key
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(path, "bracket key must look like \"[a,b]\""))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(syntax(path, "bracket key must name two indices"));
    }
    let a = parse_index(parts[0], dim, path)?;
    let b = parse_index(parts[1], dim, path)?;
    Ok((a, b))
}

fn parse_index(s: &str, dim: usize, path: &str) -> Result<usize> {
    let i: usize = s.parse().map_err(|_| syntax(path, format!("`{s}` is not an index")))?;
    if i == 0 || i > dim {
        return Err(syntax(path, format!("index {i} outside 1..={dim}")));
    }
    Ok(i - 1)
}

pub fn parse_document(text: &str) -> Result<StructureDocument> {
    let v: Value = serde_json::from_str(text).map_err(|e| syntax(format!("line {}", e.line()), e.to_string()))?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> Result<StructureDocument> {
    let obj = v.as_object().ok_or_else(|| syntax("$", "expected an object"))?;
    for key in obj.keys() {
        if !["name", "dim", "brackets", "J", "g", "omega"].contains(&key.as_str()) {
            return Err(syntax(key.as_str(), "unknown field"));
        }
    }
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(syntax("name", "expected a string")),
        None => String::from("unnamed"),
    };
    let dim = obj
        .get("dim")
        .ok_or_else(|| syntax("dim", "missing field"))?
        .as_u64()
        .ok_or_else(|| syntax("dim", "expected a positive integer"))? as usize;
    if dim == 0 || dim % 2 == 1 {
        return Err(Error::OddDimension(dim));
    }
    let mut full: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
    if let Some(b) = obj.get("brackets") {
        let map = b.as_object().ok_or_else(|| syntax("brackets", "expected an object"))?;
        for (key, val) in map {
            let path = format!("brackets.{key}");
            let (a, bb) = parse_pair(key, dim, &path)?;
            let comps = val.as_object().ok_or_else(|| syntax(&path, "expected an object of components"))?;
            for (k, x) in comps {
                let kp = format!("{path}.{k}");
                let kk = parse_index(k, dim, &kp)?;
                let value = rational_at(x, &kp)?;
                if value.is_zero() {
                    continue;
                }
                if a == bb {
                    return Err(Error::NotAntisymmetric { a, b: bb, k: kk });
                }
                let (lo, hi, signed) = if a < bb { (a, bb, value) } else { (bb, a, -value) };
                let slot = full.entry((lo, hi)).or_default();
                match slot.get(&kk) {
                    Some(prev) if *prev != signed => return Err(Error::NotAntisymmetric { a, b: bb, k: kk }),
                    _ => {
                        slot.insert(kk, signed);
                    }
                }
            }
        }
    }
    full.retain(|_, m| !m.is_empty());
    let j = matrix_at(obj.get("J").ok_or_else(|| syntax("J", "missing field"))?, "J", dim)?;
    let metric = match (obj.get("g"), obj.get("omega")) {
        (Some(_), Some(_)) => return Err(syntax("g", "give either g or omega, not both")),
        (None, None) => return Err(syntax("g", "missing field (or omega)")),
        (Some(Value::String(s)), None) if s == "identity" => MetricSpec::Identity,
        (Some(g), None) => MetricSpec::Metric(matrix_at(g, "g", dim)?),
        (None, Some(w)) => MetricSpec::Taming(matrix_at(w, "omega", dim)?),
    };
    Ok(StructureDocument { name, dim, brackets: full, j, metric })
}

fn rows_to_tensor(rows: &[Vec<Rational>]) -> Result<RealTensor> {
    RealTensor::from_rows(rows)
}

impl StructureDocument {
    pub fn algebra(&self) -> Result<LieAlgebra> {
        let mut entries = Vec::new();
        for (&(a, b), comps) in &self.brackets {
            for (&k, v) in comps {
                entries.push((a, b, k, v.clone()));
            }
        }
        LieAlgebra::from_brackets(self.dim, &entries)
    }

    pub fn to_triple(&self) -> Result<HermitianTriple> {
        let alg = self.algebra()?;
        let j = AlmostComplexStructure::new(rows_to_tensor(&self.j)?)?;
        match &self.metric {
            MetricSpec::Identity => HermitianTriple::new(alg, j, InvariantMetric::identity(self.dim)),
            MetricSpec::Metric(g) => HermitianTriple::new(alg, j, InvariantMetric::new(rows_to_tensor(g)?)?),
            MetricSpec::Taming(w) => HermitianTriple::from_taming(alg, j, &rows_to_tensor(w)?),
        }
    }

    /// Records the metric explicitly (or as `"identity"`).
    pub fn from_triple(name: &str, triple: &HermitianTriple) -> Self {
        let dim = triple.dim();
        let mut brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        let c = triple.algebra().structure_constants();
        for a in 0..dim {
            for b in a + 1..dim {
                for k in 0..dim {
                    let v = c.get(&[a, b, k]);
                    if !v.is_zero() {
                        brackets.entry((a, b)).or_default().insert(k, v.clone());
                    }
                }
            }
        }
        let g = triple.metric().matrix();
        let metric = if is_identity(g) { MetricSpec::Identity } else { MetricSpec::Metric(g.rows()) };
        StructureDocument { name: name.to_string(), dim, brackets, j: triple.j().matrix().rows(), metric }
    }

    pub fn to_value(&self) -> Value {
        let rows = |m: &[Vec<Rational>]| -> Value {
            Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|x| json!(format_rational(x))).collect())).collect())
        };
        let mut brackets = Map::new();
        for (&(a, b), comps) in &self.brackets {
            let mut inner = Map::new();
            for (&k, v) in comps {
                inner.insert((k + 1).to_string(), json!(format_rational(v)));
            }
            brackets.insert(format!("[{},{}]", a + 1, b + 1), Value::Object(inner));
        }
        let mut obj = Map::new();
        obj.insert("name".into(), json!(self.name));
        obj.insert("dim".into(), json!(self.dim));
        obj.insert("brackets".into(), Value::Object(brackets));
        obj.insert("J".into(), rows(&self.j));
        match &self.metric {
            MetricSpec::Identity => obj.insert("g".into(), json!("identity")),
            MetricSpec::Metric(g) => obj.insert("g".into(), rows(g)),
            MetricSpec::Taming(w) => obj.insert("omega".into(), rows(w)),
        };
        Value::Object(obj)
    }

    /// Canonical pretty-printed form; byte-identical for equal documents.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }
}

/// Parses and validates in one step.
pub fn load(text: &str) -> Result<(StructureDocument, HermitianTriple)> {
    let doc = parse_document(text)?;
    let triple = doc.to_triple()?;
    Ok((doc, triple))
}

pub fn builtin_example(name: &str) -> Result<StructureDocument> {
    let triple = fixtures::builtin(name)?;
    let mut doc = StructureDocument::from_triple(name, &triple);
    if name == "kodaira_thurston" {
        doc.metric = MetricSpec::Taming(fixtures::omega_standard(4).rows());
    }
    Ok(doc)
}
