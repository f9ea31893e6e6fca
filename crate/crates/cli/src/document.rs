//! JSON documents: `{"format_version": 1, "kind": ..., "payload": ...}`.
//!
//! Emission is canonical: object keys are sorted (serde_json's default map is
//! a `BTreeMap`), rationals are reduced strings and subspaces are written by
//! their reduced echelon bases.

use std::collections::BTreeSet;

use hodge_sigma::hodge::{BiGrading, HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use hodge_sigma::linalg::{format_rational, parse_rational, GaussianRational, LatticeIndex, Matrix, Subspace};
use hodge_sigma::sigma::{certify_sigma_operator, SigmaOperator};
use serde_json::{json, Map, Value};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("schema error at {pointer}: {message}")]
pub struct SchemaError {
    /// JSON pointer to the offending value; empty for the document root.
    pub pointer: String,
    pub message: String,
}

fn err<T>(pointer: &str, message: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError {
        pointer: pointer.to_string(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Matrix,
    Mhs,
    Bigrading,
    Operator,
    Report,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Matrix => "matrix",
            Kind::Mhs => "mhs",
            Kind::Bigrading => "bigrading",
            Kind::Operator => "operator",
            Kind::Report => "report",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        [Kind::Matrix, Kind::Mhs, Kind::Bigrading, Kind::Operator, Kind::Report]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone)]
pub enum Document {
    Matrix(Matrix),
    /// Not necessarily validated; commands validate as needed.
    Mhs(MixedHodgeStructure),
    Bigrading(BiGrading),
    Operator(SigmaOperator),
    Report(Map<String, Value>),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Matrix(_) => Kind::Matrix,
            Document::Mhs(_) => Kind::Mhs,
            Document::Bigrading(_) => Kind::Bigrading,
            Document::Operator(_) => Kind::Operator,
            Document::Report(_) => Kind::Report,
        }
    }

    pub fn to_value(&self) -> Value {
        let payload = match self {
            Document::Matrix(m) => matrix_to_json(m),
            Document::Mhs(m) => mhs_to_json(m),
            Document::Bigrading(bg) => bigrading_to_json(bg),
            Document::Operator(op) => operator_to_json(op),
            Document::Report(r) => Value::Object(r.clone()),
        };
        json!({
            "format_version": FORMAT_VERSION,
            "kind": self.kind().name(),
            "payload": payload,
        })
    }
}

/// Canonical single-line text of a document.
pub fn emit_document(doc: &Document) -> String {
    doc.to_value().to_string()
}

pub fn emit_pretty(doc: &Document) -> String {
    serde_json::to_string_pretty(&doc.to_value()).expect("values always serialize")
}

pub fn parse_document(text: &str) -> Result<Document, SchemaError> {
    let value: Value = serde_json::from_str(text).or_else(|e| err("", format!("invalid JSON: {e}")))?;
    document_from_value(&value)
}

pub fn document_from_value(value: &Value) -> Result<Document, SchemaError> {
    let obj = object(value, "", &["format_version", "kind", "payload"])?;
    match obj.get("format_version").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => {}
        Some(v) => return err("/format_version", format!("unsupported version {v}")),
        None => return err("/format_version", "expected an integer"),
    }
    let kind_name = string(field(obj, "kind", "")?, "/kind")?;
    let kind = Kind::parse(kind_name).ok_or_else(|| SchemaError {
        pointer: "/kind".into(),
        message: format!("unknown kind {kind_name:?}"),
    })?;
    let payload = field(obj, "payload", "")?;
    let at = "/payload";
    Ok(match kind {
        Kind::Matrix => Document::Matrix(matrix_from_json(payload, at)?),
        Kind::Mhs => Document::Mhs(mhs_from_json(payload, at)?),
        Kind::Bigrading => Document::Bigrading(bigrading_from_json(payload, at)?),
        Kind::Operator => Document::Operator(operator_from_json(payload, at)?),
        Kind::Report => match payload {
            Value::Object(m) => Document::Report(m.clone()),
            _ => return err(at, "expected an object"),
        },
    })
}

fn object<'a>(v: &'a Value, at: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>, SchemaError> {
    let Value::Object(m) = v else {
        return err(at, "expected an object");
    };
    if let Some(extra) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        return err(&format!("{at}/{extra}"), "unexpected key");
    }
    Ok(m)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, SchemaError> {
    m.get(key).ok_or_else(|| SchemaError {
        pointer: format!("{at}/{key}"),
        message: "missing".into(),
    })
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a [Value], SchemaError> {
    match v {
        Value::Array(a) => Ok(a),
        _ => err(at, "expected an array"),
    }
}

fn string<'a>(v: &'a Value, at: &str) -> Result<&'a str, SchemaError> {
    v.as_str().ok_or_else(|| SchemaError {
        pointer: at.to_string(),
        message: "expected a string".into(),
    })
}

fn integer(v: &Value, at: &str) -> Result<i64, SchemaError> {
    v.as_i64().ok_or_else(|| SchemaError {
        pointer: at.to_string(),
        message: "expected an integer".into(),
    })
}

fn dimension(v: &Value, at: &str) -> Result<usize, SchemaError> {
    v.as_u64().map(|d| d as usize).ok_or_else(|| SchemaError {
        pointer: at.to_string(),
        message: "expected a non-negative integer".into(),
    })
}

pub fn scalar_to_json(x: &GaussianRational) -> Value {
    json!({ "re": format_rational(&x.re), "im": format_rational(&x.im) })
}

pub fn scalar_from_json(v: &Value, at: &str) -> Result<GaussianRational, SchemaError> {
    let m = object(v, at, &["re", "im"])?;
    let part = |key: &str| {
        let here = format!("{at}/{key}");
        let s = string(field(m, key, at)?, &here)?;
        parse_rational(s).ok_or_else(|| SchemaError {
            pointer: here,
            message: format!("not a rational: {s:?}"),
        })
    };
    Ok(GaussianRational::new(part("re")?, part("im")?))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

/// Row-major; `cols` fixes the width when there are no rows to infer it from.
fn matrix_with_width(v: &Value, at: &str, cols: Option<usize>) -> Result<Matrix, SchemaError> {
    let rows = array(v, at)?;
    let width = cols.or_else(|| rows.first().and_then(Value::as_array).map(Vec::len)).unwrap_or(0);
    let mut entries = Vec::with_capacity(rows.len() * width);
    for (i, row) in rows.iter().enumerate() {
        let here = format!("{at}/{i}");
        let row = array(row, &here)?;
        if row.len() != width {
            return err(&here, format!("expected {width} entries, found {}", row.len()));
        }
        for (j, x) in row.iter().enumerate() {
            entries.push(scalar_from_json(x, &format!("{here}/{j}"))?);
        }
    }
    Matrix::new(rows.len(), width, entries).or_else(|e| err(at, e.to_string()))
}

pub fn matrix_from_json(v: &Value, at: &str) -> Result<Matrix, SchemaError> {
    matrix_with_width(v, at, None)
}

/// A subspace as the `n x k` matrix of its canonical basis columns.
fn subspace_to_json(s: &Subspace) -> Value {
    matrix_to_json(s.basis())
}

fn subspace_from_json(v: &Value, at: &str, n: usize) -> Result<Subspace, SchemaError> {
    let m = matrix_with_width(v, at, None)?;
    if m.rows() != n {
        return err(at, format!("basis has {} rows, expected {n}", m.rows()));
    }
    let s = Subspace::column_span(&m);
    if s.dim() != m.cols() {
        return err(at, "basis columns are linearly dependent");
    }
    Ok(s)
}

fn steps_to_json<'a>(steps: impl Iterator<Item = (i64, &'a Subspace)>) -> Value {
    Value::Array(
        steps
            .map(|(index, s)| json!({ "index": index, "basis": subspace_to_json(s) }))
            .collect(),
    )
}

fn steps_from_json(v: &Value, at: &str, n: usize) -> Result<Vec<(i64, Subspace)>, SchemaError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (k, step) in array(v, at)?.iter().enumerate() {
        let here = format!("{at}/{k}");
        let m = object(step, &here, &["index", "basis"])?;
        let index = integer(field(m, "index", &here)?, &format!("{here}/index"))?;
        if !seen.insert(index) {
            return err(&format!("{here}/index"), format!("duplicate index {index}"));
        }
        let basis = subspace_from_json(field(m, "basis", &here)?, &format!("{here}/basis"), n)?;
        out.push((index, basis));
    }
    Ok(out)
}

pub fn mhs_to_json(m: &MixedHodgeStructure) -> Value {
    json!({
        "dim": m.ambient_dim(),
        "weight": steps_to_json(m.weight().steps()),
        "hodge": steps_to_json(m.hodge().steps()),
    })
}

pub fn mhs_from_json(v: &Value, at: &str) -> Result<MixedHodgeStructure, SchemaError> {
    let m = object(v, at, &["dim", "weight", "hodge"])?;
    let n = dimension(field(m, "dim", at)?, &format!("{at}/dim"))?;
    let w = steps_from_json(field(m, "weight", at)?, &format!("{at}/weight"), n)?;
    let f = steps_from_json(field(m, "hodge", at)?, &format!("{at}/hodge"), n)?;
    let w = WeightFiltration::new(n, w).or_else(|e| err(&format!("{at}/weight"), e.to_string()))?;
    let f = HodgeFiltration::new(n, f).or_else(|e| err(&format!("{at}/hodge"), e.to_string()))?;
    MixedHodgeStructure::new(w, f).or_else(|e| err(at, e.to_string()))
}

fn pieces_to_json<'a>(pieces: impl Iterator<Item = (&'a LatticeIndex, &'a Subspace)>) -> Value {
    Value::Array(
        pieces
            .map(|(idx, s)| json!({ "p": idx.p, "q": idx.q, "basis": subspace_to_json(s) }))
            .collect(),
    )
}

fn pieces_from_json(v: &Value, at: &str, n: usize) -> Result<Vec<(LatticeIndex, Subspace)>, SchemaError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (k, piece) in array(v, at)?.iter().enumerate() {
        let here = format!("{at}/{k}");
        let m = object(piece, &here, &["p", "q", "basis"])?;
        let p = integer(field(m, "p", &here)?, &format!("{here}/p"))?;
        let q = integer(field(m, "q", &here)?, &format!("{here}/q"))?;
        let idx = LatticeIndex::new(p, q);
        if !seen.insert(idx) {
            return err(&here, format!("duplicate piece {idx}"));
        }
        let basis = subspace_from_json(field(m, "basis", &here)?, &format!("{here}/basis"), n)?;
        out.push((idx, basis));
    }
    Ok(out)
}

pub fn bigrading_to_json(bg: &BiGrading) -> Value {
    json!({ "dim": bg.ambient_dim(), "pieces": pieces_to_json(bg.pieces().iter()) })
}

pub fn bigrading_from_json(v: &Value, at: &str) -> Result<BiGrading, SchemaError> {
    let m = object(v, at, &["dim", "pieces"])?;
    let n = dimension(field(m, "dim", at)?, &format!("{at}/dim"))?;
    let here = format!("{at}/pieces");
    let pieces = pieces_from_json(field(m, "pieces", at)?, &here, n)?;
    BiGrading::new(n, pieces).or_else(|e| err(&here, e.to_string()))
}

pub fn operator_to_json(op: &SigmaOperator) -> Value {
    json!({
        "matrix": matrix_to_json(op.matrix()),
        "eigenspaces": pieces_to_json(op.spectrum().iter()),
    })
}

/// The matrix is recertified; the stored eigenspaces must match exactly.
pub fn operator_from_json(v: &Value, at: &str) -> Result<SigmaOperator, SchemaError> {
    let m = object(v, at, &["matrix", "eigenspaces"])?;
    let here = format!("{at}/matrix");
    let matrix = matrix_from_json(field(m, "matrix", at)?, &here)?;
    let op = certify_sigma_operator(&matrix).or_else(|e| err(&here, e.to_string()))?;
    let here = format!("{at}/eigenspaces");
    let claimed = pieces_from_json(field(m, "eigenspaces", at)?, &here, matrix.rows())?;
    let actual: Vec<_> = op.spectrum().iter().map(|(i, s)| (*i, s.clone())).collect();
    let mut sorted = claimed;
    sorted.sort_by_key(|(i, _)| *i);
    if sorted != actual {
        return err(&here, "eigenspaces do not match the certified spectrum");
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    #[test]
    fn scalar_parsing_reduces() {
        let x = scalar_from_json(&json!({"re": "2/4", "im": "-3/4"}), "").unwrap();
        assert_eq!(scalar_to_json(&x), json!({"re": "1/2", "im": "-3/4"}));
        let e = scalar_from_json(&json!({"re": "1/0", "im": "0"}), "/x").unwrap_err();
        assert_eq!(e.pointer, "/x/re");
        let e = scalar_from_json(&json!({"re": 1, "im": "0"}), "/x").unwrap_err();
        assert_eq!(e.pointer, "/x/re");
    }

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_int_pairs(&[&[(0, 0), (0, 2)], &[(0, 0), (2, 0)]]);
        let doc = Document::Matrix(m.clone());
        let text = emit_document(&doc);
        match parse_document(&text).unwrap() {
            Document::Matrix(back) => assert_eq!(back, m),
            other => panic!("wrong kind {:?}", other.kind()),
        }
        assert!(text.starts_with(r#"{"format_version":1,"kind":"matrix","payload":[[{"im":"0","re":"0"}"#));
    }

    #[test]
    fn ragged_matrix_points_at_row() {
        let v = json!([[{"re": "1", "im": "0"}], []]);
        assert_eq!(matrix_from_json(&v, "/payload").unwrap_err().pointer, "/payload/1");
    }

    #[test]
    fn duplicate_piece_is_schema_error() {
        let e1 = json!([[{"re": "1", "im": "0"}], [{"re": "0", "im": "0"}]]);
        let e2 = json!([[{"re": "0", "im": "0"}], [{"re": "1", "im": "0"}]]);
        let v = json!({
            "dim": 2,
            "pieces": [{"p": 0, "q": 0, "basis": e1}, {"p": 0, "q": 0, "basis": e2}],
        });
        let e = bigrading_from_json(&v, "/payload").unwrap_err();
        assert_eq!(e.pointer, "/payload/pieces/1");
    }

    #[test]
    fn header_errors() {
        let e = parse_document(r#"{"format_version":2,"kind":"matrix","payload":[]}"#).unwrap_err();
        assert_eq!(e.pointer, "/format_version");
        let e = parse_document(r#"{"format_version":1,"kind":"tensor","payload":[]}"#).unwrap_err();
        assert_eq!(e.pointer, "/kind");
        let e = parse_document(r#"{"format_version":1,"kind":"matrix"}"#).unwrap_err();
        assert_eq!(e.pointer, "/payload");
        let e = parse_document(r#"{"format_version":1,"kind":"matrix","payload":[],"x":0}"#).unwrap_err();
        assert_eq!(e.pointer, "/x");
        assert!(parse_document("not json").is_err());
    }

    #[test]
    fn dependent_basis_rejected() {
        let v = json!([[{"re": "1", "im": "0"}, {"re": "2", "im": "0"}]]);
        assert!(subspace_from_json(&v, "", 1).is_err());
        let s = subspace_from_json(&json!([[], []]), "", 2).unwrap();
        assert!(s.is_zero());
        assert_eq!(subspace_to_json(&s), json!([[], []]));
    }

    #[test]
    fn operator_round_trip_and_mismatch() {
        let m = Matrix::diagonal(&[g(0, 0), g(2, 0)]);
        let op = certify_sigma_operator(&m).unwrap();
        let v = operator_to_json(&op);
        assert_eq!(operator_from_json(&v, "").unwrap(), op);
        let mut bad = v.clone();
        bad["eigenspaces"] = json!([]);
        assert_eq!(operator_from_json(&bad, "").unwrap_err().pointer, "/eigenspaces");
        let nil = json!({"matrix": matrix_to_json(&Matrix::from_int_pairs(&[&[(0, 0), (1, 0)], &[(0, 0), (0, 0)]])), "eigenspaces": []});
        assert_eq!(operator_from_json(&nil, "").unwrap_err().pointer, "/matrix");
    }
}
