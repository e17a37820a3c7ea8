//! Input documents: functions, polytopes, lifted polytopes, measures,
//! valuation specs, matrices, witnesses and reports.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::report::SuiteReport;
use super::witness::Witness;
use crate::convex::{LiftedPolytope, MaxAffineFn, RationalMatrix};
use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::valuation::{DiscreteMeasure, ValuationSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Function(MaxAffineFn),
    Polytope(Polytope),
    Lifted(LiftedPolytope),
    Measure(DiscreteMeasure),
    Spec(ValuationSpec),
    Matrix(RationalMatrix),
    Witness(Box<Witness>),
    Report(Box<SuiteReport>),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Function(_) => "function",
            Document::Polytope(_) => "polytope",
            Document::Lifted(_) => "lifted polytope",
            Document::Measure(_) => "measure",
            Document::Spec(_) => "valuation spec",
            Document::Matrix(_) => "matrix",
            Document::Witness(_) => "witness",
            Document::Report(_) => "report",
        }
    }

    /// Canonical JSON text of the document.
    pub fn to_json(&self) -> String {
        match self {
            Document::Function(x) => to_json(x),
            Document::Polytope(x) => to_json(x),
            Document::Lifted(x) => to_json(x),
            Document::Measure(x) => to_json(x),
            Document::Spec(x) => to_json(x),
            Document::Matrix(x) => to_json(x),
            Document::Witness(x) => to_json(x),
            Document::Report(x) => to_json(x),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

/// Parses one document, recognizing its kind from the fields present. A
/// `dim`/`vertices` document is a lifted polytope when its vertices have
/// `dim + 1` entries.
pub fn parse_document(text: &str, location: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(location, e))?;
    let obj = value.as_object().ok_or_else(|| Error::Parse {
        location: location.to_string(),
        message: "expected a JSON object".into(),
    })?;
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("kind") {
        Document::Witness(Box::new(from_str(text, location)?))
    } else if has("suite") {
        Document::Report(Box::new(from_str(text, location)?))
    } else if has("variant") {
        Document::Spec(from_str(text, location)?)
    } else if has("atoms") {
        Document::Measure(from_str(text, location)?)
    } else if has("pieces") {
        Document::Function(from_str(text, location)?)
    } else if has("entries") {
        Document::Matrix(from_str(text, location)?)
    } else if has("vertices") {
        let dim = obj.get("dim").and_then(Value::as_u64);
        let width = obj
            .get("vertices")
            .and_then(Value::as_array)
            .and_then(|vs| vs.first())
            .and_then(Value::as_array)
            .map(|v| v.len() as u64);
        match (dim, width) {
            (Some(d), Some(w)) if w == d + 1 => Document::Lifted(from_str(text, location)?),
            _ => Document::Polytope(from_str(text, location)?),
        }
    } else {
        return Err(Error::Parse {
            location: location.to_string(),
            message: "unrecognized document".into(),
        });
    })
}

fn from_str<T: serde::de::DeserializeOwned>(text: &str, location: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(location, e))
}

fn parse_error(location: &str, e: serde_json::Error) -> Error {
    let location = if e.line() > 0 {
        format!("{location}:{}:{}", e.line(), e.column())
    } else {
        location.to_string()
    };
    Error::Parse {
        location,
        message: e.to_string(),
    }
}

pub fn read_document(path: &Path) -> Result<Document> {
    let location = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        location: location.clone(),
        message: e.to_string(),
    })?;
    parse_document(&text, &location)
}

pub fn parse_inputs<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<Document>> {
    paths.iter().map(|p| read_document(p.as_ref())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_round_trip() {
        let text = r#"{"dim": 1, "pieces": [
            {"a": ["1/1"], "b": "0/1"},
            {"a": ["-1/1"], "b": "0/1"},
            {"a": ["0/1"], "b": "3/6"}]}"#;
        let doc = parse_document(text, "f.json").unwrap();
        let Document::Function(f) = &doc else { panic!("{doc:?}") };
        assert_eq!(f.len(), 3);
        let canonical = doc.to_json();
        assert!(canonical.contains("\"1/2\""));
        assert_eq!(parse_document(&canonical, "again").unwrap(), doc);
        assert_eq!(parse_document(&canonical, "again").unwrap().to_json(), canonical);
    }

    #[test]
    fn recognizes_kinds() {
        let poly = r#"{"dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}"#;
        assert_eq!(parse_document(poly, "p").unwrap().kind(), "polytope");
        let lifted = r#"{"dim": 1, "vertices": [["-1", "0"], ["1", "0"]]}"#;
        assert_eq!(parse_document(lifted, "l").unwrap().kind(), "lifted polytope");
        let spec = r#"{"variant": "EquivariantEq1", "dim": 3, "c": "0",
            "nu": {"atoms": [{"s": "1", "w": "1"}, {"s": "-1", "w": "1"}]}}"#;
        assert_eq!(parse_document(spec, "s").unwrap().kind(), "valuation spec");
        let m = r#"{"dim": 2, "entries": [["1", "1"], ["0", "1"]]}"#;
        assert_eq!(parse_document(m, "m").unwrap().kind(), "matrix");
    }

    #[test]
    fn errors_carry_location() {
        let bad = r#"{"atoms": [{"s": "0/1", "w": "1/1"}]}"#;
        match parse_document(bad, "nu.json") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("nu.json")),
            other => panic!("{other:?}"),
        }
        let bad = r#"{"dim": 2, "pieces": [{"a": ["1/0", "1"], "b": "0"}]}"#;
        assert!(matches!(parse_document(bad, "f"), Err(Error::Parse { .. })));
        let bad = r#"{"dim": 2, "pieces": [{"a": ["1"], "b": "0"}]}"#;
        assert!(matches!(parse_document(bad, "f"), Err(Error::Parse { .. })));
    }
}
