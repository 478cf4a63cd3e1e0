//! Fan file format: a document with a `rank` entry and one `cone` entry per
//! generating cone, e.g.
//!
//! ```text
//! rank = 2
//! cone "sigma" = [[1,0],[0,1]]
//! cone = [[-1,-2]]
//! ```
//!
//! Faces are synthesized automatically and the result is validated.
//! Non-primitive generators are normalized and duplicate cones are merged,
//! each with a warning.

use crate::document::{Document, ParseError, Value};
use num_bigint::BigInt;
use thiserror::Error;
use twistoric::fan::{primitive_vector, Fan, FanError, Violation};

#[derive(Debug, Error)]
pub enum FanDocError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {}", format_violations(.0))]
    Validation(Vec<Violation>),
    #[error(transparent)]
    Fan(FanError),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<FanError> for FanDocError {
    fn from(e: FanError) -> Self {
        match e {
            FanError::Invalid(v) => FanDocError::Validation(v),
            other => FanDocError::Fan(other),
        }
    }
}

#[derive(Debug)]
pub struct ParsedFan {
    pub fan: Fan,
    pub warnings: Vec<String>,
}

fn vector_from_value(v: &Value) -> Result<Vec<BigInt>, FanDocError> {
    let items = v
        .as_list()
        .ok_or_else(|| FanDocError::Schema("generator must be a list of integers".into()))?;
    items
        .iter()
        .map(|x| {
            x.as_int()
                .cloned()
                .ok_or_else(|| FanDocError::Schema("generator entries must be integers".into()))
        })
        .collect()
}

/// Optionally named generator lists, in document order.
pub type NamedConeList = Vec<(Option<String>, Vec<Vec<BigInt>>)>;

pub fn cones_from_document(doc: &Document) -> Result<(usize, NamedConeList), FanDocError> {
    let rank_entry = doc
        .first("rank")
        .ok_or_else(|| FanDocError::Schema("missing `rank` entry".into()))?;
    let rank = rank_entry
        .value
        .as_usize()
        .ok_or_else(|| FanDocError::Schema("`rank` must be a nonnegative integer".into()))?;

    let mut cones = Vec::new();
    for entry in &doc.entries {
        match entry.key.as_str() {
            "rank" => {}
            "cone" => {
                let gens = entry
                    .value
                    .as_list()
                    .ok_or_else(|| {
                        FanDocError::Schema("`cone` must be a list of generators".into())
                    })?
                    .iter()
                    .map(vector_from_value)
                    .collect::<Result<Vec<_>, _>>()?;
                cones.push((entry.name.clone(), gens));
            }
            other => {
                return Err(FanDocError::Schema(format!(
                    "unknown key `{other}` in fan document"
                )));
            }
        }
    }
    Ok((rank, cones))
}

/// Parses a fan document, synthesizes faces, validates, and reports
/// normalization warnings.
pub fn parse_fan(text: &str) -> Result<ParsedFan, FanDocError> {
    let doc = Document::parse(text)?;
    let (rank, named_cones) = cones_from_document(&doc)?;

    let mut warnings = Vec::new();
    let mut cone_lists = Vec::new();
    for (name, gens) in &named_cones {
        let label = name
            .clone()
            .unwrap_or_else(|| format!("#{}", cone_lists.len()));
        let mut seen: Vec<Vec<BigInt>> = Vec::new();
        for g in gens {
            if g.iter().all(|x| x == &BigInt::from(0)) {
                warnings.push(format!("cone {label}: zero generator dropped"));
                continue;
            }
            let p = primitive_vector(g);
            if &p != g {
                warnings.push(format!("cone {label}: non-primitive generator normalized"));
            }
            if seen.contains(&p) {
                warnings.push(format!("cone {label}: duplicate generator dropped"));
            } else {
                seen.push(p);
            }
        }
        cone_lists.push(seen);
    }

    let fan = Fan::new(rank, cone_lists.clone())?;
    // duplicate cones collapse to the same canonical id
    let mut ids: Vec<usize> = cone_lists
        .iter()
        .filter_map(|gens| fan.cone_id_by_generators(gens))
        .collect();
    ids.sort_unstable();
    let before = ids.len();
    ids.dedup();
    for _ in ids.len()..before {
        warnings.push("duplicate cone merged".to_string());
    }

    Ok(ParsedFan { fan, warnings })
}

/// Serializes a fan as a parseable document listing every cone.
pub fn fan_to_document(fan: &Fan) -> Document {
    let mut doc = Document::default();
    doc.push("rank", None, Value::Int(BigInt::from(fan.ambient_rank())));
    for cone in fan.cones() {
        let gens = Value::List(
            cone.generators()
                .iter()
                .map(|g| Value::List(g.iter().map(|x| Value::Int(x.clone())).collect()))
                .collect(),
        );
        doc.push("cone", Some(&cone.id().to_string()), gens);
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_c2_fan() {
        let parsed = parse_fan("rank = 2\ncone \"sigma\" = [[1,0],[0,1]]\n").unwrap();
        assert_eq!(parsed.fan.cones().len(), 4);
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn warns_on_duplicate_cone() {
        let parsed = parse_fan("rank = 2\ncone = [[1,0]]\ncone = [[2,0]]\n").unwrap();
        assert_eq!(parsed.fan.cones().len(), 2);
        assert!(parsed
            .warnings
            .iter()
            .any(|w| w.contains("non-primitive generator normalized")));
        assert!(parsed.warnings.iter().any(|w| w.contains("duplicate cone")));
    }

    #[test]
    fn rejects_non_integer_entries() {
        let err = parse_fan("rank = 2\ncone = [[1,\"x\"]]\n").unwrap_err();
        assert!(matches!(err, FanDocError::Schema(_)));
        let err = parse_fan("rank = 2\ncone = [[1,0.5]]\n").unwrap_err();
        assert!(matches!(err, FanDocError::Parse(_)));
    }

    #[test]
    fn round_trips_through_document() {
        let parsed = parse_fan("rank = 2\ncone = [[1,0],[0,1]]\ncone = [[0,-1]]").unwrap();
        let doc = fan_to_document(&parsed.fan);
        let text = doc.to_text();
        let reparsed = parse_fan(&text).unwrap();
        assert_eq!(reparsed.fan.cones().len(), parsed.fan.cones().len());
    }

    #[test]
    fn missing_rank_is_schema_error() {
        assert!(matches!(
            parse_fan("cone = [[1,0]]"),
            Err(FanDocError::Schema(_))
        ));
    }
}
