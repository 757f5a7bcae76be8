//! The JSON brane document.
//!
//! ```json
//! {
//!   "branes": {
//!     "L1": { "kind": "line", "r": "1", "d": "0", "c": "1/2", "b": "1/2" },
//!     "C":  { "kind": "pl", "r": "2", "d": "0", "b": "0",
//!             "breakpoints": [["0", "0"], ["1/4", "1/4"], ["3/4", "-1/4"], ["1", "0"]] }
//!   },
//!   "surgeries": {
//!     "S": { "first": "L1", "second": "L2", "points": [0], "b": "0" }
//!   }
//! }
//! ```
//!
//! `points` lists positions in the sorted intersection list of the two
//! branes, or is the string `"all"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use syz_core::{line_to_pl, surger, BraneCollection, Error, LineBrane, PLMultiSection, Rational, SurgerySpec};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Brane {
    Line(LineBrane),
    Pl(PLMultiSection),
}

impl Brane {
    pub fn section(&self) -> PLMultiSection {
        match self {
            Brane::Line(l) => line_to_pl(l),
            Brane::Pl(p) => p.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Selection {
    Indices(Vec<usize>),
    All(AllTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllTag {
    All,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryEntry {
    pub first: String,
    pub second: String,
    pub points: Selection,
    pub b: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BraneDocument {
    pub branes: BTreeMap<String, Brane>,
    pub surgeries: BTreeMap<String, SurgeryEntry>,
}

/// An integer given either as a JSON number or as an integral rational string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum IntField {
    Number(i64),
    Text(Rational),
}

impl IntField {
    fn value(&self) -> Option<i64> {
        match self {
            IntField::Number(n) => Some(*n),
            IntField::Text(q) => q.to_integer().and_then(|n| i64::try_from(n).ok()),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Line,
    Pl,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBrane {
    kind: Kind,
    r: IntField,
    d: IntField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<Rational>,
    b: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    breakpoints: Option<Vec<(Rational, Rational)>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurgery {
    first: String,
    second: String,
    points: Selection,
    #[serde(default = "zero")]
    b: Rational,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    branes: BTreeMap<String, RawBrane>,
    #[serde(default)]
    surgeries: BTreeMap<String, RawSurgery>,
}

fn zero() -> Rational {
    Rational::ZERO
}

/// 1-based line of the first occurrence of `"key"` in `text`.
fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.find(&needle).map_or(1, |pos| text[..pos].matches('\n').count() + 1)
}

impl BraneDocument {
    pub fn parse(text: &str) -> Result<BraneDocument, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawDocument = serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
            line: e.inner().line(),
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })?;

        let mut doc = BraneDocument::default();
        for (name, rb) in raw.branes {
            let field_err = |field: &str, message: String| CliError::Parse {
                line: line_of(text, &name),
                field: if field.is_empty() { format!("branes.{name}") } else { format!("branes.{name}.{field}") },
                message,
            };
            let r =
                rb.r.value()
                    .and_then(|r| u32::try_from(r).ok())
                    .ok_or_else(|| field_err("r", "rank must be a positive integer".into()))?;
            let d = rb.d.value().ok_or_else(|| field_err("d", "degree must be an integer".into()))?;
            let brane = match rb.kind {
                Kind::Line => {
                    if rb.breakpoints.is_some() {
                        return Err(field_err("breakpoints", "line branes take no breakpoints".into()));
                    }
                    let c = rb.c.ok_or_else(|| field_err("c", "line branes need an intercept".into()))?;
                    Brane::Line(LineBrane::new(r, d, c, rb.b).map_err(|e| field_err("", e.to_string()))?)
                }
                Kind::Pl => {
                    if rb.c.is_some() {
                        return Err(field_err("c", "PL branes take breakpoints instead of an intercept".into()));
                    }
                    let bps =
                        rb.breakpoints.ok_or_else(|| field_err("breakpoints", "PL branes need breakpoints".into()))?;
                    Brane::Pl(
                        PLMultiSection::new(r, d, rb.b, bps).map_err(|e| field_err("breakpoints", e.to_string()))?,
                    )
                }
            };
            doc.branes.insert(name, brane);
        }
        for (name, rs) in raw.surgeries {
            let line = line_of(text, &name);
            if doc.branes.contains_key(&name) {
                return Err(CliError::Parse {
                    line,
                    field: format!("surgeries.{name}"),
                    message: "name already used by a brane".into(),
                });
            }
            for (field, target) in [("first", &rs.first), ("second", &rs.second)] {
                if !doc.branes.contains_key(target) {
                    return Err(CliError::Parse {
                        line,
                        field: format!("surgeries.{name}.{field}"),
                        message: format!("unknown brane `{target}`"),
                    });
                }
            }
            let points = match rs.points {
                Selection::Indices(mut v) => {
                    v.sort_unstable();
                    Selection::Indices(v)
                }
                all => all,
            };
            doc.surgeries.insert(name, SurgeryEntry { first: rs.first, second: rs.second, points, b: rs.b });
        }
        Ok(doc)
    }

    /// Normalized JSON: sorted names, canonical rationals, integers as strings.
    pub fn to_json(&self) -> String {
        let int = |n: i64| IntField::Text(Rational::from(n));
        let raw = RawDocument {
            branes: self
                .branes
                .iter()
                .map(|(name, brane)| {
                    let raw = match brane {
                        Brane::Line(l) => RawBrane {
                            kind: Kind::Line,
                            r: int(i64::from(l.r())),
                            d: int(l.d()),
                            c: Some(l.c()),
                            b: l.b(),
                            breakpoints: None,
                        },
                        Brane::Pl(p) => RawBrane {
                            kind: Kind::Pl,
                            r: int(i64::from(p.r())),
                            d: int(p.d()),
                            c: None,
                            b: p.b(),
                            breakpoints: Some(p.breakpoints().to_vec()),
                        },
                    };
                    (name.clone(), raw)
                })
                .collect(),
            surgeries: self
                .surgeries
                .iter()
                .map(|(name, s)| {
                    let raw = RawSurgery {
                        first: s.first.clone(),
                        second: s.second.clone(),
                        points: s.points.clone(),
                        b: s.b,
                    };
                    (name.clone(), raw)
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("document serializes") + "\n"
    }

    pub fn brane(&self, name: &str) -> Result<&Brane, CliError> {
        self.branes.get(name).ok_or_else(|| CliError::UnknownName(name.to_string()))
    }

    pub fn line(&self, name: &str) -> Result<&LineBrane, CliError> {
        match self.brane(name)? {
            Brane::Line(l) => Ok(l),
            Brane::Pl(_) => {
                Err(Error::Precondition(format!("`{name}` is a PL brane; this operation takes line branes")).into())
            }
        }
    }

    pub fn spec(&self, name: &str) -> Result<SurgerySpec, CliError> {
        let entry = self.surgeries.get(name).ok_or_else(|| CliError::UnknownName(name.to_string()))?;
        let (l1, l2) = (*self.line(&entry.first)?, *self.line(&entry.second)?);
        let spec = match &entry.points {
            Selection::Indices(idx) => SurgerySpec::from_indices(l1, l2, idx, entry.b)?,
            Selection::All(_) => {
                let n = syz_core::intersect_lines(&l1, &l2)?.len();
                SurgerySpec::from_indices(l1, l2, &(0..n).collect::<Vec<_>>(), entry.b)?
            }
        };
        Ok(spec)
    }

    /// A brane, or the result of a named surgery.
    pub fn collection(&self, name: &str) -> Result<BraneCollection, CliError> {
        if self.surgeries.contains_key(name) {
            return Ok(surger(&self.spec(name)?));
        }
        Ok(self.brane(name)?.section().into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FINAL: &str = r#"{
  "branes": {
    "L1": { "kind": "line", "r": 1, "d": 0, "c": "1/2", "b": "1/2" },
    "L2": { "kind": "line", "r": "1", "d": "3", "c": "0", "b": "0" }
  },
  "surgeries": {
    "S": { "first": "L1", "second": "L2", "points": [0], "b": "0" },
    "T": { "first": "L1", "second": "L2", "points": "all" }
  }
}"#;

    #[test]
    fn parses_and_normalizes() {
        let doc = BraneDocument::parse(FINAL).unwrap();
        assert_eq!(doc.branes.len(), 2);
        let json = doc.to_json();
        assert!(json.contains("\"r\": \"1\""));
        assert_eq!(BraneDocument::parse(&json).unwrap(), doc);
        assert_eq!(BraneDocument::parse(&json).unwrap().to_json(), json);
        assert_eq!(doc.spec("T").unwrap().points().len(), 3);
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let bad = FINAL.replace("\"c\": \"1/2\"", "\"c\": \"1/x\"");
        match BraneDocument::parse(&bad) {
            Err(CliError::Parse { line, field, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "branes.L1.c");
            }
            other => panic!("{other:?}"),
        }
        let unknown = FINAL.replace("\"second\": \"L2\", \"points\": [0]", "\"second\": \"L3\", \"points\": [0]");
        match BraneDocument::parse(&unknown) {
            Err(CliError::Parse { field, message, .. }) => {
                assert_eq!(field, "surgeries.S.second");
                assert!(message.contains("L3"));
            }
            other => panic!("{other:?}"),
        }
        let not_coprime = FINAL.replace("\"r\": \"1\", \"d\": \"3\"", "\"r\": \"3\", \"d\": \"3\"");
        assert!(matches!(BraneDocument::parse(&not_coprime), Err(CliError::Parse { line: 4, .. })));
    }

    #[test]
    fn empty_document() {
        let doc = BraneDocument::parse("{}").unwrap();
        assert!(doc.branes.is_empty() && doc.surgeries.is_empty());
    }
}
