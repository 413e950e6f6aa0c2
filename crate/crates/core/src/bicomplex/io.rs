use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::linalg::{format_rational, parse_rational, Matrix, Rational};

use super::{Bidegree, ComplexData, ComplexError, Differential, Grid};

/// Sign convention of the maps stored in a file.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `d1 d2 + d2 d1 = 0`, the internal convention.
    #[default]
    Anticommute,
    /// `d1 d2 = d2 d1`; converted on ingestion by negating `d2` on odd columns `p`.
    Commute,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Int(i64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    name: String,
    #[serde(default)]
    convention: Convention,
    grid: [usize; 2],
    #[serde(default)]
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    d1: BTreeMap<String, Vec<Vec<Entry>>>,
    #[serde(default)]
    d2: BTreeMap<String, Vec<Vec<Entry>>>,
    #[serde(default)]
    labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    certified_max_p: Option<i32>,
}

/// Reader and writer for the matrix-form JSON complex format.
pub struct ComplexFile;

fn key(s: &str, grid: Grid) -> Result<Bidegree, ComplexError> {
    let b = Bidegree::parse_key(s).ok_or_else(|| ComplexError::Format(format!("bad bidegree key {s:?}")))?;
    if !grid.contains(b) {
        return Err(ComplexError::OutsideGrid(b));
    }
    Ok(b)
}

fn entry(e: &Entry, at: &str) -> Result<Rational, ComplexError> {
    match e {
        Entry::Int(n) => Ok(crate::linalg::rat(*n)),
        Entry::Text(s) => {
            parse_rational(s).ok_or_else(|| ComplexError::Format(format!("bad rational {s:?} in map at {at}")))
        }
    }
}

impl ComplexFile {
    /// Parses a complex file. The result is not validated; see [`ComplexData::validate`].
    pub fn parse(text: &str) -> Result<ComplexData, ComplexError> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| ComplexError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let grid = Grid::new(raw.grid[0], raw.grid[1]);
        let mut dims = BTreeMap::new();
        for (k, &n) in &raw.dims {
            dims.insert(key(k, grid)?, n);
        }
        let mut data = ComplexData::new(raw.name, grid, |b| dims.get(&b).copied().unwrap_or(0));
        for (which, maps) in [(Differential::D1, &raw.d1), (Differential::D2, &raw.d2)] {
            for (k, rows) in maps {
                let b = key(k, grid)?;
                let cols = data.dim(b);
                let (dp, dq) = which.shift();
                let target = data.dim(b.shift(dp, dq));
                let entries = rows
                    .iter()
                    .map(|row| {
                        if row.len() != cols {
                            return Err(ComplexError::Format(format!(
                                "map at {k} has a row of length {} but the source has dimension {cols}",
                                row.len()
                            )));
                        }
                        row.iter().map(|e| entry(e, k)).collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if entries.len() != target && !(entries.is_empty() && (target == 0 || cols == 0)) {
                    return Err(ComplexError::Format(format!(
                        "map at {k} has {} rows but the target has dimension {target}",
                        entries.len()
                    )));
                }
                let mut m = if entries.is_empty() {
                    Matrix::zeros(target, cols)
                } else {
                    Matrix::from_flat(target, cols, entries.into_iter().flatten().collect())
                };
                if which == Differential::D2 && raw.convention == Convention::Commute && b.p % 2 == 1 {
                    m = -&m;
                }
                data.set_map(which, b, m)?;
            }
        }
        if !raw.labels.is_empty() {
            let mut labels = BTreeMap::new();
            for (k, l) in raw.labels {
                labels.insert(key(&k, grid)?, l);
            }
            data.set_labels(|b| labels.get(&b).cloned().unwrap_or_default())?;
        }
        data.set_certified_max_p(raw.certified_max_p);
        Ok(data)
    }

    /// Serializes in the internal (anticommuting) convention, keys in lexicographic order.
    pub fn to_value(data: &ComplexData) -> Value {
        let grid = data.grid();
        let mut dims = Map::new();
        let mut d1 = Map::new();
        let mut d2 = Map::new();
        let mut labels = Map::new();
        for b in grid.bidegrees() {
            let n = data.dim(b);
            if n == 0 {
                continue;
            }
            dims.insert(b.key(), json!(n));
            for (which, out) in [(Differential::D1, &mut d1), (Differential::D2, &mut d2)] {
                let m = data.map(which, b);
                if m.rows() > 0 && !m.is_zero() {
                    let rows: Vec<Vec<String>> =
                        m.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
                    out.insert(b.key(), json!(rows));
                }
            }
            if let Some(l) = data.labels(b) {
                labels.insert(b.key(), json!(l));
            }
        }
        let mut out = Map::new();
        out.insert("name".into(), json!(data.name));
        out.insert("convention".into(), json!("anticommute"));
        out.insert("grid".into(), json!([grid.p_len, grid.q_len]));
        out.insert("dims".into(), Value::Object(dims));
        out.insert("d1".into(), Value::Object(d1));
        out.insert("d2".into(), Value::Object(d2));
        if !labels.is_empty() {
            out.insert("labels".into(), Value::Object(labels));
        }
        if let Some(p) = data.certified_max_p() {
            out.insert("certified_max_p".into(), json!(p));
        }
        Value::Object(out)
    }

    pub fn to_string(data: &ComplexData) -> String {
        serde_json::to_string_pretty(&Self::to_value(data)).expect("JSON values serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE_COMMUTE: &str = r#"{
        "name": "square", "convention": "commute", "grid": [2, 2],
        "dims": {"0,0": 1, "1,0": 1, "0,1": 1, "1,1": 1},
        "d1": {"0,0": [["1"]], "0,1": [[1]]},
        "d2": {"0,0": [["1"]], "1,0": [["1"]]}
    }"#;

    #[test]
    fn commuting_input_is_twisted() {
        let data = ComplexFile::parse(SQUARE_COMMUTE).unwrap();
        assert!(data.validate().is_valid());
        assert_eq!(data.map(Differential::D2, Bidegree::new(1, 0)).into_owned(), Matrix::from_i64(1, 1, &[-1]));
    }

    #[test]
    fn round_trip() {
        let data = ComplexFile::parse(SQUARE_COMMUTE).unwrap();
        let text = ComplexFile::to_string(&data);
        let again = ComplexFile::parse(&text).unwrap();
        assert_eq!(again, data);
        assert_eq!(ComplexFile::to_string(&again), text);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = ComplexFile::parse("{\n  \"grid\": [1,\n}").unwrap_err();
        match err {
            ComplexError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other}"),
        }
        let err = ComplexFile::parse(r#"{"grid":[1,1],"dims":{"0,0":2},"d1":{"0,0":[["1","x"]]}}"#).unwrap_err();
        assert!(matches!(err, ComplexError::Format(_)));
        let err = ComplexFile::parse(r#"{"grid":[1,1],"dims":{"3,0":2}}"#).unwrap_err();
        assert!(matches!(err, ComplexError::OutsideGrid(_)));
    }
}
