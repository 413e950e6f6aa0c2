//! Loads complexes from files or from `example://` URIs.

use std::collections::BTreeMap;

use frolicher::bicomplex::{Bidegree, ComplexData, ComplexFile, DoubleComplex};
use frolicher::models::{build_cdga, build_square, example_calabi_eckmann, CdgaSpec, Shape, ZigzagShape};

use crate::error::CliError;

const EXAMPLE_SCHEME: &str = "example://";

pub fn parse_bidegree(s: &str) -> Result<Bidegree, CliError> {
    Bidegree::parse_key(s).ok_or_else(|| CliError::Usage(format!("expected a bidegree p,q but got {s:?}")))
}

fn parse_flag(s: &str, name: &str) -> Result<bool, CliError> {
    match s {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        _ => Err(CliError::Usage(format!("{name} must be 0 or 1, got {s:?}"))),
    }
}

fn parse_number<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::Usage(format!("{name} must be a nonnegative integer, got {s:?}")))
}

pub fn zigzag(start: Bidegree, generators: usize, left: bool, right: bool) -> Result<DoubleComplex, CliError> {
    if generators == 0 {
        return Err(CliError::Usage("a zigzag needs at least one generator".into()));
    }
    let shape = Shape::Zigzag(ZigzagShape::new(start, generators, left, right));
    if shape.support().iter().any(|b| b.p < 0 || b.q < 0) {
        return Err(CliError::Usage(format!("{shape} reaches a negative bidegree")));
    }
    Ok(shape.build())
}

pub fn calabi_eckmann(u: u32, v: u32, w: Option<u32>) -> Result<DoubleComplex, CliError> {
    if u > v {
        return Err(CliError::Usage(format!("Calabi-Eckmann parameters need u ≤ v, got u={u}, v={v}")));
    }
    example_calabi_eckmann(u, v, w).map_err(|e| CliError::invalid("model", e))
}

/// `example://dot`, `example://square?at=p,q`,
/// `example://zigzag?start=p,q&gens=g&left=0|1&right=0|1`,
/// `example://calabi-eckmann?u=U&v=V[&w=W]`.
fn example(uri: &str) -> Result<DoubleComplex, CliError> {
    let (name, query) = uri.split_once('?').unwrap_or((uri, ""));
    let params: BTreeMap<&str, &str> = query.split('&').filter(|s| !s.is_empty()).filter_map(|kv| kv.split_once('=')).collect();
    let get = |key: &str, default: &'static str| params.get(key).copied().unwrap_or(default);
    match name {
        "dot" => Ok(Shape::dot(parse_bidegree(get("at", "0,0"))?).build()),
        "square" => {
            let at = parse_bidegree(get("at", "0,0"))?;
            Ok(build_square(at.p, at.q))
        }
        "zigzag" => zigzag(
            parse_bidegree(get("start", "0,1"))?,
            parse_number(get("gens", "1"), "gens")?,
            parse_flag(get("left", "0"), "left")?,
            parse_flag(get("right", "1"), "right")?,
        ),
        "calabi-eckmann" => {
            let w = params.get("w").map(|w| parse_number(w, "w")).transpose()?;
            calabi_eckmann(parse_number(get("u", "1"), "u")?, parse_number(get("v", "1"), "v")?, w)
        }
        other => Err(CliError::Usage(format!("unknown example {other:?}; try dot, square, zigzag or calabi-eckmann"))),
    }
}

/// Reads a matrix-form complex file, a CDGA file (recognised by its `generators` key) or
/// a built-in example. Matrix-form files are returned unvalidated.
pub fn load_data(source: &str) -> Result<ComplexData, CliError> {
    if let Some(uri) = source.strip_prefix(EXAMPLE_SCHEME) {
        return example(uri).map(DoubleComplex::into_data);
    }
    let text = read(source)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::invalid("parse", format!("{source}: {e}")))?;
    if value.get("generators").is_some() {
        let spec: CdgaSpec = serde_json::from_value(value).map_err(|e| CliError::invalid("parse", format!("{source}: {e}")))?;
        let name = std::path::Path::new(source).file_stem().map_or("cdga".into(), |s| s.to_string_lossy().into_owned());
        return build_cdga(&spec, &name).map(DoubleComplex::into_data).map_err(|e| CliError::invalid("model", e));
    }
    ComplexFile::parse(&text).map_err(|e| CliError::invalid("parse", format!("{source}: {e}")))
}

pub fn load(source: &str) -> Result<DoubleComplex, CliError> {
    load_data(source)?.into_complex().map_err(|e| CliError::invalid("validation", e))
}

pub fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_string(), message: e.to_string() })
}
