//! Reading structures, parameters, metrics and forms from files or the catalog.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use geowb::catalog::{self, Params};
use geowb::json::{self, AnyStructure};
use geowb::{Backend, CFloat, GaussRat, Scalar, StructurePresentation};
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(geowb::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<geowb::Error> for CliError {
    fn from(e: geowb::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// A structure on the backend chosen for the run.
pub enum Loaded {
    Exact(StructurePresentation<GaussRat>),
    Float(StructurePresentation<CFloat>),
}

/// Exact data widens to float on request; float data never narrows.
pub fn on_backend(s: AnyStructure, backend: Option<Backend>) -> CliResult<Loaded> {
    match (s, backend) {
        (AnyStructure::Exact(p), None | Some(Backend::Exact)) => Ok(Loaded::Exact(p)),
        (AnyStructure::Exact(p), Some(Backend::Float)) => Ok(Loaded::Float(p.convert())),
        (AnyStructure::Float(p), None | Some(Backend::Float)) => Ok(Loaded::Float(p)),
        (AnyStructure::Float(p), Some(Backend::Exact)) => Err(CliError::Usage(format!(
            "{} has floating-point coefficients; use --backend float",
            p.name
        ))),
    }
}

/// Parses `{"name": "p/q" | {"re": .., "im": ..}}`.
pub fn parse_params(text: &str) -> CliResult<Params> {
    let v: Value = serde_json::from_str(text).map_err(|e| geowb::Error::Parse(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| geowb::Error::Parse("parameter file must be a JSON object".into()))?;
    let mut out = BTreeMap::new();
    for (k, v) in obj {
        let c = match v {
            Value::String(s) => GaussRat::parse_parts(s, "0")?,
            Value::Number(n) => GaussRat::parse_parts(&n.to_string(), "0")?,
            Value::Object(_) => {
                let j: json::ScalarJson =
                    serde_json::from_value(v.clone()).map_err(|e| geowb::Error::Parse(e.to_string()))?;
                json::scalar_from_json(&j)?
            }
            _ => return Err(geowb::Error::Parse(format!("parameter {k}: expected a string or {{re, im}}")).into()),
        };
        out.insert(k.clone(), c);
    }
    Ok(out)
}

pub fn load_params(path: Option<&Path>) -> CliResult<Params> {
    match path {
        Some(p) => parse_params(&read(p)?),
        None => Ok(Params::new()),
    }
}

/// `--structure FILE` or `--catalog KEY[:PRESET]` (with optional `--params`).
pub fn load_structure(
    structure: Option<&Path>,
    key: Option<&str>,
    params: Option<&Path>,
    backend: Option<Backend>,
) -> CliResult<Loaded> {
    let any = match (structure, key) {
        (Some(p), None) => {
            if params.is_some() {
                return Err(CliError::Usage("--params applies to --catalog only".into()));
            }
            json::parse_structure(&read(p)?)?
        }
        (None, Some(k)) => catalog::build(k, &load_params(params)?)?.into(),
        (Some(_), Some(_)) => return Err(CliError::Usage("give --structure or --catalog, not both".into())),
        (None, None) => return Err(CliError::Usage("a structure is required (--structure or --catalog)".into())),
    };
    on_backend(any, backend)
}

/// The backend named in a JSON file, if any.
pub fn file_backend(text: &str) -> CliResult<Option<Backend>> {
    let v: Value = serde_json::from_str(text).map_err(|e| geowb::Error::Parse(e.to_string()))?;
    match v.get("backend") {
        None => Ok(None),
        Some(b) => Ok(Some(
            serde_json::from_value(b.clone()).map_err(|e| geowb::Error::Parse(e.to_string()))?,
        )),
    }
}
