//! JSON file formats for forms, structures and metrics.
//!
//! Coefficients are written as strings: `"p/q"` on the exact backend and
//! round-trip decimal strings on the float backend.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{InvariantForm, Monomial};
use crate::lie::{RealPresentation, StructurePresentation};
use crate::metric::HermitianMetric;
use crate::scalar::{Backend, CFloat, GaussRat, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub holo: Vec<usize>,
    pub anti: Vec<usize>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureJson {
    pub name: String,
    pub n: usize,
    pub dphi: Vec<FormJson>,
    #[serde(default = "default_backend")]
    pub backend: Backend,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealStructureJson {
    pub name: String,
    /// Number of real generators.
    pub n: usize,
    pub de: Vec<FormJson>,
    pub pairing: Vec<(usize, usize)>,
    #[serde(default = "default_backend")]
    pub backend: Backend,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricJson {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: Vec<Vec<ScalarJson>>,
    #[serde(default = "default_backend")]
    pub backend: Backend,
}

fn default_backend() -> Backend {
    Backend::Exact
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn scalar_to_json<S: Scalar>(c: &S) -> ScalarJson {
    let (re, im) = c.to_json_parts();
    ScalarJson { re, im }
}

pub fn scalar_from_json<S: Scalar>(j: &ScalarJson) -> Result<S> {
    S::parse_parts(&j.re, &j.im)
}

pub fn form_to_json<S: Scalar>(f: &InvariantForm<S>) -> FormJson {
    FormJson {
        n: f.rank(),
        terms: f
            .terms()
            .map(|(m, c)| {
                let (re, im) = c.to_json_parts();
                TermJson {
                    holo: m.holo_indices(),
                    anti: m.anti_indices(),
                    re,
                    im,
                }
            })
            .collect(),
        backend: None,
    }
}

/// Index lists need not be sorted; the permutation sign is applied.
pub fn form_from_json<S: Scalar>(j: &FormJson) -> Result<InvariantForm<S>> {
    let mut out = InvariantForm::zero(j.n);
    for t in &j.terms {
        let c = S::parse_parts(&t.re, &t.im)?;
        match Monomial::from_indices(j.n, &t.holo, &t.anti)? {
            Some((m, s)) => out.add_term(m, if s > 0 { c } else { -c }),
            None => {
                return Err(Error::Parse(format!(
                    "repeated index in term holo {:?} anti {:?}",
                    t.holo, t.anti
                )))
            }
        }
    }
    Ok(out)
}

pub fn structure_to_json<S: Scalar>(p: &StructurePresentation<S>) -> StructureJson {
    StructureJson {
        name: p.name.clone(),
        n: p.n(),
        dphi: p.dphi().iter().map(form_to_json).collect(),
        backend: S::BACKEND,
    }
}

pub fn structure_from_json<S: Scalar>(j: &StructureJson) -> Result<StructurePresentation<S>> {
    if j.backend != S::BACKEND {
        return Err(Error::Parse(format!("expected a {} structure, found {}", S::BACKEND, j.backend)));
    }
    if j.dphi.len() != j.n {
        return Err(Error::Parse(format!("n = {} but {} values of dφ", j.n, j.dphi.len())));
    }
    let dphi = j.dphi.iter().map(form_from_json).collect::<Result<Vec<_>>>()?;
    StructurePresentation::new(j.name.clone(), dphi)
}

pub fn real_structure_to_json<S: Scalar>(p: &RealPresentation<S>) -> RealStructureJson {
    RealStructureJson {
        name: p.name.clone(),
        n: p.de.len(),
        de: p.de.iter().map(form_to_json).collect(),
        pairing: p.pairing.clone(),
        backend: S::BACKEND,
    }
}

pub fn real_structure_from_json<S: Scalar>(j: &RealStructureJson) -> Result<RealPresentation<S>> {
    if j.backend != S::BACKEND {
        return Err(Error::Parse(format!("expected a {} structure, found {}", S::BACKEND, j.backend)));
    }
    if j.de.len() != j.n {
        return Err(Error::Parse(format!("n = {} but {} values of de", j.n, j.de.len())));
    }
    Ok(RealPresentation {
        name: j.name.clone(),
        de: j.de.iter().map(form_from_json).collect::<Result<Vec<_>>>()?,
        pairing: j.pairing.clone(),
    })
}

pub fn metric_to_json<S: Scalar>(m: &HermitianMetric<S>) -> MetricJson {
    MetricJson {
        n: m.n(),
        h: m.matrix().iter().map(|r| r.iter().map(scalar_to_json).collect()).collect(),
        backend: S::BACKEND,
    }
}

pub fn metric_from_json<S: Scalar>(j: &MetricJson, eps: f64) -> Result<HermitianMetric<S>> {
    if j.h.len() != j.n || j.h.iter().any(|r| r.len() != j.n) {
        return Err(Error::Parse(format!("H must be {0}×{0}", j.n)));
    }
    let h = j
        .h
        .iter()
        .map(|r| r.iter().map(scalar_from_json).collect::<Result<Vec<S>>>())
        .collect::<Result<Vec<_>>>()?;
    HermitianMetric::new(h, eps)
}

/// A structure file of either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyStructure {
    Exact(StructurePresentation<GaussRat>),
    Float(StructurePresentation<CFloat>),
}

impl AnyStructure {
    pub fn backend(&self) -> Backend {
        match self {
            AnyStructure::Exact(_) => Backend::Exact,
            AnyStructure::Float(_) => Backend::Float,
        }
    }

    pub fn to_json(&self) -> StructureJson {
        match self {
            AnyStructure::Exact(p) => structure_to_json(p),
            AnyStructure::Float(p) => structure_to_json(p),
        }
    }

    /// The float view of either backend.
    pub fn to_float(&self) -> StructurePresentation<CFloat> {
        match self {
            AnyStructure::Exact(p) => p.convert(),
            AnyStructure::Float(p) => p.clone(),
        }
    }
}

impl From<crate::catalog::Built> for AnyStructure {
    fn from(b: crate::catalog::Built) -> Self {
        match b {
            crate::catalog::Built::Exact(p) => AnyStructure::Exact(p),
            crate::catalog::Built::Float(p) => AnyStructure::Float(p),
        }
    }
}

/// Parses a structure file. A file with `"de"` and `"pairing"` is read as a
/// real presentation and complexified.
pub fn parse_structure(text: &str) -> Result<AnyStructure> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    if value.get("de").is_some() {
        let j: RealStructureJson = serde_json::from_value(value).map_err(parse_err)?;
        return Ok(match j.backend {
            Backend::Exact => {
                AnyStructure::Exact(crate::lie::complexify_real_presentation(&real_structure_from_json(&j)?)?)
            }
            Backend::Float => {
                AnyStructure::Float(crate::lie::complexify_real_presentation(&real_structure_from_json(&j)?)?)
            }
        });
    }
    let j: StructureJson = serde_json::from_value(value).map_err(parse_err)?;
    Ok(match j.backend {
        Backend::Exact => AnyStructure::Exact(structure_from_json(&j)?),
        Backend::Float => AnyStructure::Float(structure_from_json(&j)?),
    })
}

pub fn parse_form<S: Scalar>(text: &str) -> Result<InvariantForm<S>> {
    let j: FormJson = serde_json::from_str(text).map_err(parse_err)?;
    form_from_json(&j)
}

pub fn parse_metric<S: Scalar>(text: &str, eps: f64) -> Result<HermitianMetric<S>> {
    let j: MetricJson = serde_json::from_str(text).map_err(parse_err)?;
    metric_from_json(&j, eps)
}

pub fn to_string_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
