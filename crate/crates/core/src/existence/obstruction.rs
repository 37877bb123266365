//! Obstruction certificates: an invariant `β` whose `dβ` (or the top part of
//! `∂∂̄β`) is `Σ cᵢ ψⁱ∧ψ̄ⁱ` with simple `ψⁱ` and a common phase on the `cᵢ`.
//!
//! Pairing such a form with a transverse `(p,p)`-form gives `Σ cᵢ/σ_q` times
//! positive numbers, which cannot vanish, while Stokes forces the integral
//! to be zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{sigma, InvariantForm, Monomial};
use crate::json::{form_from_json, form_to_json, scalar_from_json, scalar_to_json, FormJson, ScalarJson};
use crate::lie::StructurePresentation;
use crate::positivity::SimpleForm;
use crate::scalar::{Backend, CFloat, GaussRat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    /// `dβ`; rules out p-symplectic forms.
    D,
    /// `(∂∂̄β)^{n−p,n−p}`; rules out p-pluriclosed forms.
    DelbarDel,
}

impl CertificateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateMode::D => "d",
            CertificateMode::DelbarDel => "delbar-del",
        }
    }

    /// Required degree of `β`.
    pub fn beta_degree(self, n: usize, p: usize) -> Option<usize> {
        let top = (2 * n).checked_sub(2 * p)?;
        match self {
            CertificateMode::D => top.checked_sub(1),
            CertificateMode::DelbarDel => top.checked_sub(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionCertificate<S: Scalar> {
    pub name: String,
    pub beta: InvariantForm<S>,
    pub mode: CertificateMode,
    pub p: usize,
    pub decomposition: Vec<(S, SimpleForm<S>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub name: String,
    pub structure: String,
    pub mode: CertificateMode,
    pub p: usize,
    pub valid: bool,
    /// The computed `dβ` or `(∂∂̄β)^{n−p,n−p}`.
    pub target: String,
    /// `cᵢ/σ_q`; all real and of one sign when valid.
    pub normalized: Vec<String>,
    pub conclusion: Option<String>,
    pub failure: Option<String>,
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.mode {
            CertificateMode::D => "dβ",
            CertificateMode::DelbarDel => "(∂∂̄β)^{top}",
        };
        writeln!(f, "certificate {} on {} (p = {})", self.name, self.structure, self.p)?;
        writeln!(f, "  {op} = {}", self.target)?;
        match (&self.conclusion, &self.failure) {
            (Some(c), _) => writeln!(f, "  {c} (invariant certificate verified)"),
            (_, Some(e)) => writeln!(f, "  rejected: {e}"),
            _ => Ok(()),
        }
    }
}

fn target<S: Scalar>(pres: &StructurePresentation<S>, cert: &ObstructionCertificate<S>, eps: f64) -> Result<InvariantForm<S>> {
    let n = pres.n();
    let q = n - cert.p;
    match cert.mode {
        CertificateMode::D => pres.differential(&cert.beta),
        CertificateMode::DelbarDel => Ok(pres.ddbar(&cert.beta, eps)?.bidegree_project(q, q)),
    }
}

fn sum_of_squares<S: Scalar>(n: usize, dec: &[(S, SimpleForm<S>)]) -> Result<InvariantForm<S>> {
    let mut acc = InvariantForm::zero(n);
    for (c, psi) in dec {
        let f = psi.to_form(n)?;
        acc = acc + f.wedge(&f.conjugate())?.scale(c);
    }
    Ok(acc)
}

/// Checks the certificate against `pres`. Structural problems (degrees,
/// ranks) are errors; a certificate that is well-formed but wrong yields a
/// report with `valid = false`.
pub fn verify_obstruction_certificate<S: Scalar>(
    pres: &StructurePresentation<S>,
    cert: &ObstructionCertificate<S>,
    eps: f64,
) -> Result<CertificateReport> {
    let n = pres.n();
    if cert.beta.rank() != n {
        return Err(Error::RankMismatch(n, cert.beta.rank()));
    }
    if cert.p == 0 || cert.p >= n {
        return Err(Error::Degree(format!("p = {} must lie in 1..{n}", cert.p)));
    }
    let q = n - cert.p;
    let want = cert
        .mode
        .beta_degree(n, cert.p)
        .ok_or_else(|| Error::Degree("no admissible degree for β".into()))?;
    if cert.beta.is_negligible(eps) {
        return Err(Error::Certificate("β is zero".into()));
    }
    if cert.beta.terms().any(|(m, _)| m.degree() != want) {
        return Err(Error::Degree(format!(
            "mode {} needs deg β = {want}",
            cert.mode.as_str()
        )));
    }
    for (_, psi) in &cert.decomposition {
        if psi.q() != q || psi.factors.iter().any(|f| f.len() != n) {
            return Err(Error::Degree(format!("each ψ must be a simple ({q},0)-form")));
        }
    }

    let t = target(pres, cert, eps)?;
    let sig: S = sigma(q);
    let sig_inv = sig.inv().expect("σ ≠ 0");
    let normalized: Vec<S> = cert.decomposition.iter().map(|(c, _)| c.clone() * sig_inv.clone()).collect();
    let mut report = CertificateReport {
        name: cert.name.clone(),
        structure: pres.name.clone(),
        mode: cert.mode,
        p: cert.p,
        valid: false,
        target: t.to_string(),
        normalized: normalized.iter().map(|c| c.to_string()).collect(),
        conclusion: None,
        failure: None,
    };

    let failure = if cert.decomposition.is_empty() {
        Some("empty decomposition".to_string())
    } else if cert.decomposition.iter().any(|(c, _)| c.is_negligible(eps)) {
        Some("zero coefficient".into())
    } else if !common_phase(cert.decomposition.iter().map(|(c, _)| c), eps) {
        Some("coefficients do not share a phase".into())
    } else {
        let s = sum_of_squares(n, &cert.decomposition)?;
        if s.is_negligible(eps) {
            Some("Σ cᵢ ψⁱ∧ψ̄ⁱ vanishes".into())
        } else if !(t.clone() - s).is_negligible(eps) {
            Some("decomposition does not match the computed form".into())
        } else {
            None
        }
    };
    match failure {
        Some(e) => report.failure = Some(e),
        None => {
            report.valid = true;
            report.conclusion = Some(match cert.mode {
                CertificateMode::D => format!("no {}-symplectic form", cert.p),
                CertificateMode::DelbarDel => format!("no {}-pluriclosed form (invariant level)", cert.p),
            });
        }
    }
    Ok(report)
}

/// `cᵢ·c̄₁` real and positive for all `i`.
fn common_phase<'a, S: Scalar>(mut cs: impl Iterator<Item = &'a S>, eps: f64) -> bool {
    let Some(first) = cs.next() else { return true };
    let c1 = first.conj();
    cs.all(|c| {
        let r = c.clone() * c1.clone();
        r.im().is_negligible(eps) && r.real_sign(eps) == std::cmp::Ordering::Greater
    })
}

/// Certificates of the form `dβ = c φ^I∧φ̄^I` (or a sum of such terms with a
/// common phase), tried over monomial `β` and then over sums of two monomials
/// with `±1` coefficients. `budget` caps the number of candidates examined.
pub fn search_certificates<S: Scalar>(
    pres: &StructurePresentation<S>,
    p: usize,
    mode: CertificateMode,
    budget: usize,
    eps: f64,
) -> Result<Vec<ObstructionCertificate<S>>> {
    let n = pres.n();
    if p == 0 || p >= n {
        return Err(Error::Degree(format!("p = {p} must lie in 1..{n}")));
    }
    let deg = mode
        .beta_degree(n, p)
        .ok_or_else(|| Error::Degree("no admissible degree for β".into()))?;
    let monos: Vec<Monomial> = (0..=deg.min(n))
        .flat_map(|a| if deg - a <= n { Monomial::of_bidegree(n, a, deg - a) } else { vec![] })
        .collect();
    let mut found = vec![];
    let mut tried = 0usize;
    let mut attempt = |beta: InvariantForm<S>, found: &mut Vec<ObstructionCertificate<S>>| -> Result<bool> {
        if tried >= budget {
            return Ok(false);
        }
        tried += 1;
        let mut cert = ObstructionCertificate {
            name: format!("search-{tried}"),
            beta,
            mode,
            p,
            decomposition: vec![],
        };
        let t = target(pres, &cert, eps)?;
        if let Some(dec) = diagonal_decomposition(&t, n - p, eps)? {
            cert.decomposition = dec;
            if verify_obstruction_certificate(pres, &cert, eps)?.valid {
                found.push(cert);
            }
        }
        Ok(true)
    };
    for m in &monos {
        if !attempt(InvariantForm::from_monomial(n, *m, S::one()), &mut found)? {
            return Ok(found);
        }
    }
    for (i, a) in monos.iter().enumerate() {
        for b in &monos[i + 1..] {
            for s in [S::one(), -S::one()] {
                let mut beta = InvariantForm::from_monomial(n, *a, S::one());
                beta.add_term(*b, s);
                if !attempt(beta, &mut found)? {
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}

/// Writes `t` as `Σ c_I φ^I∧φ̄^I` when every term has that shape.
fn diagonal_decomposition<S: Scalar>(
    t: &InvariantForm<S>,
    q: usize,
    eps: f64,
) -> Result<Option<Vec<(S, SimpleForm<S>)>>> {
    let n = t.rank();
    if t.is_negligible(eps) {
        return Ok(None);
    }
    let mut out = vec![];
    for (m, c) in t.terms() {
        if m.holo != m.anti || m.bidegree() != (q, q) {
            return Ok(None);
        }
        let psi = SimpleForm::coordinate(n, &m.holo_indices());
        let f = psi.to_form(n)?;
        let unit: S = f.wedge(&f.conjugate())?.coeff(*m);
        let Some(inv) = unit.inv() else { return Ok(None) };
        out.push((c.clone() * inv, psi));
    }
    Ok(Some(out))
}

fn word_cert<S: Scalar>(
    name: &str,
    n: usize,
    beta: &str,
    p: usize,
    c: S,
    psi: &[usize],
) -> ObstructionCertificate<S> {
    ObstructionCertificate {
        name: name.into(),
        beta: InvariantForm::word(n, beta, S::one()).expect("valid word"),
        mode: CertificateMode::D,
        p,
        decomposition: vec![(c, SimpleForm::coordinate(n, psi))],
    }
}

/// `(catalog key, certificate)` for the exact structures.
pub fn exact_certificate_library() -> Vec<(&'static str, ObstructionCertificate<GaussRat>)> {
    vec![
        ("nakamura-iv-6", word_cert("iv6-d-phi12-2b", 4, "122b", 2, GaussRat::one(), &[1, 2])),
        ("nakamura-v-5", word_cert("v5-d-phi23-4b", 5, "234b", 3, -GaussRat::one(), &[2, 3])),
        ("nakamura-v-14", word_cert("v14-d-phi123-2b3b", 5, "1232b3b", 2, -GaussRat::one(), &[1, 2, 3])),
    ]
}

/// `dφ¹ = −(i/2)φ^{11̄}` on the 6-dimensional solvmanifold.
pub fn s1_pi2_certificate() -> ObstructionCertificate<CFloat> {
    word_cert("s1-pi2-d-phi1", 3, "1", 2, CFloat::new(0.0, -0.5), &[1])
}

/// The certificate for a catalog key, on either backend.
pub fn library_certificate(key: &str) -> Option<AnyCertificate> {
    if key == "s1-pi2" {
        return Some(AnyCertificate::Float(s1_pi2_certificate()));
    }
    exact_certificate_library()
        .into_iter()
        .find(|(k, _)| *k == key)
        .map(|(_, c)| AnyCertificate::Exact(c))
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyCertificate {
    Exact(ObstructionCertificate<GaussRat>),
    Float(ObstructionCertificate<CFloat>),
}

/// File format for `obstruct --cert`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub name: String,
    /// Catalog key of the structure, when the file does not sit next to a
    /// structure file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    pub beta: FormJson,
    pub mode: CertificateMode,
    pub p: usize,
    pub decomposition: Vec<DecompositionJson>,
    #[serde(default = "exact")]
    pub backend: Backend,
}

fn exact() -> Backend {
    Backend::Exact
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub coeff: ScalarJson,
    /// Factors `ψ¹..ψ^q`, each a coefficient list in `φ¹..φⁿ`.
    pub factors: Vec<Vec<ScalarJson>>,
}

pub fn certificate_to_json<S: Scalar>(c: &ObstructionCertificate<S>, structure: Option<&str>) -> CertificateJson {
    CertificateJson {
        name: c.name.clone(),
        structure: structure.map(str::to_string),
        beta: form_to_json(&c.beta),
        mode: c.mode,
        p: c.p,
        decomposition: c
            .decomposition
            .iter()
            .map(|(k, s)| DecompositionJson {
                coeff: scalar_to_json(k),
                factors: s.factors.iter().map(|f| f.iter().map(scalar_to_json).collect()).collect(),
            })
            .collect(),
        backend: S::BACKEND,
    }
}

pub fn certificate_from_json<S: Scalar>(j: &CertificateJson) -> Result<ObstructionCertificate<S>> {
    if j.backend != S::BACKEND {
        return Err(Error::Parse(format!("expected a {} certificate, found {}", S::BACKEND, j.backend)));
    }
    let decomposition = j
        .decomposition
        .iter()
        .map(|d| {
            let c: S = scalar_from_json(&d.coeff)?;
            let factors = d
                .factors
                .iter()
                .map(|f| f.iter().map(scalar_from_json).collect::<Result<Vec<S>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok((c, SimpleForm::new(factors)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObstructionCertificate {
        name: j.name.clone(),
        beta: form_from_json(&j.beta)?,
        mode: j.mode,
        p: j.p,
        decomposition,
    })
}

pub fn parse_certificate(text: &str) -> Result<(CertificateJson, AnyCertificate)> {
    let j: CertificateJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let c = match j.backend {
        Backend::Exact => AnyCertificate::Exact(certificate_from_json(&j)?),
        Backend::Float => AnyCertificate::Float(certificate_from_json(&j)?),
    };
    Ok((j, c))
}
