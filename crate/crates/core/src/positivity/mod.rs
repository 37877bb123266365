//! Transversality of real `(p,p)`-forms.
//!
//! A real `(p,p)`-form `ψ` is transverse when `σ_q ψ∧β∧β̄` is a positive
//! multiple of the volume form for every nonzero simple `(q,0)`-form `β`,
//! `q = n − p`. Writing `β = Σ_J b_J φ^J` in Plücker coordinates, the pairing
//! is the Hermitian form `Σ_{J,K} b_J conj(b_K) Q_{JK}` with
//! `Q_{JK} = volume_ratio(σ_q ψ∧φ^J∧φ̄^K)` (see [`pairing_matrix`]).
//!
//! Certification is analytic only: a positive definite `Q`, or the `Ω_a`
//! family for `n = 4`. Sampling can falsify but never certifies.

pub mod quadric;
pub mod sampling;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{sigma, subsets_of_size, InvariantForm, Monomial};
use crate::linalg::{self, Ldl, Mat};
use crate::scalar::Scalar;

pub use quadric::{omega_a_verdict, quadric_matrix, quadric_transversality, QuadricMatrix};
pub use sampling::transversality_sample;

/// `β¹∧…∧β^q` with each factor a coefficient vector in `φ¹..φⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleForm<S: Scalar> {
    pub factors: Vec<Vec<S>>,
}

impl<S: Scalar> SimpleForm<S> {
    pub fn new(factors: Vec<Vec<S>>) -> Self {
        SimpleForm { factors }
    }

    /// `φ^{i₁}∧…∧φ^{i_q}`.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let factors = indices
            .iter()
            .map(|&i| (1..=n).map(|j| if j == i { S::one() } else { S::zero() }).collect())
            .collect();
        SimpleForm { factors }
    }

    pub fn q(&self) -> usize {
        self.factors.len()
    }

    pub fn to_form(&self, n: usize) -> Result<InvariantForm<S>> {
        let mut acc = InvariantForm::constant(n, S::one());
        for f in &self.factors {
            if f.len() != n {
                return Err(Error::Degree(format!("factor of length {} in rank {n}", f.len())));
            }
            let mut v = InvariantForm::zero(n);
            for (j, c) in f.iter().enumerate() {
                v.add_term(Monomial { holo: 1 << j, anti: 0 }, c.clone());
            }
            acc = acc.wedge(&v)?;
        }
        Ok(acc)
    }

    /// Plücker coordinates in the order of [`subsets_of_size`].
    pub fn plucker(&self, n: usize) -> Result<Vec<S>> {
        let form = self.to_form(n)?;
        Ok(subsets_of_size(n, self.q())
            .into_iter()
            .map(|h| form.coeff(Monomial { holo: h, anti: 0 }))
            .collect())
    }
}

/// Pure `(q,0)`-forms as vectors over the `q`-subsets.
fn holo_vector<S: Scalar>(xi: &InvariantForm<S>, q: usize) -> Result<Vec<S>> {
    if xi.terms().any(|(m, _)| m.bidegree() != (q, 0)) {
        return Err(Error::Degree(format!("expected a ({q},0)-form")));
    }
    Ok(subsets_of_size(xi.rank(), q)
        .into_iter()
        .map(|h| xi.coeff(Monomial { holo: h, anti: 0 }))
        .collect())
}

/// Factors a `(q,0)`-form as a wedge of `(1,0)`-forms when it is simple.
///
/// The annihilator `{v : v∧ξ = 0}` has dimension `q` exactly when `ξ ≠ 0` is
/// simple, and then any basis of it wedges to a multiple of `ξ`.
pub fn factorize<S: Scalar>(xi: &InvariantForm<S>, q: usize, eps: f64) -> Result<Option<SimpleForm<S>>> {
    let n = xi.rank();
    holo_vector(xi, q)?;
    if xi.is_negligible(eps) {
        return Ok(None);
    }
    if q == 0 {
        // the unit is the empty wedge; the constant itself is not recorded
        return Ok(Some(SimpleForm::new(vec![])));
    }
    let rows = subsets_of_size(n, q + 1);
    let mut mat: Mat<S> = linalg::zeros(rows.len(), n);
    for j in 0..n {
        let v = InvariantForm::from_monomial(n, Monomial { holo: 1 << j, anti: 0 }, S::one());
        let w = v.wedge(xi)?;
        for (r, &h) in rows.iter().enumerate() {
            mat[r][j] = w.coeff(Monomial { holo: h, anti: 0 });
        }
    }
    let ker = linalg::nullspace(&mat, n, eps);
    if ker.len() != q {
        return Ok(None);
    }
    let candidate = SimpleForm::new(ker);
    let form = candidate.to_form(n)?;
    // ξ = c · candidate; read c off the largest coordinate of ξ
    let (m, x) = xi
        .terms()
        .max_by(|a, b| a.1.magnitude().partial_cmp(&b.1.magnitude()).expect("finite"))
        .expect("nonzero");
    let y = form.coeff(*m);
    let Some(yinv) = y.inv() else {
        return Ok(None);
    };
    Ok(Some(scale_first(candidate, x.clone() * yinv)))
}

fn scale_first<S: Scalar>(mut s: SimpleForm<S>, c: S) -> SimpleForm<S> {
    if let Some(f) = s.factors.first_mut() {
        for x in f.iter_mut() {
            *x = x.clone() * c.clone();
        }
    }
    s
}

/// Whether a `(q,0)`-form is simple (nonzero and decomposable).
pub fn is_simple<S: Scalar>(xi: &InvariantForm<S>, q: usize, eps: f64) -> Result<bool> {
    Ok(factorize(xi, q, eps)?.is_some())
}

fn check_psi<S: Scalar>(psi: &InvariantForm<S>, p: usize, eps: f64) -> Result<()> {
    if p > psi.rank() {
        return Err(Error::Degree(format!("p = {p} exceeds n = {}", psi.rank())));
    }
    if let Some((m, _)) = psi.terms().find(|(m, _)| m.bidegree() != (p, p)) {
        return Err(Error::Degree(format!("term {m} is not of bidegree ({p},{p})")));
    }
    if !psi.is_real(eps) {
        return Err(Error::NotReal);
    }
    Ok(())
}

/// `volume_ratio(σ_{n−p} ψ∧β∧β̄)`.
pub fn pairing<S: Scalar>(psi: &InvariantForm<S>, p: usize, beta: &SimpleForm<S>, eps: f64) -> Result<S> {
    check_psi(psi, p, eps)?;
    let n = psi.rank();
    let q = n - p;
    if beta.q() != q {
        return Err(Error::Degree(format!("β has degree {}, expected {q}", beta.q())));
    }
    let b = beta.to_form(n)?;
    let prod = psi.wedge(&b)?.wedge(&b.conjugate())?.scale(&sigma(q));
    prod.volume_ratio()
}

/// `Q_{JK} = volume_ratio(σ_q ψ∧φ^J∧φ̄^K)` over the `q`-subsets `J, K`.
/// Hermitian when `ψ` is real.
pub fn pairing_matrix<S: Scalar>(psi: &InvariantForm<S>, p: usize, eps: f64) -> Result<Mat<S>> {
    check_psi(psi, p, eps)?;
    let n = psi.rank();
    let q = n - p;
    let subsets = subsets_of_size(n, q);
    let full: u16 = ((1u32 << n) - 1) as u16;
    let scale = sigma::<S>(q) * sigma::<S>(n).inv().expect("nonzero");
    let mut out = linalg::zeros(subsets.len(), subsets.len());
    for (j, &hj) in subsets.iter().enumerate() {
        for (k, &hk) in subsets.iter().enumerate() {
            let comp = Monomial {
                holo: full & !hj,
                anti: full & !hk,
            };
            let c = psi.coeff(comp);
            if c.is_zero() {
                continue;
            }
            let (_, s) = comp
                .wedge(Monomial { holo: hj, anti: hk })
                .expect("complementary");
            let v = c * scale.clone();
            out[j][k] = if s > 0 { v } else { -v };
        }
    }
    Ok(out)
}

/// Pairing from Plücker coordinates: `Σ b_J conj(b_K) Q_{JK}`.
pub fn pairing_from_plucker<S: Scalar>(q_mat: &Mat<S>, b: &[S]) -> S {
    let c: Vec<S> = b.iter().map(Scalar::conj).collect();
    linalg::hermitian_form(q_mat, &c)
}

/// A simple form or quadric point that exhibits a non-positive pairing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Factors `β¹..β^q`, each a list of `[re, im]` coefficients.
    SimpleForm { factors: Vec<Vec<[f64; 2]>> },
    /// A point of the quadric `z₁z₆ + z₂z₅ + z₃z₄ = 0`.
    Quadric { z: Vec<[f64; 2]> },
}

impl Witness {
    pub fn from_simple<S: Scalar>(s: &SimpleForm<S>) -> Self {
        Witness::SimpleForm {
            factors: s
                .factors
                .iter()
                .map(|f| f.iter().map(|c| c64_pair(c.to_c64())).collect())
                .collect(),
        }
    }

    pub fn from_c64_factors(f: &[Vec<Complex64>]) -> Self {
        Witness::SimpleForm {
            factors: f.iter().map(|r| r.iter().map(|&c| c64_pair(c)).collect()).collect(),
        }
    }

    pub fn simple_form(&self) -> Option<SimpleForm<crate::scalar::CFloat>> {
        match self {
            Witness::SimpleForm { factors } => Some(SimpleForm::new(
                factors
                    .iter()
                    .map(|f| f.iter().map(|c| crate::scalar::CFloat::new(c[0], c[1])).collect())
                    .collect(),
            )),
            Witness::Quadric { .. } => None,
        }
    }
}

pub(crate) fn c64_pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransversalityVerdict {
    CertifiedPositive {
        certificate: String,
        detail: String,
    },
    Falsified {
        /// Pairing of the witness, normalized by its Gram determinant.
        value: f64,
        /// The unnormalized value as an exact string, when exact.
        exact_value: Option<String>,
        witness: Witness,
        samples: Option<usize>,
        seed: Option<u64>,
    },
    NotFalsified {
        samples: usize,
        min_value: f64,
        seed: u64,
    },
}

impl TransversalityVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, TransversalityVerdict::CertifiedPositive { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, TransversalityVerdict::Falsified { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TransversalityVerdict::CertifiedPositive { .. } => "certified_positive",
            TransversalityVerdict::Falsified { .. } => "falsified",
            TransversalityVerdict::NotFalsified { .. } => "not_falsified",
        }
    }
}

impl std::fmt::Display for TransversalityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransversalityVerdict::CertifiedPositive { certificate, detail } => {
                write!(f, "transverse (certificate: {certificate}; {detail})")
            }
            TransversalityVerdict::Falsified {
                value,
                exact_value,
                samples,
                seed,
                ..
            } => {
                write!(f, "not transverse: witness pairing {value:e}")?;
                if let Some(e) = exact_value {
                    write!(f, " (exact {e})")?;
                }
                if let (Some(n), Some(s)) = (samples, seed) {
                    write!(f, " [samples {n}, seed {s}]")?;
                }
                Ok(())
            }
            TransversalityVerdict::NotFalsified {
                samples,
                min_value,
                seed,
            } => write!(
                f,
                "not falsified after {samples} samples (min normalized pairing {min_value:e}, seed {seed})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    /// Pairings at or below this value falsify.
    pub tol: f64,
    /// Scalar tolerance for float-backend comparisons.
    pub eps: f64,
    /// Local refinement pass over each factor.
    pub refine: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            samples: 10_000,
            seed: 0,
            tol: 1e-9,
            eps: 1e-12,
            refine: true,
        }
    }
}

pub const CERT_PAIRING_PD: &str = "pairing-matrix-positive-definite";
pub const CERT_OMEGA_A: &str = "omega-a-family";
pub const CERT_METRIC_POWER: &str = "metric-power";

/// Full decision procedure: analytic certificates first, exact falsification
/// where every `(q,0)`-form is simple, then sampling.
pub fn transversality<S: Scalar>(
    psi: &InvariantForm<S>,
    p: usize,
    cfg: &SamplingConfig,
) -> Result<TransversalityVerdict> {
    let n = psi.rank();
    let q_mat = pairing_matrix(psi, p, cfg.eps)?;
    let q = n - p;
    let ldl = linalg::ldl(&q_mat, cfg.eps);
    if let Ldl::PositiveDefinite { .. } = &ldl {
        return Ok(TransversalityVerdict::CertifiedPositive {
            certificate: CERT_PAIRING_PD.into(),
            detail: format!("σ_{q} ψ∧β∧β̄ is positive on every nonzero ({q},0)-form"),
        });
    }
    if n == 4 && p == 2 {
        let a = quadric_matrix(psi, cfg.eps)?;
        if let Some(v) = quadric::omega_a_recognized(&a) {
            return Ok(v);
        }
    }
    if q <= 1 || q + 1 >= n {
        if let Ldl::NotPositive { witness, .. } = ldl {
            return exact_falsification(psi, p, &witness, cfg.eps);
        }
    }
    transversality_sample(psi, p, cfg)
}

/// Every `(q,0)`-form is simple here, so the LDL witness is a simple form.
fn exact_falsification<S: Scalar>(
    psi: &InvariantForm<S>,
    p: usize,
    witness: &[S],
    eps: f64,
) -> Result<TransversalityVerdict> {
    let n = psi.rank();
    let q = n - p;
    let b: Vec<S> = witness.iter().map(Scalar::conj).collect();
    let mut xi = InvariantForm::zero(n);
    for (h, c) in subsets_of_size(n, q).into_iter().zip(&b) {
        xi.add_term(Monomial { holo: h, anti: 0 }, c.clone());
    }
    let simple = factorize(&xi, q, eps)?
        .ok_or_else(|| Error::Invalid("witness failed to factor".into()))?;
    let value = pairing(psi, p, &simple, eps)?;
    let gram: f64 = b.iter().map(|c| c.to_c64().norm_sqr()).sum();
    Ok(TransversalityVerdict::Falsified {
        value: value.to_c64().re / gram,
        exact_value: Some(value.to_string()),
        witness: Witness::from_simple(&simple),
        samples: None,
        seed: None,
    })
}
