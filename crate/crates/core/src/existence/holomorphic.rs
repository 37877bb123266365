//! Exact, simple, holomorphic `(q,0)`-forms on complex-parallelizable
//! structures.
//!
//! `V = d(Λ^{q−1,0})` lies in `Λ^{q,0}` because every `dφⁱ` is `(2,0)`. A
//! nonzero simple `ξ ∈ V` pairs with any transverse `(n−q,n−q)`-form in a
//! way incompatible with closedness, so it rules out `(n−q)`-symplectic forms.

use std::fmt;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{subsets_of_size, InvariantForm, Monomial};
use crate::lie::StructurePresentation;
use crate::linalg;
use crate::positivity::{factorize, SimpleForm};
use crate::scalar::{CFloat, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum HolomorphicVerdict<S: Scalar> {
    /// `V = 0`.
    NoObstruction { dim_v: usize },
    /// `V ≠ 0` but contains no nonzero simple form.
    NoSimpleElement { dim_v: usize, reason: String },
    /// A nonzero simple `ξ ∈ V`.
    Obstruction { dim_v: usize, xi: InvariantForm<S>, factors: SimpleForm<S> },
    /// A simple element exists but its coefficients are irrational; the
    /// witness is given in floating point.
    ObstructionFloat { dim_v: usize, xi: InvariantForm<CFloat> },
    /// Not decided here; supply a certificate.
    Undecided { dim_v: usize, reason: String },
}

impl<S: Scalar> HolomorphicVerdict<S> {
    pub fn kind(&self) -> &'static str {
        match self {
            HolomorphicVerdict::NoObstruction { .. } => "no_obstruction",
            HolomorphicVerdict::NoSimpleElement { .. } => "no_simple_element",
            HolomorphicVerdict::Obstruction { .. } | HolomorphicVerdict::ObstructionFloat { .. } => "obstruction",
            HolomorphicVerdict::Undecided { .. } => "undecided",
        }
    }

    pub fn is_obstruction(&self) -> bool {
        self.kind() == "obstruction"
    }

    /// True when `V` has been shown to hold no nonzero simple form.
    pub fn is_clear(&self) -> bool {
        matches!(
            self,
            HolomorphicVerdict::NoObstruction { .. } | HolomorphicVerdict::NoSimpleElement { .. }
        )
    }

    pub fn dim_v(&self) -> usize {
        match self {
            HolomorphicVerdict::NoObstruction { dim_v }
            | HolomorphicVerdict::NoSimpleElement { dim_v, .. }
            | HolomorphicVerdict::Obstruction { dim_v, .. }
            | HolomorphicVerdict::ObstructionFloat { dim_v, .. }
            | HolomorphicVerdict::Undecided { dim_v, .. } => *dim_v,
        }
    }

    pub fn report(&self, structure: &str, q: usize) -> HolomorphicReport {
        let (witness, detail) = match self {
            HolomorphicVerdict::NoObstruction { .. } => (None, "V = 0".to_string()),
            HolomorphicVerdict::NoSimpleElement { reason, .. } | HolomorphicVerdict::Undecided { reason, .. } => {
                (None, reason.clone())
            }
            HolomorphicVerdict::Obstruction { xi, .. } => (Some(xi.to_string()), "exact witness".into()),
            HolomorphicVerdict::ObstructionFloat { xi, .. } => (Some(xi.to_string()), "floating-point witness".into()),
        };
        HolomorphicReport {
            structure: structure.into(),
            q,
            dim_v: self.dim_v(),
            verdict: self.kind().into(),
            witness,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolomorphicReport {
    pub structure: String,
    pub q: usize,
    pub dim_v: usize,
    pub verdict: String,
    pub witness: Option<String>,
    pub detail: String,
}

impl fmt::Display for HolomorphicReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: exact simple holomorphic {}-forms", self.structure, self.q)?;
        writeln!(f, "  dim V = {}", self.dim_v)?;
        writeln!(f, "  verdict: {} ({})", self.verdict, self.detail)?;
        if let Some(w) = &self.witness {
            writeln!(f, "  ξ = {w}")?;
        }
        Ok(())
    }
}

fn holo_form<S: Scalar>(n: usize, q: usize, v: &[S]) -> InvariantForm<S> {
    let mut f = InvariantForm::zero(n);
    for (h, c) in subsets_of_size(n, q).into_iter().zip(v) {
        f.add_term(Monomial { holo: h, anti: 0 }, c.clone());
    }
    f
}

/// A basis of `V = d(Λ^{q−1,0})` as coefficient vectors over the `q`-subsets.
pub fn exact_holomorphic_space<S: Scalar>(pres: &StructurePresentation<S>, q: usize, eps: f64) -> Result<Vec<Vec<S>>> {
    let n = pres.n();
    if q == 0 || q > n {
        return Err(Error::Degree(format!("q = {q} must lie in 1..={n}")));
    }
    if !pres.is_complex_parallelizable(eps) {
        return Err(Error::NotParallelizable(pres.name.clone()));
    }
    let targets = subsets_of_size(n, q);
    let images: Vec<Vec<S>> = subsets_of_size(n, q - 1)
        .into_iter()
        .map(|h| {
            let d = pres.d_monomial(Monomial { holo: h, anti: 0 });
            targets.iter().map(|&t| d.coeff(Monomial { holo: t, anti: 0 })).collect()
        })
        .collect();
    Ok(linalg::span_basis(&images, targets.len(), eps))
}

/// Decides whether `V` holds a nonzero simple `(q,0)`-form.
///
/// Exact for `q ∈ {1, n−1, n}` (every form is simple) and for `q = 2` with
/// `dim V ≤ 2`. For `q = 2` with larger `V` a seeded numeric search runs;
/// other degrees are left undecided.
pub fn exact_simple_holomorphic_search<S: Scalar>(
    pres: &StructurePresentation<S>,
    q: usize,
    eps: f64,
) -> Result<HolomorphicVerdict<S>> {
    let n = pres.n();
    let basis = exact_holomorphic_space(pres, q, eps)?;
    let dim_v = basis.len();
    if dim_v == 0 {
        return Ok(HolomorphicVerdict::NoObstruction { dim_v });
    }
    if q == 1 || q + 1 >= n {
        return exact_witness(n, q, &basis[0], dim_v, eps);
    }
    if q != 2 {
        return Ok(HolomorphicVerdict::Undecided {
            dim_v,
            reason: format!("degree {q} needs a certificate"),
        });
    }
    let xs: Vec<InvariantForm<S>> = basis.iter().map(|v| holo_form(n, 2, v)).collect();
    match dim_v {
        1 => {
            let sq = xs[0].wedge(&xs[0])?;
            if sq.is_negligible(eps) {
                exact_witness(n, q, &basis[0], dim_v, eps)
            } else {
                Ok(HolomorphicVerdict::NoSimpleElement {
                    dim_v,
                    reason: format!("ξ∧ξ = {sq} ≠ 0"),
                })
            }
        }
        2 => two_dimensional(n, &xs, &basis, eps),
        _ => Ok(numeric_search(n, &xs, dim_v, 0x5eed, 64)),
    }
}

fn exact_witness<S: Scalar>(n: usize, q: usize, v: &[S], dim_v: usize, eps: f64) -> Result<HolomorphicVerdict<S>> {
    let xi = holo_form(n, q, v);
    let factors = factorize(&xi, q, eps)?.ok_or_else(|| Error::Invalid("witness did not factor".into()))?;
    Ok(HolomorphicVerdict::Obstruction { dim_v, xi, factors })
}

/// `ξ = xξ₁ + yξ₂` is simple iff `x²ξ₁² + 2xy ξ₁ξ₂ + y²ξ₂² = 0`: a common
/// projective root of binary quadratics, found through their gcd in `t = x/y`.
fn two_dimensional<S: Scalar>(
    n: usize,
    xs: &[InvariantForm<S>],
    basis: &[Vec<S>],
    eps: f64,
) -> Result<HolomorphicVerdict<S>> {
    let dim_v = 2;
    let a = xs[0].wedge(&xs[0])?;
    let b = xs[0].wedge(&xs[1])?;
    let c = xs[1].wedge(&xs[1])?;
    let mut keys: Vec<Monomial> = a.terms().chain(b.terms()).chain(c.terms()).map(|(m, _)| *m).collect();
    keys.sort();
    keys.dedup();
    // y = 0 is a root iff ξ₁ itself is simple
    if a.is_negligible(eps) {
        return exact_witness(n, 2, &basis[0], dim_v, eps);
    }
    // each key gives a(k) t² + 2b(k) t + c(k), coefficients low to high
    let mut g: Vec<S> = vec![];
    for k in &keys {
        let poly = trim(vec![c.coeff(*k), S::from_int(2) * b.coeff(*k), a.coeff(*k)], eps);
        g = poly_gcd(g, poly, eps);
    }
    match g.len() {
        0 | 1 => Ok(HolomorphicVerdict::NoSimpleElement {
            dim_v,
            reason: "the quadratics ξ∧ξ have no common root".into(),
        }),
        2 => {
            // g = g0 + g1 t
            let t = -(g[0].clone() * g[1].inv().expect("leading"));
            let v: Vec<S> = basis[0]
                .iter()
                .zip(&basis[1])
                .map(|(u, w)| t.clone() * u.clone() + w.clone())
                .collect();
            exact_witness(n, 2, &v, dim_v, eps)
        }
        _ => {
            let (g0, g1, g2) = (g[0].to_c64(), g[1].to_c64(), g[2].to_c64());
            let t = (-g1 + (g1 * g1 - 4.0 * g0 * g2).sqrt()) / (2.0 * g2);
            let v: Vec<CFloat> = basis[0]
                .iter()
                .zip(&basis[1])
                .map(|(u, w)| CFloat::from_c64(t * u.to_c64() + w.to_c64()))
                .collect();
            Ok(HolomorphicVerdict::ObstructionFloat {
                dim_v,
                xi: holo_form(n, 2, &v),
            })
        }
    }
}

fn trim<S: Scalar>(mut p: Vec<S>, eps: f64) -> Vec<S> {
    while p.last().is_some_and(|c| c.is_negligible(eps)) {
        p.pop();
    }
    p
}

/// Remainder of `a` by `b` (both trimmed, `b` nonempty).
fn poly_rem<S: Scalar>(mut a: Vec<S>, b: &[S], eps: f64) -> Vec<S> {
    let lead = b.last().expect("nonzero").inv().expect("trimmed");
    while a.len() >= b.len() {
        let f = a.last().expect("nonempty").clone() * lead.clone();
        let shift = a.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            a[shift + i] = a[shift + i].clone() - f.clone() * c.clone();
        }
        a.pop();
        a = trim(a, eps);
    }
    a
}

/// Gcd with the convention gcd(0, p) = p; the empty vector is zero.
fn poly_gcd<S: Scalar>(a: Vec<S>, b: Vec<S>, eps: f64) -> Vec<S> {
    let (mut a, mut b) = (trim(a, eps), trim(b, eps));
    while !b.is_empty() {
        let r = poly_rem(a, &b, eps);
        a = b;
        b = r;
    }
    a
}

/// Minimizes `|ξ(x)∧ξ(x)|² / |x|⁴` over `V` from random starts.
fn numeric_search<S: Scalar>(
    n: usize,
    xs: &[InvariantForm<S>],
    dim_v: usize,
    seed: u64,
    starts: usize,
) -> HolomorphicVerdict<S> {
    let xf: Vec<InvariantForm<CFloat>> = xs.iter().map(|x| x.convert()).collect();
    let k = xf.len();
    // ξ_i∧ξ_j as dense maps
    let mut pairs: Vec<Vec<InvariantForm<CFloat>>> = vec![vec![InvariantForm::zero(n); k]; k];
    for i in 0..k {
        for j in 0..k {
            pairs[i][j] = xf[i].wedge(&xf[j]).expect("same rank");
        }
    }
    let quartic = |x: &[Complex64]| -> (f64, InvariantForm<CFloat>) {
        let mut acc = InvariantForm::zero(n);
        for i in 0..k {
            for j in 0..k {
                acc = acc + pairs[i][j].scale(&CFloat::from_c64(x[i] * x[j]));
            }
        }
        let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let val: f64 = acc.terms().map(|(_, c)| c.to_c64().norm_sqr()).sum();
        (val / (norm * norm), acc)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut best_x = vec![];
    for _ in 0..starts {
        let mut x: Vec<Complex64> = (0..k)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut step = 0.1;
        let (mut f, _) = quartic(&x);
        for _ in 0..400 {
            // finite-difference gradient in the real coordinates
            let h = 1e-7;
            let mut grad = vec![Complex64::new(0.0, 0.0); k];
            for i in 0..k {
                let mut y = x.clone();
                y[i] += h;
                let re = (quartic(&y).0 - f) / h;
                let mut y = x.clone();
                y[i] += Complex64::new(0.0, h);
                let im = (quartic(&y).0 - f) / h;
                grad[i] = Complex64::new(re, im);
            }
            let trial: Vec<Complex64> = x.iter().zip(&grad).map(|(a, g)| a - g * step).collect();
            let (ft, _) = quartic(&trial);
            if ft < f {
                x = trial;
                f = ft;
                step *= 1.5;
            } else {
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
        }
        if f < best {
            best = f;
            best_x = x;
        }
    }
    if best < 1e-20 {
        let xi = xf
            .iter()
            .zip(&best_x)
            .fold(InvariantForm::zero(n), |acc, (f, c)| acc + f.scale(&CFloat::from_c64(*c)));
        return HolomorphicVerdict::ObstructionFloat { dim_v, xi };
    }
    HolomorphicVerdict::Undecided {
        dim_v,
        reason: format!("numeric search over {starts} starts (seed {seed}) reached min |ξ∧ξ|² = {best:e}"),
    }
}

/// Checks a supplied `ξ`: nonzero, simple, and in `V`.
pub fn verify_simple_holomorphic_certificate<S: Scalar>(
    pres: &StructurePresentation<S>,
    xi: &InvariantForm<S>,
    q: usize,
    eps: f64,
) -> Result<bool> {
    let n = pres.n();
    let basis = exact_holomorphic_space(pres, q, eps)?;
    let Some(_) = factorize(xi, q, eps)? else {
        return Ok(false);
    };
    let v: Vec<S> = subsets_of_size(n, q)
        .into_iter()
        .map(|h| xi.coeff(Monomial { holo: h, anti: 0 }))
        .collect();
    let dim = v.len();
    let mut with = basis.clone();
    with.push(v);
    Ok(linalg::span_dim(&with, dim, eps) == basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, eta_beta5, Built};
    use crate::scalar::{q, GaussRat};

    fn exact(key: &str) -> StructurePresentation<GaussRat> {
        match catalog::entry(key).unwrap().build_default().unwrap() {
            Built::Exact(p) => p,
            Built::Float(_) => unreachable!(),
        }
    }

    #[test]
    fn torus_has_no_obstruction() {
        let t = StructurePresentation::<GaussRat>::torus(4);
        for q in 1..=4 {
            assert!(matches!(
                exact_simple_holomorphic_search(&t, q, 0.0).unwrap(),
                HolomorphicVerdict::NoObstruction { dim_v: 0 }
            ));
        }
    }

    #[test]
    fn eta_beta5_has_no_simple_exact_two_form() {
        let v = exact_simple_holomorphic_search(&eta_beta5::<GaussRat>(), 2, 0.0).unwrap();
        assert_eq!(v.dim_v(), 1);
        assert!(matches!(v, HolomorphicVerdict::NoSimpleElement { .. }), "{v:?}");
    }

    #[test]
    fn nakamura_v5_has_one() {
        let pres = exact("nakamura-v-5");
        let v = exact_simple_holomorphic_search(&pres, 2, 0.0).unwrap();
        assert!(v.is_obstruction(), "{v:?}");
        let phi23 = InvariantForm::word(5, "23", q(1, 1)).unwrap();
        assert!(verify_simple_holomorphic_certificate(&pres, &phi23, 2, 0.0).unwrap());
        let not_exact = InvariantForm::word(5, "45", q(1, 1)).unwrap();
        assert!(!verify_simple_holomorphic_certificate(&pres, &not_exact, 2, 0.0).unwrap());
    }

    #[test]
    fn non_parallelizable_is_an_error() {
        let p = catalog::fps6(q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1));
        assert!(exact_simple_holomorphic_search(&p, 2, 0.0).is_err());
    }

    #[test]
    fn gcd_of_binary_quadratics() {
        // (t−1)(t−2) and (t−1)(t+3)
        let a = vec![q(2, 1), q(-3, 1), q(1, 1)];
        let b = vec![q(-3, 1), q(2, 1), q(1, 1)];
        let g = poly_gcd(a, b, 0.0);
        assert_eq!(g.len(), 2);
        assert_eq!(-(g[0].clone() * g[1].inv().unwrap()), q(1, 1));
    }
}
