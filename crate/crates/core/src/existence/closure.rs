//! Closedness of `Ψ = λ + fixed + λ̄` with `λ` ranging over an ansatz.
//!
//! `dΨ = 0` is only real-linear in the coefficients of `λ`, so each complex
//! unknown `λ_k = s_k + i t_k` contributes two real unknowns and each complex
//! equation two real ones.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{InvariantForm, Monomial};
use crate::lie::StructurePresentation;
use crate::linalg::{self, Affine, Mat};
use crate::scalar::Scalar;

pub const STANDARD_SCOPE: &str = "standard ansatz: all of Λ^{p+1,p−1}";
pub const EXTENDED_SCOPE: &str = "extended ansatz: not the full Λ^{p+1,p−1} basis";

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSolution<S: Scalar> {
    pub p: usize,
    pub fixed: InvariantForm<S>,
    pub basis: Vec<Monomial>,
    /// Real solution set in `(s₁, t₁, s₂, t₂, …)`; `None` when inconsistent.
    pub solution: Option<Affine<S>>,
    pub scope: &'static str,
}

impl<S: Scalar> AnsatzSolution<S> {
    pub fn is_consistent(&self) -> bool {
        self.solution.is_some()
    }

    fn to_complex(v: &[S]) -> Vec<S> {
        v.chunks(2)
            .map(|st| st[0].clone() + S::i() * st[1].clone())
            .collect()
    }

    /// One member of the solution set, as complex coefficients.
    pub fn particular(&self) -> Option<Vec<S>> {
        self.solution.as_ref().map(|a| Self::to_complex(&a.particular))
    }

    /// Real directions spanning the solution set, as complex coefficient vectors.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        self.solution
            .as_ref()
            .map(|a| a.kernel.iter().map(|k| Self::to_complex(k)).collect())
            .unwrap_or_default()
    }

    /// Real dimension of the solution set (`None` when empty).
    pub fn real_dimension(&self) -> Option<usize> {
        self.solution.as_ref().map(|a| a.kernel.len())
    }

    pub fn lambda(&self, coeffs: &[S]) -> InvariantForm<S> {
        let mut out = InvariantForm::zero(self.fixed.rank());
        for (m, c) in self.basis.iter().zip(coeffs) {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn psi(&self, coeffs: &[S]) -> InvariantForm<S> {
        let l = self.lambda(coeffs);
        l.clone() + self.fixed.clone() + l.conjugate()
    }

    /// `dΨ` for the given coefficients; the direct oracle for membership.
    pub fn residual(&self, pres: &StructurePresentation<S>, coeffs: &[S]) -> Result<InvariantForm<S>> {
        pres.differential(&self.psi(coeffs))
    }

    pub fn contains(&self, pres: &StructurePresentation<S>, coeffs: &[S], eps: f64) -> Result<bool> {
        Ok(self.residual(pres, coeffs)?.is_negligible(eps))
    }
}

/// Solves `d(λ + fixed + λ̄) = 0` for `λ = Σ λ_k basis_k`.
///
/// `fixed` must be real of bidegree `(p,p)`. Basis monomials must have
/// bidegree `(a,b)` with `a + b = 2p` and `a ≥ b`.
pub fn closure_system<S: Scalar>(
    pres: &StructurePresentation<S>,
    p: usize,
    fixed: &InvariantForm<S>,
    basis: &[Monomial],
    eps: f64,
) -> Result<AnsatzSolution<S>> {
    let n = pres.n();
    if fixed.rank() != n {
        return Err(Error::RankMismatch(n, fixed.rank()));
    }
    if let Some((m, _)) = fixed.terms().find(|(m, _)| m.bidegree() != (p, p)) {
        return Err(Error::Degree(format!("fixed term {m} is not of bidegree ({p},{p})")));
    }
    if !fixed.is_real(eps) {
        return Err(Error::NotReal);
    }
    for m in basis {
        let (a, b) = m.bidegree();
        if a + b != 2 * p || a < b || m.max_index() > n {
            return Err(Error::Degree(format!("ansatz monomial {m} has bidegree ({a},{b})")));
        }
    }

    // columns: d(m) + conj(d m) for s_k, i(d m − conj(d m)) for t_k
    let mut columns: Vec<InvariantForm<S>> = Vec::with_capacity(2 * basis.len());
    for m in basis {
        let dm = pres.d_monomial(*m);
        let dmc = dm.conjugate();
        columns.push(dm.clone() + dmc.clone());
        columns.push((dm - dmc).scale(&S::i()));
    }
    let rhs = -pres.differential(fixed)?;

    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for f in columns.iter().chain(std::iter::once(&rhs)) {
        for (m, _) in f.terms() {
            let k = rows.len();
            rows.entry(*m).or_insert(k);
        }
    }
    let cols = columns.len();
    let mut a: Mat<S> = linalg::zeros(2 * rows.len(), cols);
    let mut b = vec![S::zero(); 2 * rows.len()];
    for (j, f) in columns.iter().enumerate() {
        for (m, c) in f.terms() {
            let r = rows[m];
            a[2 * r][j] = c.re();
            a[2 * r + 1][j] = c.im();
        }
    }
    for (m, c) in rhs.terms() {
        let r = rows[m];
        b[2 * r] = c.re();
        b[2 * r + 1] = c.im();
    }
    let solution = if cols == 0 {
        rhs.is_negligible(eps).then(|| Affine {
            particular: vec![],
            kernel: vec![],
        })
    } else {
        linalg::solve(&a, &b, cols, eps)
    };

    let mut standard = if p >= 1 { Monomial::of_bidegree(n, p + 1, p - 1) } else { vec![] };
    standard.sort();
    let mut given = basis.to_vec();
    given.sort();
    let scope = if !standard.is_empty() && given == standard {
        STANDARD_SCOPE
    } else {
        EXTENDED_SCOPE
    };

    Ok(AnsatzSolution {
        p,
        fixed: fixed.clone(),
        basis: basis.to_vec(),
        solution,
        scope,
    })
}
