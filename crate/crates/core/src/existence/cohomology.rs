//! Bott–Chern dimensions and the ∂∂̄-lemma on the invariant complex.
//!
//! Everything here is invariant-level: the finite complex of left-invariant
//! forms, not the de Rham complex of a compact quotient.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{InvariantForm, Monomial};
use crate::lie::StructurePresentation;
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;

pub const INVARIANT_LEVEL: &str = "invariant-level";

/// Rank of the span of `forms`, each read as a coordinate vector.
fn forms_rank<S: Scalar>(forms: &[InvariantForm<S>], eps: f64) -> usize {
    let mut cols: BTreeMap<Monomial, usize> = BTreeMap::new();
    for f in forms {
        for (m, _) in f.terms() {
            let k = cols.len();
            cols.entry(*m).or_insert(k);
        }
    }
    if cols.is_empty() {
        return 0;
    }
    let mut mat: Mat<S> = linalg::zeros(forms.len(), cols.len());
    for (r, f) in forms.iter().enumerate() {
        for (m, c) in f.terms() {
            mat[r][cols[m]] = c.clone();
        }
    }
    linalg::rank(&mat, cols.len(), eps)
}

fn basis<S: Scalar>(n: usize, p: usize, q: usize) -> Vec<InvariantForm<S>> {
    Monomial::of_bidegree(n, p, q)
        .into_iter()
        .map(|m| InvariantForm::from_monomial(n, m, S::one()))
        .collect()
}

/// `dim Λ^{p,q} − rank(∂ ⊕ ∂̄) − rank(∂∂̄ on Λ^{p−1,q−1})`.
pub fn bott_chern_dimension<S: Scalar>(pres: &StructurePresentation<S>, p: usize, q: usize, eps: f64) -> Result<usize> {
    let n = pres.n();
    if p > n || q > n {
        return Err(Error::Degree(format!("({p},{q}) exceeds n = {n}")));
    }
    let here = basis::<S>(n, p, q);
    // ∂x and ∂̄x have disjoint bidegrees, so their sum determines both
    let closed_images = here
        .iter()
        .map(|f| {
            let (a, b) = pres.split_d(f, eps)?;
            Ok(a + b)
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = here.len() - forms_rank(&closed_images, eps);
    let exact = if p >= 1 && q >= 1 {
        let below = basis::<S>(n, p - 1, q - 1)
            .iter()
            .map(|f| pres.ddbar(f, eps))
            .collect::<Result<Vec<_>>>()?;
        forms_rank(&below, eps)
    } else {
        0
    };
    Ok(kernel - exact)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BottChernTable {
    pub structure: String,
    pub n: usize,
    /// `dims[p][q]`.
    pub dims: Vec<Vec<usize>>,
    pub level: String,
}

impl fmt::Display for BottChernTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: Bott–Chern dimensions h^{{p,q}} ({})", self.structure, self.level)?;
        write!(f, "  p\\q")?;
        for q in 0..=self.n {
            write!(f, " {q:>4}")?;
        }
        writeln!(f)?;
        for (p, row) in self.dims.iter().enumerate() {
            write!(f, "  {p:>3}")?;
            for d in row {
                write!(f, " {d:>4}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn bott_chern_dimensions<S: Scalar>(pres: &StructurePresentation<S>, eps: f64) -> Result<BottChernTable> {
    let n = pres.n();
    let dims = (0..=n)
        .map(|p| (0..=n).map(|q| bott_chern_dimension(pres, p, q, eps)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(BottChernTable {
        structure: pres.name.clone(),
        n,
        dims,
        level: INVARIANT_LEVEL.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DdbarReport {
    pub structure: String,
    pub p: usize,
    pub q: usize,
    /// `dim(ker∂ ∩ ker∂̄ ∩ im d ∩ Λ^{p,q})`.
    pub exact_dim: usize,
    /// `dim(im ∂∂̄ ∩ Λ^{p,q})`.
    pub ddbar_dim: usize,
    pub holds: bool,
    pub level: String,
}

impl fmt::Display for DdbarReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: ∂∂̄-lemma at ({},{}) ({}): {}",
            self.structure,
            self.p,
            self.q,
            self.level,
            if self.holds { "holds" } else { "fails" }
        )?;
        writeln!(f, "  dim(ker∂ ∩ ker∂̄ ∩ im d) = {}", self.exact_dim)?;
        writeln!(f, "  dim(im ∂∂̄) = {}", self.ddbar_dim)
    }
}

/// A pure `(p,q)` form in `im d` is d-closed, hence in `ker∂ ∩ ker∂̄`, so the
/// left side is `im d ∩ Λ^{p,q}`. With `D` the images of a basis of
/// `Λ^{p+q−1}` and `P` the projection away from `Λ^{p,q}`, its dimension is
/// `rank D − rank PD`.
pub fn invariant_ddbar_lemma_report<S: Scalar>(
    pres: &StructurePresentation<S>,
    p: usize,
    q: usize,
    eps: f64,
) -> Result<DdbarReport> {
    let n = pres.n();
    if p > n || q > n {
        return Err(Error::Degree(format!("({p},{q}) exceeds n = {n}")));
    }
    let exact_dim = if p + q == 0 {
        0
    } else {
        let k = p + q - 1;
        let images: Vec<InvariantForm<S>> = (0..=k.min(n))
            .filter(|a| k - a <= n)
            .flat_map(|a| Monomial::of_bidegree(n, a, k - a))
            .map(|m| pres.d_monomial(m))
            .collect();
        let projected: Vec<InvariantForm<S>> = images
            .iter()
            .map(|f| {
                let mut g = f.clone();
                for (m, c) in f.bidegree_project(p, q).terms() {
                    g.add_term(*m, -c.clone());
                }
                g
            })
            .collect();
        forms_rank(&images, eps) - forms_rank(&projected, eps)
    };
    let ddbar_dim = if p >= 1 && q >= 1 {
        let below = basis::<S>(n, p - 1, q - 1)
            .iter()
            .map(|f| pres.ddbar(f, eps))
            .collect::<Result<Vec<_>>>()?;
        forms_rank(&below, eps)
    } else {
        0
    };
    Ok(DdbarReport {
        structure: pres.name.clone(),
        p,
        q,
        exact_dim,
        ddbar_dim,
        holds: exact_dim == ddbar_dim,
        level: INVARIANT_LEVEL.into(),
    })
}

pub fn invariant_ddbar_lemma_check<S: Scalar>(
    pres: &StructurePresentation<S>,
    p: usize,
    q: usize,
    eps: f64,
) -> Result<bool> {
    Ok(invariant_ddbar_lemma_report(pres, p, q, eps)?.holds)
}
