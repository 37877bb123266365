//! Dense linear algebra over a [`Scalar`] field: row reduction, kernels,
//! affine solution sets and LDL* factorization of Hermitian matrices.
//!
//! On the exact backend every decision is exact; on the float backend a pivot
//! counts as zero when its modulus is at most `eps`.

use std::cmp::Ordering;

use crate::scalar::Scalar;

pub type Mat<S> = Vec<Vec<S>>;

pub fn zeros<S: Scalar>(rows: usize, cols: usize) -> Mat<S> {
    vec![vec![S::zero(); cols]; rows]
}

pub fn identity<S: Scalar>(n: usize) -> Mat<S> {
    let mut m = zeros(n, n);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = S::one();
    }
    m
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<S: Scalar> {
    pub rows: Mat<S>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<S: Scalar> Rref<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref<S: Scalar>(mut m: Mat<S>, cols: usize, eps: f64) -> Rref<S> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let mut best = r;
        let mut best_mag = m[r][c].magnitude();
        for (k, row) in m.iter().enumerate().skip(r + 1) {
            let mag = row[c].magnitude();
            if mag > best_mag {
                best = k;
                best_mag = mag;
            }
        }
        if m[best][c].is_zero() || m[best][c].is_negligible(eps) {
            continue;
        }
        m.swap(r, best);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
            row[c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    Rref { rows: m, pivots, cols }
}

pub fn rank<S: Scalar>(m: &Mat<S>, cols: usize, eps: f64) -> usize {
    rref(m.clone(), cols, eps).rank()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<S: Scalar>(m: &Mat<S>, cols: usize, eps: f64) -> Vec<Vec<S>> {
    let red = rref(m.clone(), cols, eps);
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (i, &p) in red.pivots.iter().enumerate() {
            v[p] = -red.rows[i][free].clone();
        }
        out.push(v);
    }
    out
}

/// Solution set `particular + span(kernel)` of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<S: Scalar> {
    pub particular: Vec<S>,
    pub kernel: Vec<Vec<S>>,
}

/// Solves `a x = b`; `None` when inconsistent.
pub fn solve<S: Scalar>(a: &Mat<S>, b: &[S], cols: usize, eps: f64) -> Option<Affine<S>> {
    let aug: Mat<S> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let red = rref(aug, cols + 1, eps);
    if red.pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![S::zero(); cols];
    for (i, &p) in red.pivots.iter().enumerate() {
        particular[p] = red.rows[i][cols].clone();
    }
    Some(Affine {
        particular,
        kernel: nullspace(a, cols, eps),
    })
}

/// Dimension of the span of `vectors`, each of length `dim`.
pub fn span_dim<S: Scalar>(vectors: &[Vec<S>], dim: usize, eps: f64) -> usize {
    rank(&vectors.to_vec(), dim, eps)
}

/// `dim(U ∩ W)` for spans `U`, `W` inside a space of dimension `dim`.
pub fn intersection_dim<S: Scalar>(u: &[Vec<S>], w: &[Vec<S>], dim: usize, eps: f64) -> usize {
    let du = span_dim(u, dim, eps);
    let dw = span_dim(w, dim, eps);
    let mut both = u.to_vec();
    both.extend_from_slice(w);
    du + dw - span_dim(&both, dim, eps)
}

/// Row-independent basis of the span.
pub fn span_basis<S: Scalar>(vectors: &[Vec<S>], dim: usize, eps: f64) -> Vec<Vec<S>> {
    let red = rref(vectors.to_vec(), dim, eps);
    red.rows.into_iter().take(red.pivots.len()).collect()
}

pub fn mat_vec<S: Scalar>(m: &Mat<S>, v: &[S]) -> Vec<S> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

pub fn conj_transpose<S: Scalar>(m: &Mat<S>) -> Mat<S> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].conj()).collect())
        .collect()
}

pub fn is_hermitian<S: Scalar>(m: &Mat<S>, eps: f64) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| (i..n).all(|j| (m[i][j].clone() - m[j][i].conj()).is_negligible(eps)))
}

/// `v* m v`.
pub fn hermitian_form<S: Scalar>(m: &Mat<S>, v: &[S]) -> S {
    let mv = mat_vec(m, v);
    v.iter()
        .zip(mv)
        .fold(S::zero(), |acc, (a, b)| acc + a.conj() * b)
}

/// Outcome of an LDL* factorization attempt on a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum Ldl<S: Scalar> {
    /// All pivots real and positive. Leading principal minors are the
    /// running products of the pivots.
    PositiveDefinite { pivots: Vec<S> },
    /// Pivot `index` (0-based) is not positive; `witness` satisfies
    /// `witness* m witness = pivot`.
    NotPositive {
        index: usize,
        pivot: S,
        witness: Vec<S>,
    },
}

impl<S: Scalar> Ldl<S> {
    pub fn is_positive_definite(&self) -> bool {
        matches!(self, Ldl::PositiveDefinite { .. })
    }
}

/// LDL* without pivoting. Assumes `m` Hermitian.
pub fn ldl<S: Scalar>(m: &Mat<S>, eps: f64) -> Ldl<S> {
    let n = m.len();
    let mut l: Mat<S> = identity(n);
    let mut d: Vec<S> = Vec::with_capacity(n);
    for k in 0..n {
        // d_k = m_kk − Σ_{j<k} |l_kj|² d_j
        let mut dk = m[k][k].clone();
        for j in 0..k {
            dk = dk - l[k][j].abs_sqr() * d[j].clone();
        }
        let dk = dk.re();
        if dk.real_sign(eps) != Ordering::Greater {
            // witness: solve L_{..k}^* x = e_k on the leading block
            let mut x = vec![S::zero(); n];
            x[k] = S::one();
            for i in (0..k).rev() {
                let mut s = S::zero();
                for j in i + 1..=k {
                    s = s + l[j][i].conj() * x[j].clone();
                }
                x[i] = -s;
            }
            return Ldl::NotPositive {
                index: k,
                pivot: dk,
                witness: x,
            };
        }
        for i in k + 1..n {
            // l_ik = (m_ik − Σ_{j<k} l_ij d_j conj(l_kj)) / d_k
            let mut s = m[i][k].clone();
            for j in 0..k {
                s = s - l[i][j].clone() * d[j].clone() * l[k][j].conj();
            }
            l[i][k] = s * dk.inv().expect("positive pivot");
        }
        d.push(dk);
    }
    Ldl::PositiveDefinite { pivots: d }
}

/// Leading principal minors `det(m[..k, ..k])`, `k = 1..n`, by elimination.
pub fn leading_minors<S: Scalar>(m: &Mat<S>, eps: f64) -> Vec<S> {
    let n = m.len();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let block: Mat<S> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        out.push(determinant(block, eps));
    }
    out
}

pub fn determinant<S: Scalar>(mut m: Mat<S>, eps: f64) -> S {
    let n = m.len();
    let mut det = S::one();
    for c in 0..n {
        let Some(p) = (c..n).max_by(|&a, &b| {
            m[a][c]
                .magnitude()
                .partial_cmp(&m[b][c].magnitude())
                .unwrap_or(Ordering::Equal)
        }) else {
            break;
        };
        if m[p][c].is_zero() || m[p][c].is_negligible(eps) {
            return S::zero();
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = det * m[c][c].clone();
        let inv = m[c][c].inv().expect("pivot");
        for r in c + 1..n {
            let f = m[r][c].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let v = m[c][k].clone();
                m[r][k] = m[r][k].clone() - f.clone() * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, q, GaussRat};

    #[test]
    fn kernel_and_solve() {
        let a = vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]];
        assert_eq!(rank(&a, 3, 0.0), 1);
        let ker = nullspace(&a, 3, 0.0);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
        let sol = solve(&a, &[q(1, 1), q(2, 1)], 3, 0.0).unwrap();
        assert_eq!(mat_vec(&a, &sol.particular), vec![q(1, 1), q(2, 1)]);
        assert!(solve(&a, &[q(1, 1), q(3, 1)], 3, 0.0).is_none());
    }

    #[test]
    fn ldl_certifies_and_witnesses() {
        let h = vec![vec![q(2, 1), gi(0, 1)], vec![gi(0, -1), q(1, 1)]];
        let Ldl::PositiveDefinite { pivots } = ldl(&h, 0.0) else {
            panic!("expected positive definite")
        };
        assert_eq!(pivots, vec![q(2, 1), q(1, 2)]);
        assert_eq!(leading_minors(&h, 0.0), vec![q(2, 1), q(1, 1)]);

        let bad = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(1, 1)]];
        match ldl(&bad, 0.0) {
            Ldl::NotPositive { index, pivot, witness } => {
                assert_eq!(index, 1);
                assert_eq!(hermitian_form(&bad, &witness), pivot);
                assert_eq!(pivot, q(-3, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn intersection_of_planes() {
        let e = |i: usize| -> Vec<GaussRat> { (0..3).map(|k| if k == i { q(1, 1) } else { q(0, 1) }).collect() };
        let u = vec![e(0), e(1)];
        let w = vec![e(1), e(2)];
        assert_eq!(intersection_dim(&u, &w, 3, 0.0), 1);
    }
}
