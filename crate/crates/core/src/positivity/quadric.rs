//! Real `(2,2)`-forms on `C⁴` as `6×6` Hermitian matrices.
//!
//! With `Ω₁ = φ^{12}, Ω₂ = φ^{13}, Ω₃ = φ^{14}, Ω₄ = φ^{23}, Ω₅ = −φ^{24},
//! Ω₆ = φ^{34}` one has `Ω_j∧Ω_k = φ^{1234}` if `k = 7 − j` and `0` otherwise.
//! Writing `α = Σ a_{jk} Ω_j∧Ω̄_k` and `β = Σ b_l Ω_l`, the pairing is
//! `σ₂ α∧β∧β̄ = 4 z̄ A zᵀ Vol` with `z_j = conj(b_{7−j})`, and `β` is simple
//! exactly when `z₁z₆ + z₂z₅ + z₃z₄ = 0`. So `α` is transverse iff `z̄Azᵀ > 0`
//! on that quadric minus the origin.

use nalgebra::{SMatrix, SVector};
use num::complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{c64_pair, TransversalityVerdict, Witness, CERT_OMEGA_A};
use crate::error::{Error, Result};
use crate::exterior::{InvariantForm, Monomial};
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;

/// Index sets and signs of `Ω₁..Ω₆` (bitmask over `φ¹..φ⁴`).
pub const OMEGA_BASIS: [(u16, i8); 6] = [
    (0b0011, 1),
    (0b0101, 1),
    (0b1001, 1),
    (0b0110, 1),
    (0b1010, -1),
    (0b1100, 1),
];

/// The pairs `(i, j)` of the `Ω_a` family, 1-based.
pub const OMEGA_A_SLOTS: [(usize, usize); 3] = [(1, 6), (2, 5), (3, 4)];

#[derive(Clone, Debug, PartialEq)]
pub struct QuadricMatrix<S: Scalar> {
    pub a: Mat<S>,
}

impl<S: Scalar> QuadricMatrix<S> {
    /// `Σ a_{jk} Ω_j∧Ω̄_k`.
    pub fn to_form(&self) -> InvariantForm<S> {
        let mut out = InvariantForm::zero(4);
        for (j, &(hj, sj)) in OMEGA_BASIS.iter().enumerate() {
            for (k, &(hk, sk)) in OMEGA_BASIS.iter().enumerate() {
                let c = self.a[j][k].clone();
                out.add_term(Monomial { holo: hj, anti: hk }, if sj * sk > 0 { c } else { -c });
            }
        }
        out
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.a.len() == 6 && linalg::is_hermitian(&self.a, eps)
    }

    pub fn to_c64(&self) -> SMatrix<Complex64, 6, 6> {
        SMatrix::from_fn(|i, j| self.a[i][j].to_c64())
    }
}

pub fn quadric_matrix<S: Scalar>(psi: &InvariantForm<S>, eps: f64) -> Result<QuadricMatrix<S>> {
    if psi.rank() != 4 {
        return Err(Error::Degree(format!("quadric criterion needs n = 4, got {}", psi.rank())));
    }
    if let Some((m, _)) = psi.terms().find(|(m, _)| m.bidegree() != (2, 2)) {
        return Err(Error::Degree(format!("term {m} is not of bidegree (2,2)")));
    }
    if !psi.is_real(eps) {
        return Err(Error::NotReal);
    }
    let mut a = linalg::zeros(6, 6);
    for (j, &(hj, sj)) in OMEGA_BASIS.iter().enumerate() {
        for (k, &(hk, sk)) in OMEGA_BASIS.iter().enumerate() {
            let c = psi.coeff(Monomial { holo: hj, anti: hk });
            a[j][k] = if sj * sk > 0 { c } else { -c };
        }
    }
    Ok(QuadricMatrix { a })
}

/// `Σ_l Ω_l∧Ω̄_l + a Ω_i∧Ω̄_j + ā Ω_j∧Ω̄_i`.
pub fn omega_a_matrix<S: Scalar>(a: S, slot: (usize, usize)) -> Result<QuadricMatrix<S>> {
    if !OMEGA_A_SLOTS.contains(&slot) {
        return Err(Error::Invalid(format!("slot {slot:?} is not one of (1,6), (2,5), (3,4)")));
    }
    let mut m = linalg::identity(6);
    m[slot.0 - 1][slot.1 - 1] = a.clone();
    m[slot.1 - 1][slot.0 - 1] = a.conj();
    Ok(QuadricMatrix { a: m })
}

pub fn omega_a_form<S: Scalar>(a: S, slot: (usize, usize)) -> Result<InvariantForm<S>> {
    Ok(omega_a_matrix(a, slot)?.to_form())
}

/// `|a| < 2`, decided on `|a|² < 4` (exact on the exact backend).
pub fn omega_a_verdict<S: Scalar>(a: &S, eps: f64) -> bool {
    (S::from_int(4) - a.abs_sqr()).real_sign(eps) == std::cmp::Ordering::Greater
}

/// Recognizes `A = I + a E_{ij} + ā E_{ji}` with `a ≠ 0` and returns `(a, slot)`.
pub fn recognize_omega_a<S: Scalar>(m: &QuadricMatrix<S>) -> Option<(S, (usize, usize))> {
    let a = &m.a;
    let mut found = None;
    for i in 0..6 {
        for j in 0..6 {
            let expected_diag = i == j;
            let v = &a[i][j];
            if expected_diag {
                if !v.is_one() {
                    return None;
                }
            } else if !v.is_zero() {
                if i + j != 5 {
                    return None;
                }
                let slot = (i.min(j) + 1, i.max(j) + 1);
                let a_ij = a[slot.0 - 1][slot.1 - 1].clone();
                match &found {
                    None => found = Some((a_ij, slot)),
                    Some((_, s)) if *s == slot => {}
                    Some(_) => return None,
                }
            }
        }
    }
    let (val, slot) = found?;
    (a[slot.1 - 1][slot.0 - 1] == val.conj()).then_some((val, slot))
}

/// Analytic verdict for the `Ω_a` family, `a ≠ 0`.
pub fn omega_a_recognized<S: Scalar>(m: &QuadricMatrix<S>) -> Option<TransversalityVerdict> {
    let (a, slot) = recognize_omega_a(m)?;
    Some(omega_a_analytic(&a, slot))
}

fn omega_a_analytic<S: Scalar>(a: &S, slot: (usize, usize)) -> TransversalityVerdict {
    if omega_a_verdict(a, 0.0) {
        return TransversalityVerdict::CertifiedPositive {
            certificate: CERT_OMEGA_A.into(),
            detail: format!("Ω_a with a = {a} in slot {slot:?}, |a|² < 4"),
        };
    }
    // z_i = 1, z_j = −ā/|a|, the other two pairs equal to u/√2 with u² = ā/|a|
    let ac = a.to_c64();
    let r = ac.norm();
    let phase = ac.conj() / r;
    let u = phase.sqrt() / 2f64.sqrt();
    let mut z = [u; 6];
    z[slot.0 - 1] = Complex64::new(1.0, 0.0);
    z[slot.1 - 1] = -phase;
    TransversalityVerdict::Falsified {
        value: (2.0 - r) / 2.0,
        exact_value: None,
        witness: Witness::Quadric {
            z: z.iter().map(|&c| c64_pair(c)).collect(),
        },
        samples: None,
        seed: None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadricConfig {
    pub starts: usize,
    pub seed: u64,
    pub tol: f64,
    pub eps: f64,
    pub max_iter: usize,
}

impl Default for QuadricConfig {
    fn default() -> Self {
        QuadricConfig {
            starts: 64,
            seed: 0,
            tol: 1e-9,
            eps: 1e-12,
            max_iter: 400,
        }
    }
}

/// `Ω_a` matrices with `a ≠ 0` get the analytic verdict; everything else is
/// minimized numerically over the quadric.
pub fn quadric_transversality<S: Scalar>(m: &QuadricMatrix<S>, cfg: &QuadricConfig) -> Result<TransversalityVerdict> {
    if !m.is_hermitian(cfg.eps) {
        return Err(Error::NotHermitian);
    }
    if let Some(v) = omega_a_recognized(m) {
        return Ok(v);
    }
    Ok(numeric_verdict(m, cfg))
}

/// The numeric path alone, skipping family recognition.
pub fn numeric_verdict<S: Scalar>(m: &QuadricMatrix<S>, cfg: &QuadricConfig) -> TransversalityVerdict {
    let (value, z) = quadric_minimize(&m.to_c64(), cfg);
    if value <= cfg.tol {
        TransversalityVerdict::Falsified {
            value,
            exact_value: None,
            witness: Witness::Quadric {
                z: z.iter().map(|&c| c64_pair(c)).collect(),
            },
            samples: Some(cfg.starts),
            seed: Some(cfg.seed),
        }
    } else {
        TransversalityVerdict::NotFalsified {
            samples: cfg.starts,
            min_value: value,
            seed: cfg.seed,
        }
    }
}

type V8 = SVector<f64, 8>;
type M8 = SMatrix<f64, 8, 8>;
type Z6 = SVector<Complex64, 6>;

/// Chart `k` (0-based): `z_k = 1`, `z_{5−k}` solved from the quadric, the
/// remaining four coordinates free.
struct Chart {
    fixed: usize,
    solved: usize,
    free: [usize; 4],
}

impl Chart {
    fn new(k: usize) -> Self {
        let solved = 5 - k;
        let mut free = [0; 4];
        let mut t = 0;
        // free coordinates come in quadric pairs (a, 5−a)
        for a in 0..3 {
            if a == k.min(solved) {
                continue;
            }
            free[t] = a;
            free[t + 1] = 5 - a;
            t += 2;
        }
        Chart { fixed: k, solved, free }
    }

    fn point(&self, w: &[Complex64; 4]) -> Z6 {
        let mut z = Z6::zeros();
        z[self.fixed] = Complex64::new(1.0, 0.0);
        for (t, &c) in self.free.iter().enumerate() {
            z[c] = w[t];
        }
        z[self.solved] = -(w[0] * w[1] + w[2] * w[3]);
        z
    }

    /// Rayleigh quotient and its real gradient in `(Re w, Im w)`.
    fn eval(&self, a: &SMatrix<Complex64, 6, 6>, x: &V8) -> (f64, V8) {
        let w = [
            Complex64::new(x[0], x[4]),
            Complex64::new(x[1], x[5]),
            Complex64::new(x[2], x[6]),
            Complex64::new(x[3], x[7]),
        ];
        let z = self.point(&w);
        let az = a * z;
        let num = z.dotc(&az).re;
        let den = z.norm_squared();
        let r = num / den;
        // ∂R/∂w̄ = J*(Az − R z)/D, J the holomorphic Jacobian of z(w)
        let resid = (az - z * Complex64::new(r, 0.0)) * Complex64::new(1.0 / den, 0.0);
        let partner = [w[1], w[0], w[3], w[2]];
        let mut g = V8::zeros();
        for t in 0..4 {
            let gw = resid[self.free[t]] + (-partner[t]).conj() * resid[self.solved];
            g[t] = 2.0 * gw.re;
            g[t + 4] = 2.0 * gw.im;
        }
        (r, g)
    }
}

fn bfgs(f: impl Fn(&V8) -> (f64, V8), x0: V8, max_iter: usize) -> (f64, V8) {
    let mut x = x0;
    let (mut fx, mut g) = f(&x);
    let mut h = M8::identity();
    for _ in 0..max_iter {
        if g.norm() < 1e-14 {
            break;
        }
        let mut d = -(h * g);
        if g.dot(&d) >= 0.0 {
            h = M8::identity();
            d = -g;
        }
        let slope = g.dot(&d);
        let mut t = 1.0;
        let (mut xn, mut fxn, mut gn);
        loop {
            xn = x + d * t;
            (fxn, gn) = f(&xn);
            if fxn.is_finite() && fxn <= fx + 1e-4 * t * slope {
                break;
            }
            t *= 0.5;
            if t < 1e-20 {
                return (fx, x);
            }
        }
        let s = xn - x;
        let y = gn - g;
        let sy = s.dot(&y);
        if sy > 1e-300 {
            let rho = 1.0 / sy;
            let i = M8::identity();
            h = (i - s * y.transpose() * rho) * h * (i - y * s.transpose() * rho) + s * s.transpose() * rho;
        }
        let improvement = fx - fxn;
        x = xn;
        fx = fxn;
        g = gn;
        if improvement.abs() < 1e-18 && g.norm() < 1e-10 {
            break;
        }
    }
    (fx, x)
}

/// Multi-start minimization of `z̄Azᵀ/|z|²` over the quadric. Returns the
/// minimum and a unit-norm minimizer.
pub fn quadric_minimize(a: &SMatrix<Complex64, 6, 6>, cfg: &QuadricConfig) -> (f64, Z6) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(f64, Z6)> = None;
    for s in 0..cfg.starts.max(1) {
        let chart = Chart::new(s % 6);
        let x0 = V8::from_fn(|_, _| StandardNormal.sample(&mut rng));
        let (v, x) = bfgs(|x| chart.eval(a, x), x0, cfg.max_iter);
        let w = [
            Complex64::new(x[0], x[4]),
            Complex64::new(x[1], x[5]),
            Complex64::new(x[2], x[6]),
            Complex64::new(x[3], x[7]),
        ];
        let z = chart.point(&w);
        let z = z / Complex64::new(z.norm(), 0.0);
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, z));
        }
    }
    best.expect("at least one start")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::sigma;
    use crate::scalar::{q, GaussRat};
    use crate::positivity::{pairing, SimpleForm};

    #[test]
    fn omega_basis_products() {
        for (j, &(hj, sj)) in OMEGA_BASIS.iter().enumerate() {
            for (k, &(hk, sk)) in OMEGA_BASIS.iter().enumerate() {
                let a = InvariantForm::<GaussRat>::from_monomial(4, Monomial { holo: hj, anti: 0 }, q(sj as i64, 1));
                let b = InvariantForm::<GaussRat>::from_monomial(4, Monomial { holo: hk, anti: 0 }, q(sk as i64, 1));
                let prod = a.wedge(&b).unwrap();
                let expected = if j + k == 5 {
                    InvariantForm::from_monomial(4, Monomial { holo: 0b1111, anti: 0 }, q(1, 1))
                } else {
                    InvariantForm::zero(4)
                };
                assert_eq!(prod, expected, "Ω{} ∧ Ω{}", j + 1, k + 1);
            }
        }
    }

    #[test]
    fn matrix_round_trip_and_family() {
        let f = omega_a_form(GaussRat::from_ratios(1, 2, 1, 3), (2, 5)).unwrap();
        assert!(f.is_real(0.0));
        let m = quadric_matrix(&f, 0.0).unwrap();
        assert_eq!(m.to_form(), f);
        let (a, slot) = recognize_omega_a(&m).unwrap();
        assert_eq!(slot, (2, 5));
        assert_eq!(a, GaussRat::from_ratios(1, 2, 1, 3));
        assert!(quadric_matrix(&InvariantForm::<GaussRat>::zero(4), 0.0).unwrap().a.iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn pairing_is_four_times_the_quadric_value() {
        // β = Σ b_l Ω_l simple: b = Plücker of (1,0,2,i), (0,1,−1,3)
        let beta = SimpleForm::new(vec![
            vec![q(1, 1), q(0, 1), q(2, 1), GaussRat::i()],
            vec![q(0, 1), q(1, 1), q(-1, 1), q(3, 1)],
        ]);
        let f = omega_a_form(q(3, 2), (3, 4)).unwrap();
        let m = quadric_matrix(&f, 0.0).unwrap();
        let form = beta.to_form(4).unwrap();
        let b: Vec<GaussRat> = OMEGA_BASIS
            .iter()
            .map(|&(h, s)| {
                let c = form.coeff(Monomial { holo: h, anti: 0 });
                if s > 0 { c } else { -c }
            })
            .collect();
        let z: Vec<GaussRat> = (0..6).map(|j| b[5 - j].conj()).collect();
        let zaz = linalg::hermitian_form(&m.a, &z);
        assert_eq!(pairing(&f, 2, &beta, 0.0).unwrap(), zaz * q(4, 1));
        let _ = sigma::<GaussRat>(2);
    }

    #[test]
    fn identity_is_not_falsified_with_min_one() {
        let m = QuadricMatrix::<GaussRat> { a: linalg::identity(6) };
        let v = quadric_transversality(&m, &QuadricConfig::default()).unwrap();
        let TransversalityVerdict::NotFalsified { min_value, .. } = v else {
            panic!("{v:?}")
        };
        assert!((min_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn boundary_and_beyond() {
        let cfg = QuadricConfig::default();
        for (a, slot) in [(2, (2, 5)), (3, (1, 6)), (5, (3, 4))] {
            let m = omega_a_matrix(q(a, 2) * q(2, 1), slot).unwrap();
            assert!(quadric_transversality(&m, &cfg).unwrap().is_falsified());
            let v = numeric_verdict(&m, &cfg);
            assert!(v.is_falsified(), "a = {a}: {v:?}");
        }
        let m = omega_a_matrix(GaussRat::from_ratios(1, 1, 1, 1), (2, 5)).unwrap();
        assert!(quadric_transversality(&m, &cfg).unwrap().is_certified());
        assert!(!numeric_verdict(&m, &cfg).is_falsified());
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = QuadricMatrix::<GaussRat> { a: linalg::identity(6) };
        m.a[0][1] = q(1, 1);
        assert_eq!(quadric_transversality(&m, &QuadricConfig::default()), Err(Error::NotHermitian));
    }

    #[test]
    fn analytic_witness_lies_on_the_quadric() {
        let m = omega_a_matrix(GaussRat::from_ratios(0, 1, 3, 1), (1, 6)).unwrap();
        let Some(TransversalityVerdict::Falsified { witness: Witness::Quadric { z }, value, .. }) = omega_a_recognized(&m) else {
            panic!()
        };
        let z: Vec<Complex64> = z.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        assert!((z[0] * z[5] + z[1] * z[4] + z[2] * z[3]).norm() < 1e-12);
        let zv = Z6::from_iterator(z);
        let r = zv.dotc(&(m.to_c64() * zv)).re / zv.norm_squared();
        assert!((r - value).abs() < 1e-12);
    }
}
