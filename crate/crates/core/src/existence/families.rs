//! Closed-form existence conditions for the three nilpotent families, each
//! paired with a direct `dΨ` computation through [`closure_system`].
//!
//! In every family `Ψ = λ + ω^p + λ̄` with `λ` spanning `Λ^{p+1,p−1}`. The
//! condition formula is the coefficient of `φ^{1..n}∧φ̄^{1..n−1}` in `dΨ`, and
//! `dΨ` has no other independent component.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::closure::{closure_system, AnsatzSolution};
use crate::catalog::{fps6, ft8, st10};
use crate::error::Result;
use crate::exterior::{InvariantForm, Monomial};
use crate::lie::StructurePresentation;
use crate::metric::HermitianMetric;
use crate::positivity::CERT_METRIC_POWER;
use crate::scalar::Scalar;

fn mono(n: usize, holo: &[usize], anti: &[usize]) -> Monomial {
    let (m, s) = Monomial::from_indices(n, holo, anti).expect("in range").expect("no repeats");
    debug_assert_eq!(s, 1);
    m
}

fn half<S: Scalar>() -> S {
    S::from_frac(1, 2)
}

fn re2<S: Scalar>(x: S) -> S {
    // 2 Re(x)
    x.clone() + x.conj()
}

/// `ΛFPS^{3,1}` basis `α^{1231̄}, α^{1232̄}, α^{1233̄}` (letters `L, M, N`).
pub fn fps_ansatz() -> Vec<Monomial> {
    (1..=3).map(|k| mono(3, &[1, 2, 3], &[k])).collect()
}

/// Six `Λ^{4,2}` monomials for `L₁, L₂, L₃, M₁, M₂, N`.
pub fn ft8_ansatz() -> Vec<Monomial> {
    [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]
        .iter()
        .map(|a| mono(4, &[1, 2, 3, 4], a))
        .collect()
}

/// Ten `Λ^{5,3}` monomials for `L₁, L₂, L₃, M₁, M₂, N₁, S₁, S₂, S₃, P`.
pub fn st10_ansatz() -> Vec<Monomial> {
    [
        [1, 2, 3],
        [1, 2, 4],
        [1, 2, 5],
        [1, 3, 4],
        [1, 3, 5],
        [1, 4, 5],
        [2, 3, 4],
        [2, 3, 5],
        [2, 4, 5],
        [3, 4, 5],
    ]
    .iter()
    .map(|a| mono(5, &[1, 2, 3, 4, 5], a))
    .collect()
}

/// Parameters of the 6-dimensional family together with a general metric and
/// `λ = L α^{1231̄} + M α^{1232̄} + N α^{1233̄}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FpsParams<S: Scalar> {
    /// `A, B, C, D, E`.
    pub abcde: [S; 5],
    /// `r², s², t², u, v, w`.
    pub letters: [S; 6],
    /// `L, M, N`.
    pub lmn: [S; 3],
}

impl<S: Scalar> FpsParams<S> {
    pub fn diagonal(abcde: [S; 5], lmn: [S; 3]) -> Self {
        FpsParams {
            abcde,
            letters: [S::one(), S::one(), S::one(), S::zero(), S::zero(), S::zero()],
            lmn,
        }
    }

    pub fn structure(&self) -> StructurePresentation<S> {
        let [a, b, c, d, e] = self.abcde.clone();
        fps6(a, b, c, d, e)
    }

    pub fn metric(&self, eps: f64) -> Result<HermitianMetric<S>> {
        let [r2, s2, t2, u, v, w] = self.letters.clone();
        HermitianMetric::from_letters(r2, s2, t2, u, v, w, eps)
    }
}

/// `−NĒ + ½(−r²t²B̄ + s²t²C̄ + |v|²B̄ − |w|²C̄ + i t² u D̄ + i t² ū Ā + v w̄ D̄ − v̄ w Ā)`.
///
/// The summand `i t² conj(uA)` is read as `i t² ū Ā`, and `v conj(wD)` as
/// `v w̄ D̄`; both readings are confirmed against the direct computation.
pub fn fps_psymplectic_condition<S: Scalar>(p: &FpsParams<S>) -> S {
    let [a, b, c, d, e] = p.abcde.clone();
    let [r2, s2, t2, u, v, w] = p.letters.clone();
    let n = p.lmn[2].clone();
    let i = S::i;
    let inner = -(r2 * t2.clone() * b.conj()) + s2 * t2.clone() * c.conj() + v.abs_sqr() * b.conj()
        - w.abs_sqr() * c.conj()
        + i() * t2.clone() * u.clone() * d.conj()
        + i() * t2 * u.conj() * a.conj()
        + v.clone() * w.conj() * d.conj()
        - v.conj() * w * a.conj();
    -(n * e.conj()) + half::<S>() * inner
}

pub fn fps_closure<S: Scalar>(p: &FpsParams<S>, eps: f64) -> Result<AnsatzSolution<S>> {
    let w2 = p.metric(eps)?.fundamental_form().power(2);
    closure_system(&p.structure(), 2, &w2, &fps_ansatz(), eps)
}

/// `dΨ` computed directly.
pub fn fps_direct_residual<S: Scalar>(p: &FpsParams<S>, eps: f64) -> Result<InvariantForm<S>> {
    fps_closure(p, eps)?.residual(&p.structure(), &p.lmn)
}

/// `|A|² + |D|² + |E|² + 2Re(B̄C)`, zero iff the diagonal metric is SKT.
pub fn fps_skt_expression<S: Scalar>(abcde: &[S; 5]) -> S {
    let [a, b, c, d, e] = abcde.clone();
    a.abs_sqr() + d.abs_sqr() + e.abs_sqr() + re2(b.conj() * c)
}

/// Diagonal metric SKT and `Ψ` 2-symplectic.
pub fn fps_skt_2symplectic_system<S: Scalar>(abcde: &[S; 5], n: &S, eps: f64) -> bool {
    let [_, b, c, _, e] = abcde.clone();
    let second = half::<S>() * (c.conj() - b.conj()) - n.clone() * e.conj();
    fps_skt_expression(abcde).is_negligible(eps) && second.is_negligible(eps)
}

/// The locus of `B = x + iy` solving the SKT + 2-symplectic system when
/// `A = D = 0`, `C = u + iv` and `|N|² = a_n` are fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleLocus {
    pub exists: bool,
    pub center: (f64, f64),
    pub radius2: f64,
    /// Coefficient `k` in `x² + y² + k(xu + yv) + u² + v² = 0`.
    pub k: f64,
}

fn circle(k: f64, u: f64, v: f64) -> CircleLocus {
    let center = (-k * u / 2.0, -k * v / 2.0);
    let radius2 = (k * k / 4.0 - 1.0) * (u * u + v * v);
    CircleLocus {
        exists: radius2 > 0.0,
        center,
        radius2,
        k,
    }
}

/// Eliminating `E = (C − B)/(2N̄)` turns the SKT equation into
/// `|C − B|² + 8a_n Re(B̄C) = 0`, i.e. `k = 8a_n − 2`. The radius² is
/// `8a_n(2a_n − 1)(u² + v²)`, so a circle exists iff `a_n > ½` and `(u,v) ≠ 0`.
pub fn fps_solution_circle(a_n: f64, u: f64, v: f64) -> CircleLocus {
    circle(8.0 * a_n - 2.0, u, v)
}

/// The same locus with `k = 4a_n − 2`, which drops the factor 2 of `2Re(B̄C)`.
/// Kept for comparison; points on it do not solve the system in general.
pub fn fps_solution_circle_printed(a_n: f64, u: f64, v: f64) -> CircleLocus {
    circle(4.0 * a_n - 2.0, u, v)
}

/// `(3/4)i(a₃ + a₈ + a₁₂) − L̄₃a₆ + M̄₂a₂ − N̄a₁`.
pub fn ft8_3symplectic_condition<S: Scalar>(a: &[S; 12], l3: &S, m2: &S, n: &S) -> S {
    S::from_frac(3, 4) * S::i() * (a[2].clone() + a[7].clone() + a[11].clone()) - l3.conj() * a[5].clone()
        + m2.conj() * a[1].clone()
        - n.conj() * a[0].clone()
}

/// `Σ_{k∈{1,2,4,5,6,7,9,10,11}} |a_k|² − 2Re(a₃ā₈ + a₃ā₁₂ + a₈ā₁₂)`, zero iff the
/// diagonal metric is astheno-Kähler.
pub fn ft8_astheno_expression<S: Scalar>(a: &[S; 12]) -> S {
    let squares = [0, 1, 3, 4, 5, 6, 8, 9, 10]
        .iter()
        .fold(S::zero(), |acc, &k| acc + a[k].abs_sqr());
    let (a3, a8, a12) = (a[2].clone(), a[7].clone(), a[11].clone());
    squares - re2(a3.clone() * a8.conj() + a3 * a12.conj() + a8 * a12.conj())
}

/// `λ` letters `[L₁, L₂, L₃, M₁, M₂, N]` for the 8-dimensional family with the
/// diagonal metric and `η = ω³`.
pub fn ft8_closure<S: Scalar>(a: &[S; 12], eps: f64) -> Result<AnsatzSolution<S>> {
    let w3 = HermitianMetric::<S>::identity(4).fundamental_form().power(3);
    closure_system(&ft8(a), 3, &w3, &ft8_ansatz(), eps)
}

pub fn ft8_direct_residual<S: Scalar>(a: &[S; 12], lambda: &[S; 6], eps: f64) -> Result<InvariantForm<S>> {
    ft8_closure(a, eps)?.residual(&ft8(a), lambda)
}

/// Diagonal metric SKT and astheno-Kähler with `a₈ = 0`, and `Ψ`
/// 3-symplectic. The hypothesis `a₈ = 0` is part of the system.
pub fn ft8_combined_system<S: Scalar>(a: &[S; 12], m2: &S, eps: f64) -> bool {
    let zero = |k: usize| a[k - 1].is_negligible(eps);
    let vanish = [8, 1, 4, 6, 7, 9, 11].iter().all(|&k| zero(k));
    let modulus =
        a[1].abs_sqr() + a[4].abs_sqr() + a[9].abs_sqr() - re2(a[2].clone() * a[11].conj());
    let cond = S::from_frac(3, 4) * S::i() * (a[2].clone() + a[11].clone()) + m2.conj() * a[1].clone();
    vanish && modulus.is_negligible(eps) && cond.is_negligible(eps)
}

/// `∂∂̄ω²` for the diagonal metric, computed directly.
pub fn ft8_ddbar_omega2<S: Scalar>(a: &[S; 12], eps: f64) -> Result<InvariantForm<S>> {
    let w2 = HermitianMetric::<S>::identity(4).fundamental_form().power(2);
    ft8(a).ddbar(&w2, eps)
}

/// `½(astheno expression)·η^{1231̄2̄3̄}`.
pub fn ft8_ddbar_omega2_formula<S: Scalar>(a: &[S; 12]) -> InvariantForm<S> {
    InvariantForm::from_monomial(4, mono(4, &[1, 2, 3], &[1, 2, 3]), half::<S>() * ft8_astheno_expression(a))
}

fn stv<S: Scalar>(c: &[S; 22], name: &str) -> S {
    let k = crate::catalog::ST10_NAMES
        .iter()
        .position(|n| *n == name)
        .expect("known name");
    c[k].clone()
}

/// `(3/2)(d₄ + c₄ + b₄ + a₄) − L̄₃c₁ + M̄₂b₂ − N̄₁b₁ − S̄₂a₃ + S̄₃a₂ − P̄a₁`, with
/// `lambda = [L₁, L₂, L₃, M₁, M₂, N₁, S₁, S₂, S₃, P]`.
pub fn st10_4symplectic_condition<S: Scalar>(c: &[S; 22], lambda: &[S; 10]) -> S {
    let g = |n: &str| stv(c, n);
    let [_, _, l3, _, m2, n1, _, s2, s3, p] = lambda.clone();
    S::from_frac(3, 2) * (g("d4") + g("c4") + g("b4") + g("a4")) - l3.conj() * g("c1") + m2.conj() * g("b2")
        - n1.conj() * g("b1")
        - s2.conj() * g("a3")
        + s3.conj() * g("a2")
        - p.conj() * g("a1")
}

/// `2Re(Σ mixed products of a₄, b₄, c₄, d₄) − Σ|x|²` over every other
/// Hermitian-type or holomorphic coefficient, including `c₅` and `d₃`; zero iff
/// the diagonal metric is astheno-Kähler. Direct `∂∂̄ω³` is `−(3/4)i` times
/// this. The frequently quoted form of this identity leaves out `|c₅|²` and
/// `|d₃|²`, which matters only when those coefficients are nonzero.
pub fn st10_astheno_expression<S: Scalar>(c: &[S; 22]) -> S {
    let g = |n: &str| stv(c, n);
    let squares = [
        "a1", "a2", "a3", "a5", "a6", "a7", "b1", "b2", "b3", "b5", "b6", "c1", "c2", "c3", "c5", "d1", "d2", "d3",
    ]
    .iter()
    .fold(S::zero(), |acc, n| acc + g(n).abs_sqr());
    let (a4, b4, c4, d4) = (g("a4"), g("b4"), g("c4"), g("d4"));
    let mixed = d4.clone() * a4.conj()
        + d4.clone() * b4.conj()
        + d4 * c4.conj()
        + c4.clone() * a4.conj()
        + c4 * b4.conj()
        + b4 * a4.conj();
    re2(mixed) - squares
}

/// Coefficients forced to vanish before the combined system applies.
pub const ST10_VANISHING: [&str; 16] = [
    "a2", "a3", "a5", "a6", "a7", "b1", "b2", "b3", "b5", "b6", "c2", "c3", "c5", "d1", "d2", "d3",
];

/// The five equations for astheno-Kähler, `ω²` 2-pluriclosed and `Ψ`
/// 4-symplectic, each evaluated separately. Returns `None` when one of
/// [`ST10_VANISHING`] is nonzero.
pub fn st10_combined_lines<S: Scalar>(c: &[S; 22], l3: &S, p: &S, eps: f64) -> Option<[bool; 5]> {
    let g = |n: &str| stv(c, n);
    if !ST10_VANISHING.iter().all(|n| g(n).is_negligible(eps)) {
        return None;
    }
    let (a1, a4, b4, c4, d4, c1) = (g("a1"), g("a4"), g("b4"), g("c4"), g("d4"), g("c1"));
    let l1 = re2(d4.clone() * a4.conj() + d4.clone() * b4.conj() + d4.clone() * c4.conj()) - c1.abs_sqr();
    let l2 = re2(c4.clone() * a4.conj() + c4.clone() * b4.conj() + b4.clone() * a4.conj()) - a1.abs_sqr();
    let l3e = re2(c4.clone() * b4.conj() - d4.clone() * a4.conj());
    let l4 = re2(b4.clone() * d4.conj() - c4.clone() * a4.conj());
    let l5 = S::from_frac(3, 2) * (a4 + b4 + c4 + d4) - c1 * l3.conj() - a1 * p.conj();
    Some([l1, l2, l3e, l4, l5].map(|x| x.is_negligible(eps)))
}

pub fn st10_combined_system<S: Scalar>(c: &[S; 22], l3: &S, p: &S, eps: f64) -> bool {
    st10_combined_lines(c, l3, p, eps).is_some_and(|l| l.iter().all(|&b| b))
}

pub fn st10_closure<S: Scalar>(c: &[S; 22], eps: f64) -> Result<AnsatzSolution<S>> {
    let w4 = HermitianMetric::<S>::identity(5).fundamental_form().power(4);
    closure_system(&st10(c), 4, &w4, &st10_ansatz(), eps)
}

pub fn st10_direct_residual<S: Scalar>(c: &[S; 22], lambda: &[S; 10], eps: f64) -> Result<InvariantForm<S>> {
    st10_closure(c, eps)?.residual(&st10(c), lambda)
}

/// Names of the `λ` letters, in ansatz order.
pub const FPS_LAMBDA: [&str; 3] = ["L", "M", "N"];
pub const FT8_LAMBDA: [&str; 6] = ["L1", "L2", "L3", "M1", "M2", "N"];
pub const ST10_LAMBDA: [&str; 10] = ["L1", "L2", "L3", "M1", "M2", "N1", "S1", "S2", "S3", "P"];
/// Metric letters of the 6-dimensional family.
pub const FPS_METRIC: [&str; 6] = ["r2", "s2", "t2", "u", "v", "w"];

/// `λ` letters that accompany a catalog preset of the same name.
pub fn preset_lambda(family: &str, preset: &str) -> Vec<(&'static str, crate::scalar::GaussRat)> {
    use crate::scalar::GaussRat;
    match (family, preset) {
        ("fps6", "witness") => vec![("N", GaussRat::from_ratios(3, 4, 0, 1))],
        ("ft8", "witness") => vec![("M2", GaussRat::from_ratios(3, 4, 3, 4))],
        ("st10", "witness") => vec![("P", GaussRat::from_ratios(9, 4, 3, 4))],
        _ => vec![],
    }
}

/// Summary of a p-symplectic check on one family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsymplecticReport {
    pub family: String,
    pub p: usize,
    pub condition: String,
    pub condition_zero: bool,
    pub direct_closure_zero: bool,
    pub transversality: String,
    pub psymplectic: bool,
    /// Further metric conditions, e.g. `("skt", true)`.
    pub metric_flags: Vec<(String, bool)>,
    pub notes: Vec<String>,
}

impl fmt::Display for PsymplecticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes = |b: bool| if b { "YES" } else { "NO" };
        let extra: Vec<String> = self
            .metric_flags
            .iter()
            .map(|(k, v)| format!("{k}: {}", yes(*v)))
            .collect();
        writeln!(
            f,
            "{}: {}-symplectic: {} (condition = {}; transversality: {} certificate)",
            self.family,
            self.p,
            yes(self.psymplectic),
            self.condition,
            self.transversality
        )?;
        if !extra.is_empty() {
            writeln!(f, "  {}", extra.join(", "))?;
        }
        writeln!(f, "  direct dΨ = 0: {}", self.direct_closure_zero)?;
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

fn report<S: Scalar>(
    family: &str,
    p: usize,
    condition: S,
    residual: &InvariantForm<S>,
    metric_flags: Vec<(String, bool)>,
    eps: f64,
) -> PsymplecticReport {
    let condition_zero = condition.is_negligible(eps);
    let direct = residual.is_negligible(eps);
    let mut notes = vec![];
    if condition_zero != direct {
        notes.push("condition formula and direct dΨ disagree".into());
    }
    PsymplecticReport {
        family: family.into(),
        p,
        condition: condition.to_string(),
        condition_zero,
        direct_closure_zero: direct,
        transversality: CERT_METRIC_POWER.into(),
        psymplectic: condition_zero && direct,
        metric_flags,
        notes,
    }
}

pub fn fps_report<S: Scalar>(p: &FpsParams<S>, eps: f64) -> Result<PsymplecticReport> {
    let residual = fps_direct_residual(p, eps)?;
    let skt = fps_skt_expression(&p.abcde).is_negligible(eps);
    let mut r = report("fps6", 2, fps_psymplectic_condition(p), &residual, vec![("skt".into(), skt)], eps);
    r.notes.push("i t² conj(uA) read as i t² ū Ā".into());
    Ok(r)
}

pub fn ft8_report<S: Scalar>(a: &[S; 12], lambda: &[S; 6], eps: f64) -> Result<PsymplecticReport> {
    let residual = ft8_direct_residual(a, lambda, eps)?;
    let pres = ft8(a);
    let w = HermitianMetric::<S>::identity(4).fundamental_form();
    let skt = pres.ddbar(&w, eps)?.is_negligible(eps);
    let astheno = ft8_astheno_expression(a).is_negligible(eps);
    let cond = ft8_3symplectic_condition(a, &lambda[2], &lambda[4], &lambda[5]);
    Ok(report(
        "ft8",
        3,
        cond,
        &residual,
        vec![("skt".into(), skt), ("astheno_kahler".into(), astheno)],
        eps,
    ))
}

pub fn st10_report<S: Scalar>(c: &[S; 22], lambda: &[S; 10], eps: f64) -> Result<PsymplecticReport> {
    let residual = st10_direct_residual(c, lambda, eps)?;
    let pres = st10(c);
    let w = HermitianMetric::<S>::identity(5).fundamental_form();
    let astheno = st10_astheno_expression(c).is_negligible(eps);
    let pluri = pres.ddbar(&w.power(2), eps)?.is_negligible(eps);
    Ok(report(
        "st10",
        4,
        st10_4symplectic_condition(c, lambda),
        &residual,
        vec![("astheno_kahler".into(), astheno), ("omega2_ddbar_closed".into(), pluri)],
        eps,
    ))
}
