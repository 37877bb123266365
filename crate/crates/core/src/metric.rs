//! Hermitian metrics in an invariant coframe and the metric classifier.
//!
//! The fundamental form of `H` is `ω = (i/2) Σ_{j,k} H_{jk} φʲ∧φ̄ᵏ`. For `n = 3`
//! the letters used for metrics elsewhere in this crate are `r² = H₁₁`,
//! `s² = H₂₂`, `t² = H₃₃`, `u = i H₁₂`, `v = i H₁₃`, `w = i H₂₃`, so the
//! off-diagonal part of `ω` reads `(u/2)φ^{12̄} − (ū/2)φ^{21̄} + …`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{InvariantForm, Monomial};
use crate::lie::StructurePresentation;
use crate::linalg::{self, Ldl, Mat};
use crate::positivity::{self, SamplingConfig, TransversalityVerdict};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMetric<S: Scalar> {
    h: Mat<S>,
}

impl<S: Scalar> HermitianMetric<S> {
    /// Checks Hermitian symmetry and positive definiteness (all LDL* pivots,
    /// equivalently all leading principal minors, positive).
    pub fn new(h: Mat<S>, eps: f64) -> Result<Self> {
        let n = h.len();
        if n == 0 || h.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("metric matrix must be square and nonempty".into()));
        }
        if !linalg::is_hermitian(&h, eps) {
            return Err(Error::NotHermitian);
        }
        if let Ldl::NotPositive { index, pivot, .. } = linalg::ldl(&h, eps) {
            return Err(Error::NotPositiveDefinite(format!(
                "leading minor of order {} is not positive (pivot {pivot})",
                index + 1
            )));
        }
        Ok(HermitianMetric { h })
    }

    pub fn identity(n: usize) -> Self {
        HermitianMetric {
            h: linalg::identity(n),
        }
    }

    pub fn diagonal(entries: &[S], eps: f64) -> Result<Self> {
        let n = entries.len();
        let mut h = linalg::zeros(n, n);
        for (k, e) in entries.iter().enumerate() {
            h[k][k] = e.clone();
        }
        Self::new(h, eps)
    }

    /// `n = 3` metric from the letters `r², s², t², u, v, w`.
    pub fn from_letters(r2: S, s2: S, t2: S, u: S, v: S, w: S, eps: f64) -> Result<Self> {
        let mi = -S::i();
        let h12 = mi.clone() * u;
        let h13 = mi.clone() * v;
        let h23 = mi * w;
        let h = vec![
            vec![r2, h12.clone(), h13.clone()],
            vec![h12.conj(), s2, h23.clone()],
            vec![h13.conj(), h23.conj(), t2],
        ];
        Self::new(h, eps)
    }

    /// `(r², s², t², u, v, w)` for `n = 3`.
    pub fn letters(&self) -> Option<[S; 6]> {
        if self.n() != 3 {
            return None;
        }
        let h = &self.h;
        let i = S::i();
        Some([
            h[0][0].clone(),
            h[1][1].clone(),
            h[2][2].clone(),
            i.clone() * h[0][1].clone(),
            i.clone() * h[0][2].clone(),
            i * h[1][2].clone(),
        ])
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.h
    }

    pub fn leading_minors(&self, eps: f64) -> Vec<S> {
        linalg::leading_minors(&self.h, eps)
    }

    pub fn fundamental_form(&self) -> InvariantForm<S> {
        let n = self.n();
        let half_i = S::i() * S::from_frac(1, 2);
        let mut out = InvariantForm::zero(n);
        for j in 0..n {
            for k in 0..n {
                out.add_term(
                    Monomial {
                        holo: 1 << j,
                        anti: 1 << k,
                    },
                    half_i.clone() * self.h[j][k].clone(),
                );
            }
        }
        out
    }

    pub fn convert<T: Scalar>(&self) -> HermitianMetric<T> {
        HermitianMetric {
            h: self
                .h
                .iter()
                .map(|r| r.iter().map(crate::scalar::convert).collect())
                .collect(),
        }
    }
}

/// `f^k`, with `f⁰` the unit.
pub fn form_power<S: Scalar>(f: &InvariantForm<S>, k: usize) -> InvariantForm<S> {
    f.power(k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub holds: bool,
    pub evidence: String,
}

impl Flag {
    fn from_form<S: Scalar>(label: &str, f: &InvariantForm<S>, eps: f64) -> Self {
        let holds = f.is_negligible(eps);
        let evidence = if holds {
            format!("{label} = 0")
        } else {
            format!("{label} = {}", truncate(&f.to_string()))
        };
        Flag { holds, evidence }
    }
}

fn truncate(s: &str) -> String {
    const MAX: usize = 400;
    if s.chars().count() <= MAX {
        s.to_string()
    } else {
        let cut: String = s.chars().take(MAX).collect();
        format!("{cut} …")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub structure: String,
    pub backend: String,
    pub kahler: Flag,
    pub skt: Flag,
    pub astheno_kahler: Flag,
    pub balanced: Flag,
    pub gauduchon: Flag,
    pub strongly_gauduchon: Flag,
    pub notes: Vec<String>,
}

impl MetricReport {
    pub fn flags(&self) -> [(&'static str, &Flag); 6] {
        [
            ("kahler", &self.kahler),
            ("skt", &self.skt),
            ("astheno_kahler", &self.astheno_kahler),
            ("balanced", &self.balanced),
            ("gauduchon", &self.gauduchon),
            ("strongly_gauduchon", &self.strongly_gauduchon),
        ]
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "metric classification on {} ({} backend)", self.structure, self.backend)?;
        for (name, flag) in self.flags() {
            writeln!(f, "  {name:<19} {:<5}  {}", flag.holds, flag.evidence)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

pub const LETTER_NOTE: &str = "letters for n = 3: r² = H₁₁, s² = H₂₂, t² = H₃₃, u = i·H₁₂, v = i·H₁₃, w = i·H₂₃";

pub fn classify<S: Scalar>(pres: &StructurePresentation<S>, m: &HermitianMetric<S>, eps: f64) -> Result<MetricReport> {
    let n = pres.n();
    if m.n() != n {
        return Err(Error::RankMismatch(n, m.n()));
    }
    let omega = m.fundamental_form();
    let d_omega = pres.differential(&omega)?;
    let ddbar_omega = pres.ddbar(&omega, eps)?;
    let astheno_power = omega.power(n.saturating_sub(2));
    let ddbar_astheno = pres.ddbar(&astheno_power, eps)?;
    let top_minus_one = omega.power(n - 1);
    let (del_w, delbar_w) = pres.split_d(&top_minus_one, eps)?;
    let d_w = del_w.clone() + delbar_w;
    let ddbar_w = pres.ddbar(&top_minus_one, eps)?;
    let strongly = strongly_gauduchon(pres, &del_w, eps)?;

    let mut notes = vec![LETTER_NOTE.to_string()];
    if S::BACKEND == crate::scalar::Backend::Float {
        notes.push(format!("float backend: every flag is decided up to ε = {eps:e}; Gauduchon-type flags are tolerance-dependent"));
    }
    Ok(MetricReport {
        structure: pres.name.clone(),
        backend: S::BACKEND.to_string(),
        kahler: Flag::from_form("dω", &d_omega, eps),
        skt: Flag::from_form("∂∂̄ω", &ddbar_omega, eps),
        astheno_kahler: Flag::from_form(&format!("∂∂̄ω^{}", n.saturating_sub(2)), &ddbar_astheno, eps),
        balanced: Flag::from_form(&format!("dω^{}", n - 1), &d_w, eps),
        gauduchon: Flag::from_form(&format!("∂∂̄ω^{}", n - 1), &ddbar_w, eps),
        strongly_gauduchon: strongly,
        notes,
    })
}

/// Decides `∂ω^{n−1} ∈ ∂̄(Λ^{n,n−2})` by a linear solve over the invariant basis.
fn strongly_gauduchon<S: Scalar>(pres: &StructurePresentation<S>, del_w: &InvariantForm<S>, eps: f64) -> Result<Flag> {
    let n = pres.n();
    if del_w.is_negligible(eps) {
        return Ok(Flag {
            holds: true,
            evidence: "∂ω^{n−1} = 0".into(),
        });
    }
    if n < 2 {
        return Ok(Flag {
            holds: false,
            evidence: "Λ^{n,n−2} is zero".into(),
        });
    }
    let unknowns = Monomial::of_bidegree(n, n, n - 2);
    let target = Monomial::of_bidegree(n, n, n - 1);
    let index: std::collections::HashMap<Monomial, usize> = target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut a = linalg::zeros(target.len(), unknowns.len());
    for (col, m) in unknowns.iter().enumerate() {
        let img = pres.delbar(&InvariantForm::from_monomial(n, *m, S::one()), eps)?;
        for (mm, c) in img.terms() {
            a[index[mm]][col] = c.clone();
        }
    }
    let mut b = vec![S::zero(); target.len()];
    for (mm, c) in del_w.terms() {
        b[index[mm]] = c.clone();
    }
    Ok(match linalg::solve(&a, &b, unknowns.len(), eps) {
        Some(sol) => {
            let mut gamma = InvariantForm::zero(n);
            for (m, c) in unknowns.iter().zip(sol.particular) {
                gamma.add_term(*m, c);
            }
            Flag {
                holds: true,
                evidence: format!("∂ω^{{n−1}} = ∂̄Γ with Γ = {}", truncate(&gamma.to_string())),
            }
        }
        None => Flag {
            holds: false,
            evidence: "∂ω^{n−1} is not ∂̄ of an invariant (n,n−2)-form".into(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PluriclosedVerdict {
    pub pluriclosed: bool,
    pub ddbar_closed: Flag,
    pub transversality: TransversalityVerdict,
}

/// `f` is p-pluriclosed when `∂∂̄f = 0` and `f` is transverse. The verdict
/// holds only with a certified transversality.
pub fn is_p_pluriclosed<S: Scalar>(
    pres: &StructurePresentation<S>,
    f: &InvariantForm<S>,
    p: usize,
    cfg: &SamplingConfig,
) -> Result<PluriclosedVerdict> {
    if !f.is_real(cfg.eps) {
        return Err(Error::NotReal);
    }
    if let Some((m, _)) = f.terms().find(|(m, _)| m.bidegree() != (p, p)) {
        return Err(Error::Degree(format!("term {m} is not of bidegree ({p},{p})")));
    }
    let ddbar = pres.ddbar(f, cfg.eps)?;
    let flag = Flag::from_form("∂∂̄f", &ddbar, cfg.eps);
    let verdict = positivity::transversality(f, p, cfg)?;
    Ok(PluriclosedVerdict {
        pluriclosed: flag.holds && verdict.is_certified(),
        ddbar_closed: flag,
        transversality: verdict,
    })
}
