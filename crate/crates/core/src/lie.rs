//! Lie algebras presented by structure equations `dφ¹..dφⁿ`, and the induced
//! operators `d`, `∂`, `∂̄` on invariant forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{merge_sign, Gen, InvariantForm, Monomial};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct StructurePresentation<S: Scalar> {
    pub name: String,
    n: usize,
    dphi: Vec<InvariantForm<S>>,
    dphibar: Vec<InvariantForm<S>>,
}

impl<S: Scalar> StructurePresentation<S> {
    /// `dphi[i]` is `dφ^{i+1}`. Each value must be a 2-form of rank `n`.
    pub fn new(name: impl Into<String>, dphi: Vec<InvariantForm<S>>) -> Result<Self> {
        let n = dphi.len();
        if n == 0 {
            return Err(Error::Invalid("empty presentation".into()));
        }
        for (i, f) in dphi.iter().enumerate() {
            if f.rank() != n {
                return Err(Error::RankMismatch(n, f.rank()));
            }
            if let Some((m, _)) = f.terms().find(|(m, _)| m.degree() != 2) {
                return Err(Error::Degree(format!("dφ^{} has a term {m} of degree {}", i + 1, m.degree())));
            }
        }
        let dphibar = dphi.iter().map(InvariantForm::conjugate).collect();
        Ok(StructurePresentation {
            name: name.into(),
            n,
            dphi,
            dphibar,
        })
    }

    pub fn torus(n: usize) -> Self {
        Self::new(format!("torus-{n}"), vec![InvariantForm::zero(n); n]).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dphi(&self) -> &[InvariantForm<S>] {
        &self.dphi
    }

    pub fn d_generator(&self, g: Gen) -> &InvariantForm<S> {
        match g {
            Gen::Holo(i) => &self.dphi[i - 1],
            Gen::Anti(i) => &self.dphibar[i - 1],
        }
    }

    /// `d` of a single monomial by the graded Leibniz rule over its canonical
    /// generators.
    pub fn d_monomial(&self, m: Monomial) -> InvariantForm<S> {
        let mut out = InvariantForm::zero(self.n);
        let bits = m.bits();
        let mut prefix = 0u32;
        for (k, g) in m.generators().into_iter().enumerate() {
            let gb = g.bit();
            let suffix = bits & !prefix & !gb;
            let parity: i8 = if k % 2 == 0 { 1 } else { -1 };
            for (t, c) in self.d_generator(g).terms() {
                let tb = t.bits();
                if tb & (prefix | suffix) != 0 {
                    continue;
                }
                let s = parity * merge_sign(prefix, tb) * merge_sign(prefix | tb, suffix);
                let coeff = if s > 0 { c.clone() } else { -c.clone() };
                out.add_term(Monomial::from_bits(prefix | tb | suffix), coeff);
            }
            prefix |= gb;
        }
        out
    }

    pub fn differential(&self, f: &InvariantForm<S>) -> Result<InvariantForm<S>> {
        self.check_rank(f)?;
        let mut out = InvariantForm::zero(self.n);
        for (m, c) in f.terms() {
            for (mm, cc) in self.d_monomial(*m).terms() {
                out.add_term(*mm, cc.clone() * c.clone());
            }
        }
        Ok(out)
    }

    fn check_rank(&self, f: &InvariantForm<S>) -> Result<()> {
        if f.rank() == self.n {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.n, f.rank()))
        }
    }

    /// No `(0,2)` component in any `dφⁱ` (up to `eps`).
    pub fn is_integrable(&self, eps: f64) -> bool {
        self.dphi
            .iter()
            .all(|f| f.bidegree_project(0, 2).is_negligible(eps))
    }

    /// Every `dφⁱ` is purely of type `(2,0)`.
    pub fn is_complex_parallelizable(&self, eps: f64) -> bool {
        self.dphi
            .iter()
            .all(|f| (f.clone() - f.bidegree_project(2, 0)).is_negligible(eps))
    }

    /// Splits `d f` into its `∂` and `∂̄` parts.
    pub fn split_d(&self, f: &InvariantForm<S>, eps: f64) -> Result<(InvariantForm<S>, InvariantForm<S>)> {
        self.check_rank(f)?;
        if !self.is_integrable(eps) {
            return Err(Error::NotIntegrable(self.name.clone()));
        }
        let mut del = InvariantForm::zero(self.n);
        let mut delbar = InvariantForm::zero(self.n);
        for (m, c) in f.terms() {
            let (p, q) = m.bidegree();
            for (mm, cc) in self.d_monomial(*m).terms() {
                let v = cc.clone() * c.clone();
                match mm.bidegree() {
                    b if b == (p + 1, q) => del.add_term(*mm, v),
                    b if b == (p, q + 1) => delbar.add_term(*mm, v),
                    // only float noise from a negligible (0,2) part lands here
                    _ => {}
                }
            }
        }
        Ok((del, delbar))
    }

    pub fn del(&self, f: &InvariantForm<S>, eps: f64) -> Result<InvariantForm<S>> {
        Ok(self.split_d(f, eps)?.0)
    }

    pub fn delbar(&self, f: &InvariantForm<S>, eps: f64) -> Result<InvariantForm<S>> {
        Ok(self.split_d(f, eps)?.1)
    }

    /// `∂∂̄ f`.
    pub fn ddbar(&self, f: &InvariantForm<S>, eps: f64) -> Result<InvariantForm<S>> {
        let db = self.delbar(f, eps)?;
        self.del(&db, eps)
    }

    pub fn validate(&self, eps: f64) -> ValidationReport<S> {
        let mut residuals = Vec::with_capacity(self.n);
        let mut max_residual = 0.0f64;
        let mut passed = true;
        for (i, f) in self.dphi.iter().enumerate() {
            let r = self.differential(f).expect("rank");
            max_residual = max_residual.max(r.max_abs());
            if !r.is_negligible(eps) {
                passed = false;
            }
            residuals.push((i + 1, r));
        }
        let integrable = self.is_integrable(eps);
        let mut warnings = Vec::new();
        if !integrable {
            warnings.push("some dφⁱ has a (0,2) component; ∂ and ∂̄ are unavailable".to_string());
        }
        for (i, f) in self.dphi.iter().enumerate() {
            let used = f.terms().map(|(m, _)| m.max_index()).max().unwrap_or(0);
            if used > i {
                warnings.push(format!(
                    "dφ^{} involves index {used}: the given coframe order is not lower-triangular",
                    i + 1
                ));
            }
        }
        ValidationReport {
            name: self.name.clone(),
            residuals,
            max_residual,
            passed,
            integrable,
            warnings,
            exhaustive: None,
        }
    }

    /// [`validate`](Self::validate) plus `d²m = 0` on every monomial.
    pub fn validate_exhaustive(&self, eps: f64) -> ValidationReport<S> {
        let mut report = self.validate(eps);
        let mut checked = 0;
        let mut failures = 0;
        for p in 0..=self.n {
            for q in 0..=self.n {
                for m in Monomial::of_bidegree(self.n, p, q) {
                    checked += 1;
                    let dd = self.differential(&self.d_monomial(m)).expect("rank");
                    if !dd.is_negligible(eps) {
                        failures += 1;
                    }
                }
            }
        }
        if failures > 0 {
            report.passed = false;
        }
        report.exhaustive = Some(ExhaustiveCheck { checked, failures });
        report
    }

    /// Each `dφⁱ` involves only `φ¹..φ^{i−1}` and their conjugates.
    pub fn is_j_nilpotent(&self) -> bool {
        self.dphi
            .iter()
            .enumerate()
            .all(|(i, f)| f.terms().all(|(m, _)| m.max_index() <= i))
    }

    /// Searches coframe reorderings (`n ≤ 6`) for a lower-triangular one.
    /// Returns `perm` with `perm[i-1]` the new position of `φⁱ`.
    pub fn find_j_nilpotent_order(&self) -> Option<Vec<usize>> {
        if self.n > 6 {
            return None;
        }
        let mut perm: Vec<usize> = (1..=self.n).collect();
        let mut found = None;
        permute(&mut perm, 0, &mut |p| {
            if self.relabel(p).is_j_nilpotent() {
                found = Some(p.to_vec());
                true
            } else {
                false
            }
        });
        found
    }

    /// The same algebra in the coframe with `φⁱ` renamed `φ^{perm[i-1]}`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut dphi = vec![InvariantForm::zero(self.n); self.n];
        for (i, f) in self.dphi.iter().enumerate() {
            dphi[perm[i] - 1] = f.relabel(perm);
        }
        Self::new(self.name.clone(), dphi).expect("relabel keeps shape")
    }

    pub fn convert<T: Scalar>(&self) -> StructurePresentation<T> {
        StructurePresentation::new(self.name.clone(), self.dphi.iter().map(|f| f.convert()).collect())
            .expect("same shape")
    }
}

/// Visits permutations of `v[k..]`; stops when `visit` returns true.
fn permute(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return visit(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permute(v, k + 1, visit) {
            return true;
        }
        v.swap(k, i);
    }
    false
}

impl<S: Scalar> fmt::Display for StructurePresentation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (n = {}, {} backend)", self.name, self.n, S::BACKEND)?;
        for (i, d) in self.dphi.iter().enumerate() {
            writeln!(f, "  dφ^{} = {}", i + 1, d)?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for StructurePresentation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveCheck {
    pub checked: usize,
    pub failures: usize,
}

#[derive(Clone, Debug)]
pub struct ValidationReport<S: Scalar> {
    pub name: String,
    /// `(i, d²φⁱ)` for every generator.
    pub residuals: Vec<(usize, InvariantForm<S>)>,
    pub max_residual: f64,
    pub passed: bool,
    pub integrable: bool,
    pub warnings: Vec<String>,
    pub exhaustive: Option<ExhaustiveCheck>,
}

impl<S: Scalar> ValidationReport<S> {
    pub const LEIBNIZ_NOTE: &'static str = "d² vanishes on all invariant forms once it vanishes on \
        each φⁱ: d² is a derivation of even degree, and d²φ̄ⁱ is the conjugate of d²φⁱ";
}

impl<S: Scalar> fmt::Display for ValidationReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validate {}: {}", self.name, if self.passed { "PASS" } else { "FAIL" })?;
        for (i, r) in &self.residuals {
            writeln!(f, "  d²φ^{i} = {r}")?;
        }
        writeln!(f, "  max residual: {:e}", self.max_residual)?;
        writeln!(f, "  integrable: {}", self.integrable)?;
        if let Some(ex) = &self.exhaustive {
            writeln!(f, "  exhaustive: {} monomials, {} failures", ex.checked, ex.failures)?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        writeln!(f, "  note: {}", Self::LEIBNIZ_NOTE)
    }
}

/// A real Lie algebra given by `de¹..de^{2n}` (as forms of rank `2n` in the
/// holomorphic slots only) and a pairing `φʲ = e^a + i e^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPresentation<S: Scalar> {
    pub name: String,
    pub de: Vec<InvariantForm<S>>,
    pub pairing: Vec<(usize, usize)>,
}

pub fn complexify_real_presentation<S: Scalar>(real: &RealPresentation<S>) -> Result<StructurePresentation<S>> {
    let dim = real.de.len();
    if dim % 2 != 0 || real.pairing.len() * 2 != dim {
        return Err(Error::Invalid(format!(
            "{dim} real generators cannot be paired by {} pairs",
            real.pairing.len()
        )));
    }
    let n = dim / 2;
    let mut seen = vec![false; dim];
    for &(a, b) in &real.pairing {
        for x in [a, b] {
            if x == 0 || x > dim || seen[x - 1] {
                return Err(Error::Invalid(format!("pairing is not a perfect matching (index {x})")));
            }
            seen[x - 1] = true;
        }
    }
    for (k, f) in real.de.iter().enumerate() {
        if f.rank() != dim {
            return Err(Error::RankMismatch(dim, f.rank()));
        }
        if f.terms().any(|(m, c)| m.anti != 0 || m.degree() != 2 || !c.im().is_zero()) {
            return Err(Error::Invalid(format!("de^{} must be a real 2-form in e¹..e^{dim}", k + 1)));
        }
    }
    // image of each real generator in the complex coframe
    let half = S::from_frac(1, 2);
    let mut image: Vec<InvariantForm<S>> = vec![InvariantForm::zero(n); dim];
    for (j, &(a, b)) in real.pairing.iter().enumerate() {
        let phi = InvariantForm::holo(n, j + 1);
        let phib = InvariantForm::anti(n, j + 1);
        image[a - 1] = (phi.clone() + phib.clone()).scale(&half);
        // (φ − φ̄)/(2i) = −(i/2)(φ − φ̄)
        image[b - 1] = (phi - phib).scale(&(-(S::i() * half.clone())));
    }
    let substitute = |f: &InvariantForm<S>| -> InvariantForm<S> {
        let mut out = InvariantForm::zero(n);
        for (m, c) in f.terms() {
            let mut prod = InvariantForm::constant(n, c.clone());
            for i in m.holo_indices() {
                prod = prod.wedge(&image[i - 1]).expect("rank");
            }
            out = out + prod;
        }
        out
    };
    let dphi = real
        .pairing
        .iter()
        .map(|&(a, b)| substitute(&real.de[a - 1]) + substitute(&real.de[b - 1]).scale(&S::i()))
        .collect();
    StructurePresentation::new(real.name.clone(), dphi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, GaussRat};

    type F = InvariantForm<GaussRat>;

    fn eta_beta5() -> StructurePresentation<GaussRat> {
        let mut dphi = vec![F::zero(5); 5];
        dphi[4] = F::from_words(5, [("13", q(-1, 1)), ("24", q(-1, 1))]).unwrap();
        StructurePresentation::new("eta-beta-5", dphi).unwrap()
    }

    #[test]
    fn d_of_phi5_phibar5() {
        let p = eta_beta5();
        let f = F::word(5, "55b", q(1, 1)).unwrap();
        let expected = F::from_words(
            5,
            [("135b", q(-1, 1)), ("245b", q(-1, 1)), ("51b3b", q(1, 1)), ("52b4b", q(1, 1))],
        )
        .unwrap();
        assert_eq!(p.differential(&f).unwrap(), expected);
    }

    #[test]
    fn torus_is_closed() {
        let p = StructurePresentation::<GaussRat>::torus(3);
        let f = F::word(3, "12b3", q(5, 1)).unwrap();
        assert!(p.differential(&f).unwrap().is_zero());
        assert!(p.del(&f, 0.0).unwrap().is_zero());
    }

    #[test]
    fn validate_catches_broken_jacobi() {
        let mut dphi = eta_beta5().dphi().to_vec();
        dphi[2] = F::word(5, "12", q(1, 1)).unwrap();
        dphi[4] = dphi[4].clone() + F::word(5, "34", q(1, 1)).unwrap();
        let p = StructurePresentation::new("broken", dphi).unwrap();
        let r = p.validate(0.0);
        assert!(!r.passed);
        assert!(!r.residuals[4].1.is_zero());
        assert!(eta_beta5().validate_exhaustive(0.0).passed);
    }

    #[test]
    fn j_nilpotency_and_reordering() {
        assert!(eta_beta5().is_j_nilpotent());
        let mut dphi = vec![F::zero(4); 4];
        dphi[2] = F::word(4, "23", q(1, 1)).unwrap();
        dphi[3] = F::word(4, "24", q(1, 1)).unwrap();
        let p = StructurePresentation::new("iv-4", dphi).unwrap();
        assert!(!p.is_j_nilpotent());
        assert!(p.find_j_nilpotent_order().is_none());

        // reversed ηβ₅ is found again by the search
        let rev = eta_beta5().relabel(&[5, 4, 3, 2, 1]);
        assert!(!rev.is_j_nilpotent());
        let perm = rev.find_j_nilpotent_order().unwrap();
        assert!(rev.relabel(&perm).is_j_nilpotent());
    }

    #[test]
    fn complexify_first_generator() {
        let dim = 2;
        let de = vec![F::word(dim, "12", q(-1, 1)).unwrap(), F::zero(dim)];
        let real = RealPresentation {
            name: "aff".into(),
            de,
            pairing: vec![(1, 2)],
        };
        let p = complexify_real_presentation(&real).unwrap();
        let expected = F::word(1, "11b", GaussRat::from_ratios(0, 1, -1, 2)).unwrap();
        assert_eq!(p.dphi()[0], expected);
        assert!(p.validate(0.0).passed);

        let bad = RealPresentation {
            pairing: vec![(1, 1)],
            ..real
        };
        assert!(complexify_real_presentation(&bad).is_err());
    }
}
