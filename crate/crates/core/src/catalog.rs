//! Built-in presentations: Nakamura's complex solvable Lie algebras of
//! dimension 4 and 5, three parametrized nilpotent families, `ηβ₅`, and the
//! solvable group `S_{1,π/2}`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::exterior::{sigma, InvariantForm};
use crate::lie::{complexify_real_presentation, RealPresentation, StructurePresentation};
use crate::scalar::{q, CFloat, GaussRat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    Abelian,
    Nilpotent,
    Solvable,
}

impl AlgebraKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraKind::Abelian => "abelian",
            AlgebraKind::Nilpotent => "nilpotent",
            AlgebraKind::Solvable => "solvable",
        }
    }
}

/// A parameter slot. Parameters are exact Gaussian rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: GaussRat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub key: String,
    pub kind: AlgebraKind,
    pub params: Vec<ParamSpec>,
    /// Human-readable side condition, if any.
    pub constraint: Option<&'static str>,
    pub provenance: String,
    pub caveat: Option<&'static str>,
    /// Named parameter assignments (unnamed slots take their default).
    pub presets: Vec<(&'static str, Vec<(&'static str, GaussRat)>)>,
    pub float: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Built {
    Exact(StructurePresentation<GaussRat>),
    Float(StructurePresentation<CFloat>),
}

impl Built {
    pub fn name(&self) -> &str {
        match self {
            Built::Exact(p) => &p.name,
            Built::Float(p) => &p.name,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Built::Exact(p) => p.n(),
            Built::Float(p) => p.n(),
        }
    }
}

const NO_QUOTIENT: &str = "Nakamura: no compact holomorphically parallelizable quotient exists";
const UNKNOWN_QUOTIENT: &str = "Nakamura: existence of a compact holomorphically parallelizable quotient is open";

pub type Params = BTreeMap<String, GaussRat>;

fn f<S: Scalar>(n: usize, terms: &[(&str, S)]) -> InvariantForm<S> {
    InvariantForm::from_words(n, terms.iter().map(|(w, c)| (*w, c.clone()))).expect("catalog words are valid")
}

fn int<S: Scalar>(k: i64) -> S {
    S::from_int(k)
}

fn nonzero<S: Scalar>(x: &S, what: &str) -> Result<()> {
    if x.is_zero() {
        Err(Error::Constraint(format!("{what} must be nonzero")))
    } else {
        Ok(())
    }
}

/// Nakamura type IV, rows 1 to 7. Row 5 uses `alpha`.
pub fn nakamura_iv<S: Scalar>(k: usize, alpha: S) -> Result<StructurePresentation<S>> {
    let n = 4;
    let z = InvariantForm::<S>::zero(n);
    let one = S::one;
    let d: [InvariantForm<S>; 4] = match k {
        1 => [z.clone(), z.clone(), z.clone(), z],
        2 => [z.clone(), z.clone(), z, f(n, &[("23", -one())])],
        3 => [z.clone(), z, f(n, &[("12", -one())]), f(n, &[("13", int(-2))])],
        4 => [z.clone(), z, f(n, &[("23", one())]), f(n, &[("24", -one())])],
        5 => {
            nonzero(&(alpha.clone() * (one() + alpha.clone())), "α(1+α)")?;
            [
                z,
                f(n, &[("12", one())]),
                f(n, &[("13", alpha.clone())]),
                f(n, &[("14", -(one() + alpha))]),
            ]
        }
        6 => [z, f(n, &[("12", one())]), f(n, &[("13", -one())]), f(n, &[("23", -one())])],
        7 => [
            z,
            f(n, &[("12", one())]),
            f(n, &[("13", int(-2))]),
            f(n, &[("14", one()), ("12", -one())]),
        ],
        _ => return Err(Error::UnknownKey(format!("nakamura-iv-{k}"))),
    };
    StructurePresentation::new(format!("nakamura-iv-{k}"), d.to_vec())
}

/// Nakamura type V, rows 1 to 20. Row 13 uses `alpha`, row 17 `gamma` and
/// `beta`, row 20 `eta`.
pub fn nakamura_v<S: Scalar>(k: usize, alpha: S, gamma: S, beta: S, eta: S) -> Result<StructurePresentation<S>> {
    let n = 5;
    let z = InvariantForm::<S>::zero(n);
    let one = S::one;
    let m = |c: i64, w: &'static str| (w, int::<S>(c));
    let g = |terms: &[(&str, S)]| f(n, terms);
    let d: [InvariantForm<S>; 5] = match k {
        1 => [z.clone(), z.clone(), z.clone(), z.clone(), z],
        2 => [z.clone(), z.clone(), z.clone(), z, g(&[m(-1, "34")])],
        3 => [z.clone(), z.clone(), z.clone(), z, g(&[m(-1, "13"), m(-1, "24")])],
        4 => [z.clone(), z.clone(), z, g(&[m(-1, "12")]), g(&[m(-1, "13")])],
        5 => [z.clone(), z.clone(), z, g(&[m(-1, "23")]), g(&[m(-2, "24")])],
        6 => [z.clone(), z.clone(), z, g(&[m(-1, "12")]), g(&[m(-2, "14"), m(-1, "23")])],
        7 => [z.clone(), z.clone(), z, g(&[m(1, "34")]), g(&[m(-1, "35")])],
        8 => [z.clone(), z, g(&[m(-1, "12")]), g(&[m(-2, "13")]), g(&[m(-2, "23")])],
        9 => [z.clone(), z, g(&[m(-1, "12")]), g(&[m(-2, "13")]), g(&[m(-3, "14")])],
        10 => [
            z.clone(),
            z,
            g(&[m(-1, "12")]),
            g(&[m(-2, "13")]),
            g(&[m(-3, "14"), m(-1, "23")]),
        ],
        11 => [z.clone(), z, g(&[m(-1, "12")]), g(&[m(1, "14")]), g(&[m(1, "15")])],
        12 => [z.clone(), z, g(&[m(1, "13")]), g(&[m(1, "24")]), g(&[m(-1, "15"), m(-1, "25")])],
        13 => {
            nonzero(&(alpha.clone() * (one() + alpha.clone())), "α(1+α)")?;
            [
                z.clone(),
                z,
                g(&[m(1, "23")]),
                g(&[("24", alpha.clone())]),
                g(&[("25", -(one() + alpha))]),
            ]
        }
        14 => [z.clone(), z, g(&[m(1, "13")]), g(&[m(-2, "14")]), g(&[m(1, "15"), m(-1, "13")])],
        15 => [z.clone(), z, g(&[m(1, "23")]), g(&[m(-1, "24")]), g(&[m(-1, "34")])],
        16 => [z.clone(), z, g(&[m(1, "13")]), g(&[m(-1, "14")]), g(&[m(-1, "34"), m(-1, "12")])],
        17 => {
            let s = one() + gamma.clone() + beta.clone();
            nonzero(&(gamma.clone() * beta.clone() * s.clone()), "γβ(1+γ+β)")?;
            [
                z,
                g(&[m(1, "12")]),
                g(&[("13", gamma)]),
                g(&[("14", beta)]),
                g(&[("15", -s)]),
            ]
        }
        18 => [
            z,
            g(&[m(-3, "12")]),
            g(&[m(1, "13")]),
            g(&[m(1, "14"), m(-1, "13")]),
            g(&[m(1, "15"), m(-1, "13")]),
        ],
        19 => [
            z,
            g(&[m(1, "12")]),
            g(&[m(-1, "13")]),
            g(&[m(1, "14"), m(-1, "12")]),
            g(&[m(-1, "15"), m(-1, "13")]),
        ],
        20 => {
            nonzero(&(eta.clone() * (int::<S>(2) + eta.clone())), "η(2+η)")?;
            [
                z,
                g(&[m(1, "12")]),
                g(&[m(1, "13"), m(-1, "12")]),
                g(&[("14", eta.clone())]),
                g(&[("15", -(int::<S>(2) + eta))]),
            ]
        }
        _ => return Err(Error::UnknownKey(format!("nakamura-v-{k}"))),
    };
    StructurePresentation::new(format!("nakamura-v-{k}"), d.to_vec())
}

/// `dα³ = A α^{1̄2} + B α^{2̄2} + C α^{11̄} + D α^{12̄} + E α^{12}`.
pub fn fps6<S: Scalar>(a: S, b: S, c: S, d: S, e: S) -> StructurePresentation<S> {
    let n = 3;
    let d3 = f(n, &[("1b2", a), ("2b2", b), ("11b", c), ("12b", d), ("12", e)]);
    StructurePresentation::new("fps6", vec![InvariantForm::zero(n), InvariantForm::zero(n), d3]).expect("rank 3")
}

/// Generators of `dη⁴` paired with `a₁..a₁₂`.
pub const FT8_WORDS: [&str; 12] = ["12", "13", "11b", "12b", "13b", "23", "21b", "22b", "23b", "31b", "32b", "33b"];

pub fn ft8<S: Scalar>(a: &[S; 12]) -> StructurePresentation<S> {
    let n = 4;
    let terms: Vec<(&str, S)> = FT8_WORDS.iter().copied().zip(a.iter().cloned()).collect();
    let mut d = vec![InvariantForm::zero(n); n];
    d[3] = f(n, &terms);
    StructurePresentation::new("ft8", d).expect("rank 4")
}

/// Slot names of the 10-dimensional family, in the order of [`ST10_WORDS`].
pub const ST10_NAMES: [&str; 22] = [
    "a1", "a2", "a3", "a4", "a5", "a6", "a7", "b1", "b2", "b3", "b4", "b5", "b6", "c1", "c2", "c3", "c4", "c5", "d1",
    "d2", "d3", "d4",
];

pub const ST10_WORDS: [&str; 22] = [
    "12", "13", "14", "11b", "12b", "13b", "14b", "23", "24", "21b", "22b", "23b", "24b", "34", "31b", "32b", "33b",
    "34b", "41b", "42b", "43b", "44b",
];

/// Coefficients of `dσ⁵`, indexed like [`ST10_NAMES`].
pub fn st10<S: Scalar>(coeffs: &[S; 22]) -> StructurePresentation<S> {
    let n = 5;
    let terms: Vec<(&str, S)> = ST10_WORDS.iter().copied().zip(coeffs.iter().cloned()).collect();
    let mut d = vec![InvariantForm::zero(n); n];
    d[4] = f(n, &terms);
    StructurePresentation::new("st10", d).expect("rank 5")
}

pub fn eta_beta5<S: Scalar>() -> StructurePresentation<S> {
    let mut d = vec![InvariantForm::zero(5); 5];
    d[4] = f(5, &[("13", -S::one()), ("24", -S::one())]);
    StructurePresentation::new("eta-beta-5", d).expect("rank 5")
}

/// `σ₃(Σ_{i<j<k} φ^{ijk}∧φ̄^{ijk} − φ^{135}∧φ̄^{245} − φ^{245}∧φ̄^{135})`.
pub fn eta_beta5_three_kahler_form<S: Scalar>() -> InvariantForm<S> {
    let mut out = InvariantForm::zero(5);
    for i in 1..=5 {
        for j in i + 1..=5 {
            for k in j + 1..=5 {
                let w = format!("{i}{j}{k}{i}b{j}b{k}b");
                out = out + InvariantForm::word(5, &w, S::one()).expect("valid");
            }
        }
    }
    out = out - f(5, &[("1352b4b5b", S::one()), ("2451b3b5b", S::one())]);
    out.scale(&sigma::<S>(3))
}

/// Real structure equations of `S_{1,π/2}` over `e¹..e⁶`.
pub fn s1_pi2_real() -> RealPresentation<CFloat> {
    let n = 6;
    let r = |x: f64| CFloat::new(x, 0.0);
    let de = vec![
        f(n, &[("12", r(-1.0))]),
        InvariantForm::zero(n),
        f(n, &[("23", r(-0.5))]),
        f(n, &[("24", r(-0.5))]),
        f(n, &[("26", r(FRAC_PI_2))]),
        f(n, &[("25", r(-FRAC_PI_2))]),
    ];
    RealPresentation {
        name: "s1-pi2".into(),
        de,
        pairing: vec![(1, 2), (3, 4), (5, 6)],
    }
}

/// `S_{1,π/2}` in the coframe `φ¹ = e¹ + ie²`, `φ² = e³ + ie⁴`, `φ³ = e⁵ + ie⁶`.
pub fn s1_pi2() -> StructurePresentation<CFloat> {
    complexify_real_presentation(&s1_pi2_real()).expect("valid pairing")
}

fn p(name: &'static str, default: GaussRat) -> ParamSpec {
    ParamSpec { name, default }
}

fn zeros(names: &[&'static str]) -> Vec<ParamSpec> {
    names.iter().map(|n| p(n, GaussRat::zero())).collect()
}

const FPS_NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];
const FT8_NAMES: [&str; 12] = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "a11", "a12"];

fn nakamura_entry(ty: &str, k: usize) -> CatalogEntry {
    let iv = ty == "iv";
    let kind = match (iv, k) {
        (_, 1) => AlgebraKind::Abelian,
        (true, 2 | 3) => AlgebraKind::Nilpotent,
        (false, 2..=6 | 8..=10) => AlgebraKind::Nilpotent,
        _ => AlgebraKind::Solvable,
    };
    let (params, constraint) = match (iv, k) {
        (true, 5) | (false, 13) => (vec![p("alpha", q(1, 1))], Some("α(1+α) ≠ 0")),
        (false, 17) => (vec![p("gamma", q(1, 1)), p("beta", q(1, 1))], Some("γβ(1+γ+β) ≠ 0")),
        (false, 20) => (vec![p("eta", q(1, 1))], Some("η(2+η) ≠ 0")),
        _ => (vec![], None),
    };
    let caveat = match (iv, k) {
        (true, 7) | (false, 15 | 18) => Some(NO_QUOTIENT),
        (true, 5) | (false, 11 | 13 | 16 | 19 | 20) => Some(UNKNOWN_QUOTIENT),
        _ => None,
    };
    let label = if iv { "IV" } else { "V" };
    CatalogEntry {
        key: format!("nakamura-{ty}-{k}"),
        kind,
        params,
        constraint,
        provenance: format!("Nakamura classification of complex solvable Lie algebras, type {label}, row {k}"),
        caveat,
        presets: vec![],
        float: false,
    }
}

/// Every catalog entry, in listing order.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = (1..=7).map(|k| nakamura_entry("iv", k)).collect();
    out.extend((1..=20).map(|k| nakamura_entry("v", k)));
    out.push(CatalogEntry {
        key: "fps6".into(),
        kind: AlgebraKind::Nilpotent,
        params: zeros(&FPS_NAMES),
        constraint: None,
        provenance: "6-dimensional nilmanifolds with invariant complex structure, SKT normal form"
            .into(),
        caveat: None,
        presets: vec![(
            "witness",
            vec![("B", GaussRat::from_ratios(0, 1, -2, 1)), ("C", GaussRat::from_ratios(0, 1, 1, 1)), ("E", GaussRat::from_ratios(0, 1, 2, 1))],
        )],
        float: false,
    });
    out.push(CatalogEntry {
        key: "ft8".into(),
        kind: AlgebraKind::Nilpotent,
        params: zeros(&FT8_NAMES),
        constraint: None,
        provenance: "8-dimensional 2-step nilpotent family, one non-closed generator η⁴".into(),
        caveat: None,
        presets: vec![
            ("witness", vec![("a2", GaussRat::from_ratios(1, 1, -1, 1)), ("a3", q(1, 1)), ("a12", q(1, 1))]),
            ("astheno-not-skt", vec![("a4", GaussRat::from_ratios(1, 1, 1, 1)), ("a3", q(1, 1)), ("a12", q(1, 1))]),
        ],
        float: false,
    });
    out.push(CatalogEntry {
        key: "st10".into(),
        kind: AlgebraKind::Nilpotent,
        params: zeros(&ST10_NAMES),
        constraint: None,
        provenance: "10-dimensional 2-step nilpotent family, one non-closed generator σ⁵".into(),
        caveat: None,
        presets: vec![(
            "witness",
            vec![
                ("c4", GaussRat::from_ratios(0, 1, 1, 1)),
                ("b4", q(1, 1)),
                ("a4", q(1, 1)),
                ("a1", GaussRat::from_ratios(1, 1, 1, 1)),
            ],
        )],
        float: false,
    });
    out.push(CatalogEntry {
        key: "eta-beta-5".into(),
        kind: AlgebraKind::Nilpotent,
        params: vec![],
        constraint: None,
        provenance: "ηβ₅, holomorphically parallelizable nilmanifold of Nakamura type V, row 3".into(),
        caveat: None,
        presets: vec![],
        float: false,
    });
    out.push(CatalogEntry {
        key: "s1-pi2".into(),
        kind: AlgebraKind::Solvable,
        params: vec![],
        constraint: None,
        provenance: "S_{1,π/2} = ℝ ⋉ (ℝ × ℝ² × ℝ²), complex structure φ¹ = e¹+ie², φ² = e³+ie⁴, φ³ = e⁵+ie⁶".into(),
        caveat: None,
        presets: vec![],
        float: true,
    });
    out
}

pub fn entry(key: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.key == key)
        .ok_or_else(|| Error::UnknownKey(key.to_string()))
}

impl CatalogEntry {
    /// Defaults overlaid with `params`; unknown names are rejected.
    pub fn resolve(&self, params: &Params) -> Result<Vec<GaussRat>> {
        for name in params.keys() {
            if !self.params.iter().any(|s| s.name == name) {
                return Err(Error::Invalid(format!("{} has no parameter {name}", self.key)));
            }
        }
        Ok(self
            .params
            .iter()
            .map(|s| params.get(s.name).cloned().unwrap_or_else(|| s.default.clone()))
            .collect())
    }

    pub fn preset(&self, name: &str) -> Result<Params> {
        let (_, vals) = self
            .presets
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownKey(format!("{}:{name}", self.key)))?;
        Ok(vals.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
    }

    pub fn build(&self, params: &Params) -> Result<Built> {
        let v = self.resolve(params)?;
        let one = || q(1, 1);
        let key = self.key.as_str();
        if let Some(k) = key.strip_prefix("nakamura-iv-") {
            let k: usize = k.parse().map_err(|_| Error::UnknownKey(key.into()))?;
            let alpha = v.first().cloned().unwrap_or_else(one);
            return nakamura_iv(k, alpha).map(Built::Exact);
        }
        if let Some(k) = key.strip_prefix("nakamura-v-") {
            let k: usize = k.parse().map_err(|_| Error::UnknownKey(key.into()))?;
            let (mut alpha, mut gamma, mut beta, mut eta) = (one(), one(), one(), one());
            match k {
                13 => alpha = v[0].clone(),
                17 => {
                    gamma = v[0].clone();
                    beta = v[1].clone();
                }
                20 => eta = v[0].clone(),
                _ => {}
            }
            return nakamura_v(k, alpha, gamma, beta, eta).map(Built::Exact);
        }
        Ok(match key {
            "fps6" => Built::Exact(fps6(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone())),
            "ft8" => Built::Exact(ft8(&v.try_into().expect("12 slots"))),
            "st10" => Built::Exact(st10(&v.try_into().expect("22 slots"))),
            "eta-beta-5" => Built::Exact(eta_beta5()),
            "s1-pi2" => Built::Float(s1_pi2()),
            _ => return Err(Error::UnknownKey(key.into())),
        })
    }

    pub fn build_default(&self) -> Result<Built> {
        self.build(&Params::new())
    }
}

/// Builds `key` with `params`, or with a named preset given as `key:preset`.
pub fn build(key: &str, params: &Params) -> Result<Built> {
    match key.split_once(':') {
        Some((k, preset)) => {
            let e = entry(k)?;
            let mut all = e.preset(preset)?;
            all.extend(params.iter().map(|(a, b)| (a.clone(), b.clone())));
            e.build(&all)
        }
        None => entry(key)?.build(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_unique_and_complete() {
        let es = entries();
        assert_eq!(es.len(), 7 + 20 + 5);
        let mut keys: Vec<_> = es.iter().map(|e| e.key.clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), es.len());
    }

    #[test]
    fn iv_3_row() {
        let p = nakamura_iv(3, q(1, 1)).unwrap();
        assert_eq!(p.dphi()[2], InvariantForm::word(4, "12", q(-1, 1)).unwrap());
        assert_eq!(p.dphi()[3], InvariantForm::word(4, "13", q(-2, 1)).unwrap());
    }

    #[test]
    fn constraints_are_enforced() {
        assert!(matches!(nakamura_iv(5, q(-1, 1)), Err(Error::Constraint(_))));
        assert!(matches!(nakamura_iv(5, q(0, 1)), Err(Error::Constraint(_))));
        let one = || q(1, 1);
        assert!(nakamura_v(17, one(), one(), one(), one()).is_ok());
        assert!(nakamura_v(17, one(), q(-2, 1), one(), one()).is_err());
        assert!(nakamura_v(20, one(), one(), one(), q(-2, 1)).is_err());
        assert!(nakamura_v(13, q(-1, 1), one(), one(), one()).is_err());
        let mut params = Params::new();
        params.insert("alpha".into(), q(-1, 1));
        assert!(entry("nakamura-iv-5").unwrap().build(&params).is_err());
        params.insert("bogus".into(), q(1, 1));
        assert!(entry("nakamura-iv-5").unwrap().build(&params).is_err());
    }

    #[test]
    fn v_3_is_eta_beta5() {
        let one = || q(1, 1);
        let v3 = nakamura_v(3, one(), one(), one(), one()).unwrap();
        assert_eq!(v3.dphi(), eta_beta5::<GaussRat>().dphi());
    }

    #[test]
    fn three_kahler_form_shape() {
        let om = eta_beta5_three_kahler_form::<GaussRat>();
        assert_eq!(om.len(), 12);
        assert_eq!(om.bidegree(), Some((3, 3)));
        assert!(om.is_real(0.0));
    }

    #[test]
    fn s1_first_generator() {
        let p = s1_pi2();
        let expected = InvariantForm::word(3, "11b", CFloat::new(0.0, -0.5)).unwrap();
        assert!(p.dphi()[0].distance(&expected) < 1e-14);
    }

    #[test]
    fn presets_build() {
        for key in ["fps6:witness", "ft8:witness", "ft8:astheno-not-skt", "st10:witness"] {
            let b = build(key, &Params::new()).unwrap();
            assert!(matches!(b, Built::Exact(_)));
        }
        assert!(build("fps6:nope", &Params::new()).is_err());
        assert!(build("nope", &Params::new()).is_err());
    }
}
