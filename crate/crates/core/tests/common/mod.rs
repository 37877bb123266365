//! Strategies and property bodies shared by `properties.rs` and the
//! acceptance run.

#![allow(dead_code)]

use geowb::catalog::{self, Built, Params};
use geowb::existence::bott_chern_dimensions;
use geowb::positivity::{pairing, SimpleForm};
use geowb::{GaussRat, InvariantForm, Monomial, Scalar, StructurePresentation};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 1000;

pub fn gauss() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3).prop_map(|(a, b, c, d)| GaussRat::from_ratios(a, b, c, d))
}

pub fn form(n: usize, max_terms: usize) -> impl Strategy<Value = InvariantForm<GaussRat>> {
    let full = 1u32 << n;
    prop::collection::vec((0..full, 0..full, gauss()), 0..=max_terms).prop_map(move |terms| {
        let mut f = InvariantForm::zero(n);
        for (h, a, c) in terms {
            f.add_term(Monomial::from_bits(h | a << 16), c);
        }
        f
    })
}

/// Part of `f` in total degree `k`.
pub fn homogeneous(f: &InvariantForm<GaussRat>, k: usize) -> InvariantForm<GaussRat> {
    f.components()
        .into_iter()
        .filter(|((p, q), _)| p + q == k)
        .fold(InvariantForm::zero(f.rank()), |acc, (_, c)| acc + c)
}

/// Pairs of homogeneous forms with their degrees.
pub fn homogeneous_pair() -> impl Strategy<Value = (InvariantForm<GaussRat>, usize, InvariantForm<GaussRat>, usize)> {
    (1usize..=4)
        .prop_flat_map(|n| (form(n, 6), 0..=2 * n, form(n, 6), 0..=2 * n))
        .prop_map(|(a, j, b, k)| (homogeneous(&a, j), j, homogeneous(&b, k), k))
}

fn exact_catalog() -> Vec<StructurePresentation<GaussRat>> {
    catalog::entries()
        .iter()
        .filter(|e| !e.float)
        .filter_map(|e| match e.build(&Params::new()).ok()? {
            Built::Exact(p) => Some(p),
            Built::Float(_) => None,
        })
        .collect()
}

/// Catalog structures at default parameters, plus the three families at
/// random parameters.
pub fn structure() -> impl Strategy<Value = StructurePresentation<GaussRat>> {
    let pool = exact_catalog();
    let k = pool.len();
    prop_oneof![
        (0..k).prop_map(move |i| pool[i].clone()),
        prop::array::uniform5(gauss()).prop_map(|[a, b, c, d, e]| catalog::fps6(a, b, c, d, e)),
        prop::array::uniform12(gauss()).prop_map(|a| catalog::ft8(&a)),
        prop::collection::vec(gauss(), 22).prop_map(|v| catalog::st10(&v.try_into().unwrap())),
    ]
}

pub fn structure_and_form() -> impl Strategy<Value = (StructurePresentation<GaussRat>, InvariantForm<GaussRat>)> {
    structure().prop_flat_map(|s| {
        let n = s.n();
        (Just(s), form(n, 5))
    })
}

/// Real `(p,p)`-form `χ + χ̄` with a simple `(n−p,0)`-form.
pub fn real_form_and_simple() -> impl Strategy<Value = (InvariantForm<GaussRat>, usize, SimpleForm<GaussRat>)> {
    (2usize..=4)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, p)| {
            (
                Just(n),
                Just(p),
                form(n, 6),
                prop::collection::vec(prop::collection::vec(gauss(), n), n - p),
            )
        })
        .prop_map(|(_, p, chi, factors)| {
            let chi = chi.bidegree_project(p, p);
            (chi.clone() + chi.conjugate(), p, SimpleForm::new(factors))
        })
}

fn sign(j: usize, k: usize) -> GaussRat {
    if (j * k) % 2 == 0 {
        GaussRat::one()
    } else {
        -GaussRat::one()
    }
}

pub fn wedge_graded(
    (a, j, b, k): (InvariantForm<GaussRat>, usize, InvariantForm<GaussRat>, usize),
) -> Result<(), TestCaseError> {
    let ab = a.wedge(&b).unwrap();
    let ba = b.wedge(&a).unwrap().scale(&sign(j, k));
    prop_assert_eq!(ab, ba);
    Ok(())
}

pub fn conjugation_morphism(
    (a, _, b, _): (InvariantForm<GaussRat>, usize, InvariantForm<GaussRat>, usize),
) -> Result<(), TestCaseError> {
    let lhs = a.wedge(&b).unwrap().conjugate();
    let rhs = a.conjugate().wedge(&b.conjugate()).unwrap();
    prop_assert_eq!(lhs, rhs);
    prop_assert_eq!(a.conjugate().conjugate(), a);
    Ok(())
}

pub fn bidegree_partition(f: InvariantForm<GaussRat>) -> Result<(), TestCaseError> {
    let parts = f.components();
    let mut sum = InvariantForm::zero(f.rank());
    for ((p, q), c) in &parts {
        prop_assert_eq!(c.bidegree(), Some((*p, *q)));
        prop_assert_eq!(&c.bidegree_project(*p, *q), c);
        sum = sum + c.clone();
    }
    prop_assert_eq!(sum, f);
    Ok(())
}

pub fn d_splits((s, f): (StructurePresentation<GaussRat>, InvariantForm<GaussRat>)) -> Result<(), TestCaseError> {
    let d = s.differential(&f).unwrap();
    let sum = s.del(&f, 0.0).unwrap() + s.delbar(&f, 0.0).unwrap();
    prop_assert_eq!(d, sum);
    Ok(())
}

pub fn squares_vanish((s, f): (StructurePresentation<GaussRat>, InvariantForm<GaussRat>)) -> Result<(), TestCaseError> {
    let del = |g: &InvariantForm<GaussRat>| s.del(g, 0.0).unwrap();
    let delbar = |g: &InvariantForm<GaussRat>| s.delbar(g, 0.0).unwrap();
    prop_assert!(del(&del(&f)).is_zero());
    prop_assert!(delbar(&delbar(&f)).is_zero());
    prop_assert!(s.differential(&s.differential(&f).unwrap()).unwrap().is_zero());
    Ok(())
}

pub fn ddbar_anticommutes(
    (s, f): (StructurePresentation<GaussRat>, InvariantForm<GaussRat>),
) -> Result<(), TestCaseError> {
    let a = s.del(&s.delbar(&f, 0.0).unwrap(), 0.0).unwrap();
    let b = s.delbar(&s.del(&f, 0.0).unwrap(), 0.0).unwrap();
    prop_assert_eq!(a.clone(), -b);
    prop_assert_eq!(s.ddbar(&f, 0.0).unwrap(), a);
    Ok(())
}

pub fn pairing_is_real(
    (psi, p, beta): (InvariantForm<GaussRat>, usize, SimpleForm<GaussRat>),
) -> Result<(), TestCaseError> {
    let v = pairing(&psi, p, &beta, 0.0).unwrap();
    prop_assert!(v.im().is_zero(), "pairing {v} not real");
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn torus_bott_chern(n: usize) -> Result<(), TestCaseError> {
    let table = bott_chern_dimensions(&StructurePresentation::<GaussRat>::torus(n), 0.0).unwrap();
    for p in 0..=n {
        for q in 0..=n {
            prop_assert_eq!(table.dims[p][q], binomial(n, p) * binomial(n, q));
        }
    }
    Ok(())
}

pub fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: CASES,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

/// Every suite, run with a deterministic runner.
pub fn run_all() -> Vec<(&'static str, Result<(), String>)> {
    fn go<S: Strategy>(
        strat: S,
        body: impl Fn(S::Value) -> Result<(), TestCaseError>,
    ) -> Result<(), String> {
        runner().run(&strat, body).map_err(|e| e.to_string())
    }
    vec![
        ("wedge graded anticommutativity", go(homogeneous_pair(), wedge_graded)),
        ("conjugation morphism", go(homogeneous_pair(), conjugation_morphism)),
        ("bidegree partition", go((1usize..=5).prop_flat_map(|n| form(n, 8)), bidegree_partition)),
        ("d = ∂ + ∂̄", go(structure_and_form(), d_splits)),
        ("∂² = ∂̄² = 0", go(structure_and_form(), squares_vanish)),
        ("∂∂̄ = −∂̄∂", go(structure_and_form(), ddbar_anticommutes)),
        ("pairing realness", go(real_form_and_simple(), pairing_is_real)),
        ("Bott–Chern torus dimensions", go(1usize..=3, torus_bott_chern)),
    ]
}
