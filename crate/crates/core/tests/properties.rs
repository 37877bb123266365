mod common;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::Config;

fn config() -> Config {
    Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn wedge_is_graded_commutative(v in homogeneous_pair()) {
        wedge_graded(v)?;
    }

    #[test]
    fn conjugation_is_a_morphism(v in homogeneous_pair()) {
        conjugation_morphism(v)?;
    }

    #[test]
    fn bidegree_components_partition(f in (1usize..=5).prop_flat_map(|n| form(n, 8))) {
        bidegree_partition(f)?;
    }

    #[test]
    fn d_is_del_plus_delbar(v in structure_and_form()) {
        d_splits(v)?;
    }

    #[test]
    fn del_and_delbar_square_to_zero(v in structure_and_form()) {
        squares_vanish(v)?;
    }

    #[test]
    fn del_delbar_anticommute(v in structure_and_form()) {
        ddbar_anticommutes(v)?;
    }

    #[test]
    fn pairing_of_real_forms_is_real(v in real_form_and_simple()) {
        pairing_is_real(v)?;
    }

    #[test]
    fn torus_bott_chern_is_binomial(n in 1usize..=3) {
        torus_bott_chern(n)?;
    }
}
