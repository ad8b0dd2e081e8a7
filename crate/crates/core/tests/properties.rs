mod support;

use support::props;

#[test]
fn normalized_derivative_discriminant_scaling() {
    props::normalized_derivative_scaling().unwrap();
}

#[test]
fn specialization_commutes_with_discriminant() {
    props::specialization_commutes().unwrap();
}

#[test]
fn factor_mod_recomposes_and_matches_trial_division() {
    props::factor_mod_agrees().unwrap();
}

#[test]
fn hensel_roots_match_exhaustive() {
    props::hensel_agrees().unwrap();
}

#[test]
fn sturm_matches_numeric_isolation() {
    props::sturm_agrees().unwrap();
}

#[test]
fn crt_solves_every_congruence() {
    props::crt_solves().unwrap();
}

#[test]
fn crt_rejects_shared_factors() {
    props::crt_rejects().unwrap();
}

#[test]
fn progression_membership() {
    props::progression_membership().unwrap();
}

#[test]
fn dedekind_round2_on_quadratics() {
    props::quadratic_orders().unwrap();
}

#[test]
fn dedekind_round2_on_pure_cubics() {
    props::pure_cubic_orders().unwrap();
}

#[test]
fn every_suite_is_listed() {
    assert_eq!(props::SUITES.len(), 10);
}
