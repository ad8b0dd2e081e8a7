use inertia_lab::galois_id::identify_default;
use inertia_lab::gate::compute_n;
use inertia_lab::inertia::{inertia_certificate, InertiaStatus};
use inertia_lab::intersective::*;
use inertia_lab::presets;
use inertia_lab::zpoly::specialize;
use num_bigint::BigInt;

#[test]
fn a5_quintic_times_sextic() {
    let f = presets::A5.f();
    let data = compute_n(&f).unwrap();
    let c = BigInt::from(-3);
    let cert = inertia_certificate(&data, &c).unwrap();
    assert!(cert.all_certified);
    let quintic = specialize(&f, &c);
    let sextic = sextic_resolvent(&quintic).unwrap();
    let galois = identify_default(&quintic, 500).unwrap();
    let cover = a5_cover().unwrap();
    let cand = certify_optimal(&cert, &galois, &cover, &[quintic, sextic], DEFAULT_EVIDENCE_BOUND).unwrap();
    assert_eq!(cand.status, CandidateStatus::CertifiedGivenGaloisID);
    assert_eq!((cand.m, cover.datum.s_value), (2, Some(2)));
    assert!(cand.optimal);
    assert!(cand.empirical.complete());
    assert_eq!(cand.empirical.rows.len(), 1229);
}

#[test]
fn a5_uncertified_prime_is_rejected() {
    let f = presets::A5.f();
    let data = compute_n(&f).unwrap();
    let c = BigInt::from(-3);
    let mut cert = inertia_certificate(&data, &c).unwrap();
    cert.prime_statuses[0].status = InertiaStatus::Uncertified;
    let quintic = specialize(&f, &c);
    let sextic = sextic_resolvent(&quintic).unwrap();
    let galois = identify_default(&quintic, 500).unwrap();
    let err = certify_optimal(&cert, &galois, &a5_cover().unwrap(), &[quintic, sextic], 500).unwrap_err();
    assert!(matches!(err, IntersectiveError::InertiaUncertified(_)));
}

#[test]
fn psl33_single_factor_is_not_enough() {
    let f = presets::PSL33.f();
    let data = compute_n(&f).unwrap();
    let c = BigInt::from(1);
    let cert = inertia_certificate(&data, &c).unwrap();
    let fc = specialize(&f, &c);
    let galois = identify_default(&fc, 50).unwrap();
    let err = certify_optimal(&cert, &galois, &psl33_cover().unwrap(), &[fc], 100).unwrap_err();
    assert_eq!(err, IntersectiveError::FactorCountMismatch { m: 1, expected: 2 });
}

#[test]
fn a5_cover_alone_fails_at_inertia_three() {
    let g = inertia_lab::groups::a5().unwrap();
    let (d5, a4) = (inertia_lab::groups::d5().unwrap(), inertia_lab::groups::a4().unwrap());
    let datum = inertia_lab::groups::conjugate_cover_check(&g, &[("A4", &a4), ("D5", &d5)]).unwrap();
    let compatibility = inertia_lab::groups::decomposition_compatibility(&g, &[&a4, &d5], 3).unwrap();
    let spec = CoverSpec { group: "A5".into(), datum, compatibility };
    let f = presets::A5.f();
    let data = compute_n(&f).unwrap();
    let c = BigInt::from(-3);
    let cert = inertia_certificate(&data, &c).unwrap();
    let quintic = specialize(&f, &c);
    let sextic = sextic_resolvent(&quintic).unwrap();
    let galois = identify_default(&quintic, 200).unwrap();
    let err = certify_optimal(&cert, &galois, &spec, &[quintic, sextic], 100).unwrap_err();
    assert!(matches!(err, IntersectiveError::CoverFails(_)));
}
