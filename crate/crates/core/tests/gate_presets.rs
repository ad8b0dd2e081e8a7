use inertia_lab::gate::{run_gate, GateOptions};
use inertia_lab::presets;
use num_bigint::BigInt;

#[test]
fn psl33_gate_with_refinement() {
    let p = &presets::PSL33;
    let opts = GateOptions {
        witness: Some(p.witness),
        exceptional: p.exceptional_primes.to_vec(),
        t_ref: p.t_ref,
        ..GateOptions::default()
    };
    let cert = run_gate(&p.f(), &opts).unwrap();
    let support: Vec<BigInt> = [2, 3, 12491].map(BigInt::from).to_vec();
    assert_eq!(cert.data.n_support, support);
    assert!(cert.soundness.passed());
    let r = cert.refinement.as_ref().unwrap();
    assert_eq!(r.exponents, vec![(2, 37), (3, 25), (12491, 13)]);
}

#[test]
fn a5_and_psl27_gates() {
    for p in [&presets::A5, &presets::PSL27] {
        let opts = GateOptions { witness: Some(p.witness), ..GateOptions::default() };
        let cert = run_gate(&p.f(), &opts).unwrap();
        assert_eq!(cert.witness, BigInt::from(p.witness));
        assert!(cert.soundness.passed(), "{}", p.name);
    }
}

#[test]
fn psl33_fibre_at_zero_splits_1_3_9() {
    use inertia_lab::galois_id::sample_patterns;
    use inertia_lab::inertia::{irreducibility_evidence, IrreducibilityStatus};
    use inertia_lab::zpoly::{specialize, IntPoly};

    let f = presets::PSL33.f();
    let parts = [
        IntPoly::from_i64s(&[0, 1]),
        IntPoly::from_i64s(&[-27, 0, 3, 1]),
        IntPoly::from_i64s(&[-432, -972, 0, 837, 108, -81, -54, 0, 0, 1]),
    ];
    let prod = parts.iter().fold(IntPoly::from_i64s(&[1]), |acc, g| &acc * g);
    assert_eq!(specialize(&f, &BigInt::from(0)), prod);
    assert_eq!(irreducibility_evidence(&parts[1]).status, IrreducibilityStatus::Certified);
    // The degree sieve cannot separate the nonic from a 3 + 6 split; it only
    // rules out a rational root.
    assert_ne!(irreducibility_evidence(&parts[2]).status, IrreducibilityStatus::Reducible);
    // Orbit lengths at a degenerate fibre; no Frobenius has this cycle type.
    let f1 = specialize(&f, &BigInt::from(1));
    let samples = sample_patterns(&f1, 300).unwrap();
    assert!(samples.iter().filter(|s| s.used).all(|s| s.pattern != vec![1, 3, 9]));
}
