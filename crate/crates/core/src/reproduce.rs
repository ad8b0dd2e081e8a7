//! Recomputes every number the four worked examples print and compares.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois_id::identify_default;
use crate::gate::{run_gate, GateCertificate, GateError, GateOptions};
use crate::inertia::{
    local_field_disc_valuation, scan_progression, Certifier, CertifyOptions, InertiaError, InertiaStatus, ScanFilters,
    ScanResult, ScanSource, SpecializationCertificate,
};
use crate::intarith::{factor, is_perfect_square, perfect_square_root, FactoredInt};
use crate::intersective::{self, IntersectiveCandidate, IntersectiveError, DEFAULT_EVIDENCE_BOUND};
use crate::modp::{degree_pattern, is_irreducible_mod, is_squarefree_mod, ModPoly};
use crate::presets::{self, Preset};
use crate::zpoly::{discriminant, normalized_derivative, parse_multivariate, specialize, IntPoly, PolyError};

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error("unknown example {0}; expected one of s3, a5, psl27, psl33")]
    UnknownExample(String),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Inertia(#[from] InertiaError),
    #[error(transparent)]
    Intersective(#[from] IntersectiveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Printed value, or the property being checked.
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, expected: impl ToString, computed: impl ToString, pass: bool) -> Self {
        Check { name: name.to_string(), expected: expected.to_string(), computed: computed.to_string(), pass }
    }

    fn eq(name: &str, expected: impl ToString, computed: impl ToString) -> Self {
        let (e, c) = (expected.to_string(), computed.to_string());
        let pass = e == c;
        Check { name: name.to_string(), expected: e, computed: c, pass }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: expected {}; computed {}", self.name, self.expected, self.computed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reproduction {
    pub example: String,
    pub checks: Vec<Check>,
    pub gate: Option<GateCertificate>,
    pub scan: Option<ScanResult>,
    pub certificates: Vec<SpecializationCertificate>,
    pub intersective: Option<IntersectiveCandidate>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const EXAMPLES: [&str; 4] = ["s3", "a5", "psl27", "psl33"];

/// A polynomial in `t` alone, from the shared grammar.
pub fn t_poly(text: &str) -> IntPoly {
    let m = parse_multivariate(text).expect("shipped literal parses");
    m.to_bipoly('x', 't').expect("only t").coeff(0)
}

fn factored(n: &BigInt) -> FactoredInt {
    factor(n).expect("nonzero")
}

fn gate_options(p: &Preset) -> GateOptions {
    GateOptions {
        witness: Some(p.witness),
        exceptional: p.exceptional_primes.to_vec(),
        t_ref: p.t_ref,
        ..GateOptions::default()
    }
}

pub fn reproduce(example: &str) -> Result<Reproduction, ReproduceError> {
    match example {
        "s3" => s3(),
        "a5" => a5(),
        "psl27" => psl27(),
        "psl33" => psl33(),
        other => Err(ReproduceError::UnknownExample(other.to_string())),
    }
}

fn empty(example: &str) -> Reproduction {
    Reproduction {
        example: example.to_string(),
        checks: Vec::new(),
        gate: None,
        scan: None,
        certificates: Vec::new(),
        intersective: None,
    }
}

fn s3() -> Result<Reproduction, ReproduceError> {
    let mut out = empty("s3");
    let f = presets::S3.f();
    let gate = run_gate(&f, &gate_options(&presets::S3))?;
    let d = &gate.data.f1;
    let c = &mut out.checks;
    c.push(Check::eq("D(f)", t_poly("-4t^3 - 27(t-1)^2").display_with("t"), d.display_with("t")));
    let dprime = discriminant(&normalized_derivative(&f)?)?;
    c.push(Check::eq("D(normalized f')", t_poly("-12t").display_with("t"), dprime.display_with("t")));
    c.push(Check::eq("N", 1, &gate.data.n_value));
    c.push(Check::eq("witness", 2, &gate.witness));
    c.push(Check::eq("|disc f(2, x)|", 59, d.eval_i64(2).magnitude()));
    c.push(Check::eq("disc_t D(f)", -629856, discriminant(d)?));
    c.push(Check::new(
        "progression soundness",
        format!("{} members clean", gate.soundness.members_checked),
        format!("{} violations in {}", gate.soundness.violations.len(), gate.progression),
        gate.soundness.passed(),
    ));
    let f1 = specialize(&f, &BigInt::from(-1));
    let pats: Vec<String> = [5u64, 11].iter().map(|&p| degree_pattern(&f1, p).to_string()).collect();
    let shapes: Vec<Vec<usize>> = [5u64, 11].iter().map(|&p| degree_pattern(&f1, p).degrees).collect();
    let both = shapes.iter().any(|s| s.contains(&2)) && shapes.iter().any(|s| s == &vec![3]);
    c.push(Check::new("f(-1, x) mod 5 and 11", "a transposition and a 3-cycle", pats.join(", "), both));
    out.gate = Some(gate);
    Ok(out)
}

fn a5() -> Result<Reproduction, ReproduceError> {
    let mut out = empty("a5");
    let p = &presets::A5;
    let f = p.f();
    let gate = run_gate(&f, &gate_options(p))?;
    let c = &mut out.checks;
    let fd = normalized_derivative(&f)?;
    let printed = parse_multivariate("y^4-150y^2+50vy+3125-375v").expect("literal").to_bipoly('y', 'v').expect("y, v");
    c.push(Check::eq("normalized f'(0, v, y)", printed.display_with("y", "v"), fd.display_with("y", "v")));
    c.push(Check::eq("gcd(D(f), 20 D(f'))", 1, &gate.data.n_value));
    let w = BigInt::from(-3);
    c.push(Check::new("witness -3", "passes the support check", gate.data.is_witness(&w), gate.data.is_witness(&w)));
    let dfd = discriminant(&specialize(&fd, &w))?;
    let printed_dfd = t_poly("-2^4*5^6*23^2*18379").coeff(0);
    c.push(Check::new(
        "20 D(f'(0, -3, x))",
        "-2^4*5^6*23^2*18379",
        format!("D = {}, 20 D = {}", factored(&dfd), factored(&(&dfd * 20))),
        dfd == printed_dfd || &dfd * 20 == printed_dfd,
    ));
    let fc = specialize(&f, &w);
    let disc = discriminant(&fc)?;
    let root = perfect_square_root(&disc).unwrap_or_default();
    c.push(Check::new(
        "disc f(0, -3, x) is a square",
        "square",
        format!("({})^2", factored(&root)),
        is_perfect_square(&disc),
    ));
    c.push(Check::new("disc f(0, -3, x)", "3^2*8243^2", factored(&disc), disc == t_poly("3^2*8243^2").coeff(0)));
    let certifier = Certifier::new(gate.data.clone(), CertifyOptions::default());
    let cert = certifier.certify(&w)?;
    c.push(Check::new("inertia at -3", "all ramified primes certified", statuses(&cert), cert.all_certified));
    let sextic = intersective::sextic_resolvent(&fc)?;
    let galois = identify_default(&fc, 500).map_err(|_| IntersectiveError::NotSeparable)?;
    c.push(Check::eq("Galois group of f(0, -3, x)", "A5", galois.identified().unwrap_or("ambiguous")));
    let cover = intersective::a5_cover().map_err(IntersectiveError::from)?;
    let cand = intersective::certify_optimal(&cert, &galois, &cover, &[fc, sextic], DEFAULT_EVIDENCE_BOUND)?;
    c.push(Check::new(
        "optimally intersective",
        "m = 2 = s(A5)",
        format!("m = {}, status {:?}", cand.m, cand.status),
        cand.optimal && cand.status == intersective::CandidateStatus::CertifiedGivenGaloisID,
    ));
    out.certificates.push(cert);
    out.intersective = Some(cand);
    out.gate = Some(gate);
    Ok(out)
}

fn statuses(cert: &SpecializationCertificate) -> String {
    cert.prime_statuses.iter().map(|s| format!("{}:{:?}", s.p, s.status)).collect::<Vec<_>>().join(", ")
}

/// Range scan for the all-real, 2-unramified specialization.
pub fn psl27_scan(certifier: &Certifier, limit: usize) -> ScanResult {
    let filters = ScanFilters {
        totally_real: true,
        unramified_at_two: true,
        require_all_certified: true,
        max_examined: limit,
        ..ScanFilters::default()
    };
    let src = ScanSource::Range { start: BigInt::from(-1), step: -1 };
    scan_progression(certifier, &src, 1, &filters)
}

fn psl27() -> Result<Reproduction, ReproduceError> {
    let mut out = empty("psl27");
    let p = &presets::PSL27;
    let f = p.f();
    let gate = run_gate(&f, &gate_options(p))?;
    let zero = BigInt::zero();
    let c = &mut out.checks;
    let d0 = gate.data.f1.eval(&zero);
    c.push(Check::eq("disc f(0, x)", t_poly("23^2*254106319^2").coeff(0), &d0));
    let e0 = gate.data.f2.eval(&zero);
    let fe = factored(&e0);
    c.push(Check::eq("42 D(f'(0, x))", "2^7*3*7^20*1213*20789*208589*592191293", &fe));
    let fd = factored(&d0);
    let disjoint = fd.primes().all(|q| fe.exponent_of(q) == 0);
    c.push(Check::new("supports disjoint", "coprime", format!("{fd} vs {fe}"), disjoint));
    for t0 in [0i64, 1] {
        let m = ModPoly::reduce(&specialize(&f, &BigInt::from(t0)), 2);
        let ok = is_squarefree_mod(&m) && is_irreducible_mod(&m);
        c.push(Check::new(&format!("f({t0}, x) mod 2"), "separable and irreducible", &m, ok));
    }
    let certifier = Certifier::new(gate.data.clone(), CertifyOptions::default());
    let scan = psl27_scan(&certifier, 100_000);
    let found = scan.certificates.first();
    c.push(Check::new(
        "negative c, totally real, 2 unramified, inertia <= 2",
        "found with |c| <= 10^5",
        found.map_or_else(|| format!("none in {} values", scan.examined), |x| format!("c = {}: {}", x.c, statuses(x))),
        found.is_some_and(|x| x.real_roots == 7 && x.status_of(&BigInt::from(2)) == InertiaStatus::UnramifiedCertified),
    ));
    out.certificates.extend(scan.certificates.iter().cloned());
    out.scan = Some(scan);
    out.gate = Some(gate);
    Ok(out)
}

/// Field discriminant of the root field of a monic `g` from local
/// computations at each prime of `disc g`.
pub fn field_discriminant(g: &IntPoly) -> Result<FactoredInt, InertiaError> {
    let d = discriminant(g).map_err(|_| InertiaError::NotSeparable)?;
    let fd = factor(&d).map_err(|_| InertiaError::NotSeparable)?;
    if !fd.complete {
        return Err(InertiaError::PartialFactorization);
    }
    let mut factors = Vec::new();
    let mut value = if d < BigInt::zero() { -BigInt::one() } else { BigInt::one() };
    for (q, _) in &fd.factors {
        let qu = u64::try_from(q).map_err(|_| InertiaError::PrimeTooLarge(q.clone()))?;
        let v = local_field_disc_valuation(g, qu)?.field_disc_valuation;
        if v > 0 {
            value *= num_traits::pow(q.clone(), v as usize);
            factors.push((q.clone(), v));
        }
    }
    Ok(FactoredInt { value, factors, cofactor: BigInt::one(), complete: true })
}

fn psl33() -> Result<Reproduction, ReproduceError> {
    let mut out = empty("psl33");
    let p = &presets::PSL33;
    let f = p.f();
    let gate = run_gate(&f, &gate_options(p))?;
    let c = &mut out.checks;
    let printed = t_poly(
        "2^18*3^12*12491^6*(36t^2 - 40t - 27)^4*(31171328t^4 - 8088768t^3 - 279653877t^2 + 125341344t + 48892572)^4",
    );
    c.push(Check::new(
        "D(f)",
        "displayed factorization",
        if gate.data.f1 == printed { "equal" } else { "differs" },
        gate.data.f1 == printed,
    ));
    let support: Vec<String> = gate.data.n_support.iter().map(BigInt::to_string).collect();
    c.push(Check::eq("N support", "2, 3, 12491", support.join(", ")));
    let f1 = specialize(&f, &BigInt::one());
    let mut vals = Vec::new();
    for q in [2u64, 3, 12491] {
        vals.push((q, local_field_disc_valuation(&f1, q)?.field_disc_valuation));
    }
    c.push(Check::new(
        "field disc of f(1, x) at 2, 3, 12491",
        "valuations 0",
        format!("{vals:?}"),
        vals.iter().all(|(_, v)| *v == 0),
    ));
    let fdisc = field_discriminant(&f1)?;
    let printed_fd = t_poly("(23*31*109*23843)^4").coeff(0);
    c.push(Check::new("field disc of f(1, x)", "(23*31*109*23843)^4", &fdisc, (&fdisc.value % &printed_fd).is_zero()));
    let corrected = t_poly("(23*31*109*32843)^4").coeff(0);
    c.push(Check::eq("field disc of f(1, x), last prime read as 32843", &corrected, &fdisc.value));
    let progression = gate.progression.clone();
    let certifier = Certifier::new(gate.data.clone(), CertifyOptions::default());
    let filters = ScanFilters { require_all_certified: true, max_examined: 30, ..ScanFilters::default() };
    let scan = scan_progression(&certifier, &ScanSource::Progression(progression.clone()), 3, &filters);
    c.push(Check::new(
        "refined progression members",
        "3 certificates with every status certified",
        format!("{} of {} examined in {}", scan.certificates.len(), scan.examined, progression),
        scan.certificates.len() == 3 && scan.certificates.iter().all(|x| x.all_certified),
    ));
    out.certificates.extend(scan.certificates.iter().cloned());
    out.scan = Some(scan);
    out.gate = Some(gate);
    Ok(out)
}
