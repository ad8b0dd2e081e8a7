//! Property suites, run with a fixed RNG so every run sees the same cases.

use std::collections::BTreeMap;
use std::fmt::Debug;

use inertia_lab::gate::Progression;
use inertia_lab::inertia::{local_field_disc_valuation, round2_only};
use inertia_lab::intarith::{crt, factor, valuation};
use inertia_lab::modp::{factor_mod, is_irreducible_mod, roots_mod, roots_mod_prime_power, ModPoly};
use inertia_lab::zpoly::{discriminant, gcd_z, normalized_derivative, specialize, sturm_real_roots, BiPoly, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub type Suite = (&'static str, u32, fn() -> Result<(), String>);

/// Name, case count and entry point of every suite.
pub const SUITES: [Suite; 10] = [
    ("disc(normalized f') = n^((n-1)(n-2)) D(f')", 200, normalized_derivative_scaling),
    ("specialization commutes with disc", 100, specialization_commutes),
    ("factor_mod recomposes, agrees with trial division", 150, factor_mod_agrees),
    ("Hensel roots vs exhaustive, p^k <= 10^6", 60, hensel_agrees),
    ("Sturm count vs numeric isolation", 100, sturm_agrees),
    ("CRT solves every congruence", 200, crt_solves),
    ("CRT rejects shared factors", 100, crt_rejects),
    ("progression membership", 200, progression_membership),
    ("Dedekind/Round-2 on quadratics", 50, quadratic_orders),
    ("Dedekind/Round-2 on pure cubics", 50, pure_cubic_orders),
];

fn run<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn cases(name: &str) -> u32 {
    SUITES.iter().find(|s| s.0 == name).map_or(100, |s| s.1)
}

fn int_poly(coeffs: &[i64]) -> IntPoly {
    IntPoly::from_i64s(coeffs)
}

/// Monic in `x` of degree `n`, lower coefficients of `t`-degree at most 2.
fn monic_bivariate() -> impl Strategy<Value = BiPoly> {
    (3usize..=5).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, 3), n).prop_map(move |lower| {
            let mut coeffs: Vec<IntPoly> = lower.iter().map(|c| int_poly(c)).collect();
            coeffs.push(IntPoly::one());
            BiPoly::new(coeffs)
        })
    })
}

/// `D(f')` is the root product `prod (a_i - a_j)^2`, a rational function:
/// the resultant discriminant of `f'` over `lc^(2n - 4) = n^(2n - 4)`.
pub fn normalized_derivative_scaling() -> Result<(), String> {
    run(cases(SUITES[0].0), monic_bivariate(), |f| {
        let n = f.deg();
        let g = normalized_derivative(&f).unwrap();
        let nb = BigInt::from(n);
        let lhs = discriminant(&g).unwrap().scale(&nb.pow((2 * n - 4) as u32));
        let rhs = discriminant(&f.derivative()).unwrap().scale(&nb.pow(((n - 1) * (n - 2)) as u32));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn specialization_commutes() -> Result<(), String> {
    run(cases(SUITES[1].0), (monic_bivariate(), -50i64..=50), |(f, c)| {
        let c = BigInt::from(c);
        let generic = discriminant(&f).unwrap();
        let special = discriminant(&specialize(&f, &c)).unwrap();
        prop_assert_eq!(generic.eval(&c), special);

        let g = normalized_derivative(&f).unwrap();
        let generic = discriminant(&g).unwrap();
        let special = discriminant(&specialize(&g, &c)).unwrap();
        prop_assert_eq!(generic.eval(&c), special);
        Ok(())
    })
}

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 31, 101, 331, 997];

/// `(p, coefficients)` with `p^deg <= 10^6` and a nonzero leading term.
fn mod_poly_case() -> impl Strategy<Value = (u64, Vec<u64>)> {
    prop::sample::select(SMALL_PRIMES.to_vec()).prop_flat_map(|p| {
        let max_deg = (1..=12u32).take_while(|&d| p.pow(d) <= 1_000_000).last().unwrap() as usize;
        (1..=max_deg).prop_flat_map(move |d| {
            (prop::collection::vec(0..p, d), 1..p).prop_map(move |(mut c, lc)| {
                c.push(lc);
                (p, c)
            })
        })
    })
}

/// Every monic polynomial of degree `d` over `F_p`.
fn monic_polys(p: u64, d: usize) -> impl Iterator<Item = ModPoly> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut k| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(k % p);
            k /= p;
        }
        c.push(1);
        ModPoly::new(p, c)
    })
}

/// Factorization by trial division, as sorted `(degree, multiplicity)`.
fn brute_factor_degrees(a: &ModPoly) -> Vec<(usize, u32)> {
    let p = a.modulus();
    let mut rest = a.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() > 0 {
        if 2 * d > rest.deg() {
            out.push((rest.deg(), 1));
            break;
        }
        for q in monic_polys(p, d) {
            let mut e = 0;
            loop {
                let (quo, rem) = rest.divrem(&q);
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
        }
        d += 1;
    }
    out.sort();
    out
}

pub fn factor_mod_agrees() -> Result<(), String> {
    run(cases(SUITES[2].0), mod_poly_case(), |(p, coeffs)| {
        let a = ModPoly::new(p, coeffs);
        let factors = factor_mod(&a);
        let mut prod = ModPoly::constant(p, a.lc());
        for (g, e) in &factors {
            prop_assert!(g.lc() == 1);
            prop_assert!(is_irreducible_mod(g));
            for _ in 0..*e {
                prod = prod.mul(g);
            }
        }
        prop_assert!(prod == a);

        let brute = brute_factor_degrees(&a);
        let mut degrees: Vec<(usize, u32)> = factors.iter().map(|(g, e)| (g.deg(), *e)).collect();
        degrees.sort();
        prop_assert_eq!(&degrees, &brute);

        let exhaustive: Vec<u64> = (0..p).filter(|&r| a.eval(r) == 0).collect();
        prop_assert_eq!(roots_mod(&a), exhaustive);
        prop_assert_eq!(is_irreducible_mod(&a), brute == vec![(a.deg(), 1)]);
        Ok(())
    })
}

/// `(p, k, f)` with `p^k <= 10^6`; `f` monic, small coefficients.
fn hensel_case() -> impl Strategy<Value = (u64, u32, Vec<i64>)> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_flat_map(|p| {
        let max_k = (1..=20u32).take_while(|&k| p.pow(k) <= 1_000_000).last().unwrap();
        (Just(p), 1..=max_k, prop::collection::vec(-30i64..=30, 1..=4)).prop_map(|(p, k, mut c)| {
            c.push(1);
            (p, k, c)
        })
    })
}

fn eval_mod(c: &[i64], r: u64, m: u64) -> u64 {
    let m = m as i128;
    c.iter().rev().fold(0i128, |acc, &a| (acc * r as i128 + a as i128).rem_euclid(m)) as u64
}

pub fn hensel_agrees() -> Result<(), String> {
    run(cases(SUITES[3].0), hensel_case(), |(p, k, c)| {
        let m = p.pow(k);
        let f = int_poly(&c);
        let exhaustive: Vec<BigInt> = (0..m).filter(|&r| eval_mod(&c, r, m) == 0).map(BigInt::from).collect();
        match roots_mod_prime_power(&f, p, k) {
            Ok(roots) => prop_assert_eq!(roots, exhaustive),
            Err(_) => prop_assert!(exhaustive.len() > 1000),
        }
        Ok(())
    })
}

/// A product of distinct rational linear factors and quadratics, with its
/// real roots as floats.
fn sturm_case() -> impl Strategy<Value = (IntPoly, Vec<f64>)> {
    (
        prop::collection::btree_set((-20i64..=20, 1i64..=4), 0..=4),
        prop::collection::vec((-9i64..=9, -20i64..=20), 0..=2),
    )
        .prop_map(|(linear, quads)| {
            let mut f = IntPoly::one();
            let mut roots = Vec::new();
            let mut seen = BTreeMap::new();
            for (a, b) in linear {
                let g = a.gcd(&b);
                if seen.insert((a / g, b / g), ()).is_none() {
                    f = &f * &int_poly(&[-a / g, b / g]);
                    roots.push(a as f64 / b as f64);
                }
            }
            for (b, c) in quads {
                f = &f * &int_poly(&[c, b, 1]);
                let d = (b * b - 4 * c) as f64;
                if d > 0.0 {
                    roots.push((-b as f64 + d.sqrt()) / 2.0);
                    roots.push((-b as f64 - d.sqrt()) / 2.0);
                }
            }
            roots.sort_by(f64::total_cmp);
            (f, roots)
        })
}

/// Exact sign of `f(x)` at a dyadic approximation of `x`.
fn sign_at(f: &IntPoly, x: f64) -> i32 {
    let scale = 1i64 << 24;
    let num = BigInt::from((x * scale as f64).round() as i64);
    let den = BigInt::from(scale);
    let d = f.deg();
    let mut acc = BigInt::zero();
    for (i, a) in f.coeffs().iter().enumerate() {
        acc += a * num.pow(i as u32) * den.pow((d - i) as u32);
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

pub fn sturm_agrees() -> Result<(), String> {
    run(cases(SUITES[4].0), sturm_case(), |(f, roots)| {
        prop_assume!(f.deg() > 0);
        prop_assume!(gcd_z(&f, &f.derivative()).deg() == 0);
        prop_assume!(roots.windows(2).all(|w| w[1] - w[0] > 1e-3));
        let sturm = sturm_real_roots(&f).unwrap().real_root_count;
        prop_assert_eq!(sturm, roots.len());

        // One exact sign change between consecutive separators per root.
        let mut points = Vec::new();
        match (roots.first(), roots.last()) {
            (Some(lo), Some(hi)) => {
                points.push(lo - 1.0);
                points.extend(roots.windows(2).map(|w| (w[0] + w[1]) / 2.0));
                points.push(hi + 1.0);
            }
            _ => points.push(0.0),
        }
        let signs: Vec<i32> = points.iter().map(|&x| sign_at(&f, x)).collect();
        prop_assert!(signs.iter().all(|&s| s != 0));
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        prop_assert_eq!(changes, roots.len());
        Ok(())
    })
}

pub fn crt_solves() -> Result<(), String> {
    let strategy = (
        prop::collection::btree_set(0usize..8, 1..=5),
        prop::collection::vec(1u32..=3, 5),
        prop::collection::vec(-1000i64..=1000, 5),
    );
    run(cases(SUITES[5].0), strategy, |(picks, exps, residues)| {
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19];
        let pairs: Vec<(BigInt, BigInt)> = picks
            .iter()
            .enumerate()
            .map(|(i, &j)| (BigInt::from(residues[i]), BigInt::from(primes[j].pow(exps[i]))))
            .collect();
        let (a, m) = crt(&pairs).unwrap();
        let expected_m: BigInt = pairs.iter().map(|(_, m)| m.clone()).product();
        prop_assert_eq!(&m, &expected_m);
        prop_assert!(!a.is_negative() && a < m);
        for (r, mi) in &pairs {
            prop_assert!((&a - r).mod_floor(mi).is_zero());
        }
        Ok(())
    })
}

pub fn crt_rejects() -> Result<(), String> {
    run(cases(SUITES[6].0), (2i64..200, 2i64..200, 2i64..20), |(a, b, k)| {
        let pairs = [(BigInt::zero(), BigInt::from(a * k)), (BigInt::one(), BigInt::from(b * k))];
        prop_assert!(crt(&pairs).is_err());
        Ok(())
    })
}

pub fn progression_membership() -> Result<(), String> {
    let strategy = (-10_000i64..10_000, 1i64..5_000, -100_000i64..100_000, -1000i64..1000);
    run(cases(SUITES[7].0), strategy, |(a, b, c, i)| {
        let prog = Progression::new(BigInt::from(a), BigInt::from(b));
        prop_assert!(!prog.a.is_negative() && prog.a < prog.b);
        prop_assert!(prog.contains(&prog.member(i)));
        prop_assert_eq!(prog.contains(&BigInt::from(c)), (c - a).rem_euclid(b) == 0);
        let walked: Vec<BigInt> = prog.walk().take(9).collect();
        for (k, w) in walked.iter().enumerate() {
            prop_assert!(prog.contains(w));
            prop_assert!(walked[..k].iter().all(|v| v != w));
        }
        Ok(())
    })
}

/// Fundamental discriminant of `Q(sqrt(d))`.
fn quadratic_field_disc(d: i64) -> BigInt {
    let fd = factor(&BigInt::from(d)).unwrap();
    let mut core = BigInt::from(fd.sign());
    for p in fd.primes() {
        if fd.exponent_of(p) % 2 == 1 {
            core *= p;
        }
    }
    if core.mod_floor(&BigInt::from(4)) == BigInt::one() {
        core
    } else {
        core * 4
    }
}

fn check_local(f: &IntPoly, field_disc: &BigInt) -> Result<(), TestCaseError> {
    let disc = discriminant(f).unwrap();
    for p in factor(&disc).unwrap().primes() {
        let q = p.to_u64().unwrap();
        let expected = valuation(field_disc, p).unwrap();
        let fast = local_field_disc_valuation(f, q).unwrap();
        let slow = round2_only(f, q).unwrap();
        prop_assert_eq!(fast.field_disc_valuation, expected, "p = {}", q);
        prop_assert_eq!(slow.field_disc_valuation, expected, "p = {} (round 2)", q);
        prop_assert_eq!(fast.index_valuation, slow.index_valuation);
        prop_assert_eq!(valuation(&disc, p).unwrap(), expected + 2 * slow.index_valuation);
    }
    Ok(())
}

fn squarefree(m: i64) -> bool {
    let f = factor(&BigInt::from(m)).unwrap();
    let ok = f.primes().all(|p| f.exponent_of(p) == 1);
    ok
}

pub fn quadratic_orders() -> Result<(), String> {
    let strategy = (-40i64..=40, -400i64..=400).prop_filter("irreducible", |&(b, c)| {
        let d = b * b - 4 * c;
        d != 0 && num_integer::Roots::sqrt(&d.abs()).pow(2) != d
    });
    run(cases(SUITES[8].0), strategy, |(b, c)| check_local(&int_poly(&[c, b, 1]), &quadratic_field_disc(b * b - 4 * c)))
}

/// `x^3 - m` with `m` squarefree: the field discriminant is `-27 m^2`, or
/// `-3 m^2` when `m = ±1 mod 9`.
pub fn pure_cubic_orders() -> Result<(), String> {
    let strategy = (-300i64..=300).prop_filter("squarefree, not a unit", |&m| m.abs() > 1 && squarefree(m));
    run(cases(SUITES[9].0), strategy, |m| {
        let r = m.rem_euclid(9);
        let k = if r == 1 || r == 8 { -3 } else { -27 };
        check_local(&int_poly(&[-m, 0, 0, 1]), &BigInt::from(k * m * m))
    })
}
