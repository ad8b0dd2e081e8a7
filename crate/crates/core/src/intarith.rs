//! Arbitrary-precision integer utilities: primality, factorization,
//! valuations, support tests, CRT and perfect-power detection.
//!
//! Everything here is a pure function of its arguments. Signs are carried
//! separately from magnitudes; valuations and prime supports are defined on
//! `|n|`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(BigInt, BigInt),
    #[error("modulus must be positive, got {0}")]
    BadModulus(BigInt),
}

/// Bound for the trial-division stage of [`factor`].
pub const TRIAL_DIVISION_BOUND: u32 = 1 << 16;

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    /// Proven: deterministic Miller-Rabin below 2^64.
    Prime,
    /// Passed 64 strong-probable-prime rounds (error below 2^-128).
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_DIVISION_BOUND))
}

/// Sieve of Eratosthenes.
pub fn primes_below(bound: u32) -> Vec<u32> {
    let n = bound as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Iterator over all primes in increasing order, starting at 2.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&n| is_prime_u64(n))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (d, s) = {
        let mut d = n - 1;
        let mut s = 0;
        while d.is_multiple_of(2) {
            d /= 2;
            s += 1;
        }
        (d, s)
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigInt, a: &BigInt, d: &BigInt, s: u64) -> bool {
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Primality of `|n|`, proven below 2^64.
pub fn primality(n: &BigInt) -> Primality {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) { Primality::Prime } else { Primality::Composite };
    }
    for &p in &small_primes()[..64] {
        if (&n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let nm1 = &n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    // Bases are drawn from a generator seeded by the input so the verdict is
    // reproducible.
    let seed = (&n % BigInt::from(u64::MAX)).to_u64().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let bits = n.bits();
    for _ in 0..64 {
        let a = loop {
            let cand = random_below(&mut rng, &nm1, bits);
            if cand > BigInt::one() {
                break cand;
            }
        };
        if !strong_probable_prime(&n, &a, &d, s) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigInt, bits: u64) -> BigInt {
    let words = bits.div_ceil(32) as usize;
    loop {
        let digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
        let mut cand = BigInt::from(num_bigint::BigUint::new(digits));
        cand >>= (words as u64 * 32).saturating_sub(bits);
        if &cand < bound {
            return cand;
        }
    }
}

/// True iff `n` is prime (`n >= 0`).
pub fn is_prime(n: &BigInt) -> bool {
    !n.is_negative() && primality(n).is_prime()
}

/// A possibly partial prime factorization.
///
/// `value = sign * cofactor * prod(p^e)`; `cofactor` is positive and is 1
/// exactly when the factorization is complete.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInt {
    #[serde(with = "crate::dec")]
    pub value: BigInt,
    #[serde(with = "crate::dec")]
    pub factors: Vec<(BigInt, u32)>,
    #[serde(with = "crate::dec")]
    pub cofactor: BigInt,
    pub complete: bool,
}

impl FactoredInt {
    pub fn sign(&self) -> i32 {
        if self.value.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    /// Multiplies everything back together.
    pub fn recompose(&self) -> BigInt {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.value.is_negative() {
            -acc
        } else {
            acc
        }
    }
}

impl std::fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> =
            self.factors.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        if !self.cofactor.is_one() {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}{}", if self.value.is_negative() { "-" } else { "" }, parts.join("*"))
    }
}

/// Work limits for [`factor_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Pollard-Brent iterations allowed per composite before giving up on it.
    pub rho_iterations: u64,
    /// Leftovers above this size are not tested or split further; they go
    /// straight to the cofactor.
    pub rho_max_bits: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { rho_iterations: 4_000_000, rho_max_bits: 400 }
    }
}

/// Factors `n` with the default budget.
pub fn factor(n: &BigInt) -> Result<FactoredInt, ArithError> {
    factor_with(n, FactorBudget::default())
}

/// Trial division, perfect-power splitting, then Pollard-Brent rho.
///
/// Composites that survive the rho budget are multiplied into `cofactor`.
pub fn factor_with(n: &BigInt, budget: FactorBudget) -> Result<FactoredInt, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let mut rest = n.abs();
    let mut found: Vec<(BigInt, u32)> = Vec::new();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if (&pb * &pb) > rest {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            found.push((pb, e));
        }
    }
    let mut cofactor = BigInt::one();
    let mut stack = vec![(rest, 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if m.bits() > budget.rho_max_bits {
            cofactor *= num_traits::pow(m, mult as usize);
            continue;
        }
        if primality(&m).is_prime() {
            found.push((m, mult));
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            stack.push((root, mult * k));
            continue;
        }
        match pollard_brent(&m, budget.rho_iterations) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => cofactor *= num_traits::pow(m, mult as usize),
        }
    }
    found.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in found {
        match factors.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => factors.push((p, e)),
        }
    }
    // A prime found by rho may also divide a surrendered cofactor.
    for (p, e) in factors.iter_mut() {
        while !cofactor.is_one() && (&cofactor % &*p).is_zero() {
            cofactor /= &*p;
            *e += 1;
        }
    }
    let complete = cofactor.is_one();
    Ok(FactoredInt { value: n.clone(), factors, cofactor, complete })
}

fn pollard_brent(n: &BigInt, budget: u64) -> Option<BigInt> {
    const BATCH: u64 = 128;
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let mut spent = 0u64;
    let mut c = BigInt::one();
    while spent < budget {
        let step = |v: &BigInt| (v * v + &c) % n;
        let mut y = BigInt::from(2);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = BigInt::one();
        let mut q = BigInt::one();
        let mut r = 1u64;
        while g.is_one() && spent < budget {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            spent += r;
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = step(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                spent += steps;
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == *n {
            // The batch overshot; replay it one step at a time.
            loop {
                ys = step(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
        c += 1;
    }
    None
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let mut m = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// Strips all powers of the primes in `set` and reports whether `±1` is
/// left, without factoring `n`.
pub fn prime_support_within(n: &BigInt, set: &[BigInt]) -> Result<bool, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    Ok(strip_primes(n, set).is_one())
}

/// `|n|` with every power of every prime in `set` divided out.
pub fn strip_primes(n: &BigInt, set: &[BigInt]) -> BigInt {
    let mut m = n.abs();
    for p in set {
        if p <= &BigInt::one() {
            continue;
        }
        loop {
            let (q, r) = m.div_rem(p);
            if !r.is_zero() {
                break;
            }
            m = q;
        }
    }
    m
}

/// Chinese remaindering of `(residue, modulus)` pairs with pairwise coprime
/// moduli. Returns `(a, M)` with `0 <= a < M`.
pub fn crt(pairs: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt), ArithError> {
    let mut a = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in pairs {
        if !mi.is_positive() {
            return Err(ArithError::BadModulus(mi.clone()));
        }
        let g = m.extended_gcd(mi);
        if !g.gcd.is_one() {
            return Err(ArithError::NonCoprimeModuli(m.clone(), mi.clone()));
        }
        // a + m * k ≡ r (mod mi)  =>  k ≡ (r - a) * m^{-1}
        let k = ((r - &a) * &g.x).mod_floor(mi);
        a += &m * k;
        m *= mi;
        a = a.mod_floor(&m);
    }
    Ok((a, m))
}

/// Square root when `n` is a perfect square.
pub fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    perfect_square_root(n).is_some()
}

/// `Some((r, k))` with `n = r^k`, `k >= 2` maximal over prime exponents,
/// for `n > 1`.
pub fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if n <= &BigInt::one() {
        return None;
    }
    let bits = n.bits() as u32;
    for k in primes_below(bits + 1) {
        let r = n.nth_root(k);
        if num_traits::pow(r.clone(), k as usize) == *n {
            return match perfect_power(&r) {
                Some((s, j)) => Some((s, j * k)),
                None => Some((r, k)),
            };
        }
    }
    None
}

pub fn product(values: impl IntoIterator<Item = BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&b(12491)));
        assert!(!is_prime(&b(1)));
        assert!(is_prime(&b(8243)));
        assert!(!is_prime(&b(0)));
        assert!(is_prime(&b(2)));
        assert!(!is_prime(&b(561)));
    }

    #[test]
    fn primality_trial_division_oracle_agrees() {
        for n in 0u32..5000 {
            let oracle = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(&BigInt::from(n)), oracle, "n = {n}");
        }
    }

    #[test]
    fn large_probable_primes() {
        let m127: BigInt = (BigInt::one() << 127) - 1;
        assert_eq!(primality(&m127), Primality::ProbablePrime);
        let composite = &m127 * BigInt::from(1_000_003);
        assert_eq!(primality(&composite), Primality::Composite);
    }

    #[test]
    fn factor_examples() {
        let f = factor(&b(59)).unwrap();
        assert_eq!(f.factors, vec![(b(59), 1)]);
        assert!(f.complete);

        let f = factor(&b(-144)).unwrap();
        assert_eq!(f.factors, vec![(b(2), 4), (b(3), 2)]);
        assert_eq!(f.sign(), -1);
        assert_eq!(f.recompose(), b(-144));

        let f = factor(&b(611523441)).unwrap();
        assert_eq!(f.factors, vec![(b(3), 2), (b(8243), 2)]);

        assert_eq!(factor(&b(0)), Err(ArithError::ZeroInput));
    }

    #[test]
    fn factor_needs_rho() {
        // Two primes above the trial-division bound.
        let p = b(1_000_003);
        let q = b(998_244_353);
        let f = factor(&(&p * &q * &q)).unwrap();
        assert_eq!(f.factors, vec![(p, 1), (q, 2)]);
        assert!(f.complete);
    }

    #[test]
    fn factor_reports_partial_cofactor() {
        let p: BigInt = "170141183460469231731687303715884105727".parse().unwrap();
        let q: BigInt = "618970019642690137449562111".parse().unwrap();
        let n = &p * &q * 12;
        let f = factor_with(&n, FactorBudget { rho_iterations: 2000, ..Default::default() }).unwrap();
        assert!(!f.complete);
        assert_eq!(f.cofactor, &p * &q);
        assert_eq!(f.recompose(), n);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&b(24), &b(2)), Ok(3));
        assert_eq!(valuation(&b(24000), &b(5)), Ok(3));
        assert_eq!(valuation(&b(7), &b(11)), Ok(0));
        assert_eq!(valuation(&b(0), &b(11)), Err(ArithError::ZeroInput));
    }

    #[test]
    fn support_examples() {
        assert_eq!(prime_support_within(&b(-144), &[b(2), b(3)]), Ok(true));
        assert_eq!(prime_support_within(&b(59), &[b(2), b(3)]), Ok(false));
        assert_eq!(prime_support_within(&b(1), &[]), Ok(true));
    }

    #[test]
    fn support_agrees_with_factorization() {
        let set = [b(2), b(3), b(7)];
        for n in 1i64..20_000 {
            let f = factor(&b(n)).unwrap();
            let oracle = f.primes().all(|p| set.contains(p));
            assert_eq!(prime_support_within(&b(n), &set).unwrap(), oracle);
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt(&[(b(0), b(2)), (b(2), b(3))]), Ok((b(2), b(6))));
        assert_eq!(crt(&[(b(1), b(1))]), Ok((b(0), b(1))));
        assert_eq!(crt(&[(b(3), b(5)), (b(4), b(7))]), Ok((b(18), b(35))));
        assert!(matches!(crt(&[(b(1), b(4)), (b(1), b(6))]), Err(ArithError::NonCoprimeModuli(..))));
    }

    #[test]
    fn square_examples() {
        assert_eq!(perfect_square_root(&b(611523441)), Some(b(24729)));
        assert!(!is_perfect_square(&b(59)));
        assert_eq!(perfect_square_root(&b(0)), Some(b(0)));
        assert_eq!(perfect_power(&b(1 << 12)), Some((b(2), 12)));
        assert_eq!(perfect_power(&b(36)), Some((b(6), 2)));
        assert_eq!(perfect_power(&b(12)), None);
    }
}
