//! Polynomials over prime fields `F_p` (`p < 2^63`), factorization by
//! Cantor–Zassenhaus, and roots modulo prime powers.

mod hensel;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::zpoly::IntPoly;

pub use hensel::{
    certified_root_at, hensel_certified_root, roots_mod_prime_power, CertifiedRoot, HenselError, BRANCH_CAP,
};

/// Seed for the equal-degree splitting PRNG unless a caller supplies one.
pub const DEFAULT_SEED: u64 = 0x1a2b_3c4d;

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

/// Reduces an arbitrary integer into `[0, p)`.
pub fn residue(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Dense polynomial over `F_p`, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn reduce(f: &IntPoly, p: u64) -> Self {
        ModPoly::new(p, f.coeffs().iter().map(|c| residue(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        ModPoly::new(p, vec![c])
    }

    /// `x`.
    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn eval(&self, at: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mulmod(acc, at, self.p) + c) % self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p))
    }

    pub fn scale(&self, c: u64) -> Self {
        ModPoly::new(self.p, self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0);
        ModPoly::new(self.p, (0..n).map(|k| (get(&self.coeffs, k) + get(&rhs.coeffs, k)) % self.p).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0);
        ModPoly::new(self.p, (0..n).map(|k| (get(&self.coeffs, k) + self.p - get(&rhs.coeffs, k)) % self.p).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        let big = p as u128 * p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let s = out[i + j] + a as u128 * b as u128;
                out[i + j] = if s >= big { s % p as u128 } else { s };
            }
        }
        ModPoly::new(p, out.into_iter().map(|v| (v % p as u128) as u64).collect())
    }

    pub fn derivative(&self) -> Self {
        ModPoly::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| mulmod(c, k as u64 % self.p, self.p)).collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        if self.deg() < dd || self.is_zero() {
            return (ModPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let inv = invmod(d.lc(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = mulmod(rem[k], inv, p);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = (rem[idx] + p - mulmod(c, dc, p)) % p;
            }
        }
        rem.truncate(dd);
        (ModPoly::new(p, quot), ModPoly::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient (debug-checked).
    pub fn div(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact division mod {}", self.p);
        q
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = ModPoly::constant(self.p, 1).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Coefficients at multiples of `p` give the `p`-th root when `f' = 0`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        ModPoly::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly(mod {}, {:?})", self.p, self.coeffs)
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lifted = IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect());
        write!(f, "{} (mod {})", lifted, self.p)
    }
}

/// Monic gcd (zero only when both inputs are zero).
pub fn gcd_mod(a: &ModPoly, b: &ModPoly) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

pub fn is_squarefree_mod(a: &ModPoly) -> bool {
    !a.is_zero() && gcd_mod(a, &a.derivative()).deg() == 0
}

/// Squarefree factorization of a monic polynomial: `(g, m)` with pairwise
/// coprime squarefree `g` and `a = prod g^m`.
pub fn squarefree_factorization(a: &ModPoly) -> Vec<(ModPoly, u32)> {
    let mut out = Vec::new();
    if a.deg() == 0 {
        return out;
    }
    let f = a.monic();
    let mut c = gcd_mod(&f, &f.derivative());
    let mut w = f.div(&c);
    let mut i = 1;
    while w.deg() > 0 {
        let y = gcd_mod(&w, &c);
        let z = w.div(&y);
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div(&w);
    }
    if c.deg() > 0 {
        let p = a.p as u32;
        for (g, m) in squarefree_factorization(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out.sort_by_key(|(_, m)| *m);
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(g_d, d)` with `g_d` the product of the degree-`d` irreducible factors.
pub fn distinct_degree_factorization(a: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = a.p;
    let pe = BigUint::from(p);
    let mut out = Vec::new();
    let mut f = a.monic();
    let mut h = ModPoly::x(p).rem(&f);
    let mut d = 0;
    while f.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&pe, &f);
        let g = gcd_mod(&f, &h.sub(&ModPoly::x(p)));
        if g.deg() > 0 {
            f = f.div(&g);
            h = h.rem(&f);
            out.push((g, d));
        }
    }
    if f.deg() > 0 {
        let k = f.deg();
        out.push((f, k));
    }
    out
}

fn random_poly(p: u64, below: usize, rng: &mut ChaCha8Rng) -> ModPoly {
    ModPoly::new(p, (0..below).map(|_| rng.gen_range(0..p)).collect())
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
pub fn equal_degree_factorization(a: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = a.deg();
    if n <= d {
        return vec![a.monic()];
    }
    let p = a.p;
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let r = random_poly(p, n, rng);
        if r.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // Trace map x + x^2 + ... + x^(2^(nd-1)) for the splitting in char 2.
            let mut acc = r.rem(a);
            let mut t = acc.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(a);
                acc = acc.add(&t);
            }
            acc
        } else {
            r.pow_mod(&exp, a).sub(&ModPoly::constant(p, 1))
        };
        let g = gcd_mod(a, &b);
        if g.deg() > 0 && g.deg() < n {
            let mut out = equal_degree_factorization(&g, d, rng);
            out.extend(equal_degree_factorization(&a.div(&g), d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, sorted
/// by (degree, coefficients). The leading coefficient is dropped.
pub fn factor_mod(a: &ModPoly) -> Vec<(ModPoly, u32)> {
    factor_mod_seeded(a, DEFAULT_SEED)
}

pub fn factor_mod_seeded(a: &ModPoly, seed: u64) -> Vec<(ModPoly, u32)> {
    assert!(!a.is_zero(), "factor_mod of the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, m) in squarefree_factorization(a) {
        for (h, d) in distinct_degree_factorization(&g) {
            for irr in equal_degree_factorization(&h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|(x, mx), (y, my)| (x.deg(), &x.coeffs, mx).cmp(&(y.deg(), &y.coeffs, my)));
    out
}

/// True iff `a` (of positive degree) is irreducible over `F_p`.
pub fn is_irreducible_mod(a: &ModPoly) -> bool {
    if a.deg() == 0 || !is_squarefree_mod(a) {
        return false;
    }
    let dd = distinct_degree_factorization(a);
    dd.len() == 1 && dd[0].1 == a.deg()
}

/// Distinct roots in `[0, p)`, ascending.
pub fn roots_mod(a: &ModPoly) -> Vec<u64> {
    if a.is_zero() {
        return (0..a.p).collect();
    }
    if a.deg() == 0 {
        return Vec::new();
    }
    let p = a.p;
    let f = a.monic();
    let xp = ModPoly::x(p).pow_mod(&BigUint::from(p), &f);
    let lin = gcd_mod(&f, &xp.sub(&ModPoly::x(p)));
    if lin.deg() == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut roots: Vec<u64> =
        equal_degree_factorization(&lin, 1, &mut rng).iter().map(|l| (p - l.coeffs[0]) % p).collect();
    roots.sort_unstable();
    roots
}

/// Factor-degree multiset of a reduction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreePattern {
    /// Factor degrees, ascending, repeated by multiplicity.
    pub degrees: Vec<usize>,
    pub squarefree: bool,
}

impl DegreePattern {
    pub fn of(a: &ModPoly) -> Self {
        let fs = factor_mod(a);
        let squarefree = fs.iter().all(|(_, m)| *m == 1);
        let mut degrees: Vec<usize> = fs.iter().flat_map(|(g, m)| std::iter::repeat_n(g.deg(), *m as usize)).collect();
        degrees.sort_unstable();
        DegreePattern { degrees, squarefree }
    }

    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }
}

impl fmt::Display for DegreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Degree pattern of `f mod p`.
pub fn degree_pattern(f: &IntPoly, p: u64) -> DegreePattern {
    DegreePattern::of(&ModPoly::reduce(f, p))
}
