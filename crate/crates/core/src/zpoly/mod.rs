//! Exact dense polynomials over the integers, in one and two variables.
//!
//! [`Poly<R>`] is generic over a [`Ring`] with exact division. The two
//! instances used throughout the crate are [`IntPoly`] (`Z[t]` or `Z[x]`) and
//! [`BiPoly`] (`Z[t][x]`: a polynomial in `x` whose coefficients are
//! polynomials in the parameter `t`).

mod bivariate;
mod parse;
mod resultant;
mod sturm;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use bivariate::{normalized_derivative, specialize, BiPoly};
pub use parse::{parse_multivariate, parse_poly, MultiPoly, ParseError};
pub use resultant::{
    content, discriminant, gcd_z, is_constant_times_square, primitive_part, resultant, squarefree_decomposition,
    subresultant_prs,
};
pub use sturm::{sturm_real_roots, SturmReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial must have degree at least 2 (got {0:?})")]
    DegreeTooLow(Option<usize>),
    #[error("polynomial is not monic in x")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
}

/// A commutative ring with exact division, as needed by the subresultant
/// algorithms.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    /// `Some(q)` with `q * rhs == self`, or `None` when `rhs` does not divide.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    fn power(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        Zero::is_zero(&r).then_some(q)
    }
}

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

pub type IntPoly = Poly<BigInt>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    /// `c * var^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `var^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == R::one())
    }

    pub fn eval(&self, at: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.times(at).plus(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.times(&R::from_i64(k as i64))).collect())
    }

    pub fn scale(&self, by: &R) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.times(by)).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, exp: usize) -> Self {
        Ring::power(self, exp)
    }

    /// Substitutes another polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        self.pseudo_divrem(divisor).1
    }

    /// `(q, r)` with `lc(d)^(deg self - deg d + 1) * self = q d + r`.
    pub fn pseudo_divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("pseudo-division by zero polynomial");
        let Some(sd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.lc();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![R::zero(); sd - dd + 1];
        let mut steps = sd - dd + 1;
        for k in (dd..=sd).rev() {
            let c = rem[k].clone();
            for q in quot.iter_mut() {
                *q = q.times(&lead);
            }
            for r in rem.iter_mut().take(k + 1) {
                *r = r.times(&lead);
            }
            quot[k - dd] = quot[k - dd].plus(&c);
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k - dd + j] = rem[k - dd + j].minus(&c.times(dc));
                }
            }
            steps -= 1;
        }
        debug_assert_eq!(steps, 0);
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient in `R[var]`, or `None` if `divisor` does not divide.
    pub fn div_exact_poly(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        let Some(sd) = self.degree() else {
            return Some(Self::zero());
        };
        if sd < dd {
            return None;
        }
        let lead = divisor.lc();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![R::zero(); sd - dd + 1];
        for k in (dd..=sd).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = rem[k].div_exact(&lead)?;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] = rem[k - dd + j].minus(&q.times(dc));
            }
            quot[k - dd] = q;
        }
        rem.iter().all(Ring::is_zero).then(|| Self::new(quot))
    }

    /// Divides every coefficient exactly by `by`.
    pub fn div_exact_scalar(&self, by: &R) -> Option<Self> {
        let coeffs: Option<Vec<R>> = self.coeffs.iter().map(|c| c.div_exact(by)).collect();
        coeffs.map(Self::new)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn from_i64(v: i64) -> Self {
        Poly::constant(R::from_i64(v))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_constant() {
            return rhs.coeffs.first().and_then(|c| self.div_exact_scalar(c));
        }
        self.div_exact_poly(rhs)
    }
}

impl<R: Ring> Add for &Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).plus(&rhs.coeff(k))).collect())
    }
}

impl<R: Ring> Sub for &Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).minus(&rhs.coeff(k))).collect())
    }
}

impl<R: Ring> Mul for &Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &Poly<R>) -> Poly<R> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(out)
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly::new(self.coeffs.iter().map(Ring::negate).collect())
    }
}

macro_rules! forward_owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<R: Ring> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $m(self, rhs: Poly<R>) -> Poly<R> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned_ops!(Add add, Sub sub, Mul mul);

impl IntPoly {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Integer evaluation, with `i64` convenience.
    pub fn eval_i64(&self, at: i64) -> BigInt {
        self.eval(&BigInt::from(at))
    }

    /// Sign of the value at +infinity (`+1`, `-1`, or 0 for the zero poly).
    pub fn sign_at_pos_inf(&self) -> i32 {
        sign(&self.lc())
    }

    pub fn sign_at_neg_inf(&self) -> i32 {
        let s = sign(&self.lc());
        if self.deg() % 2 == 1 {
            -s
        } else {
            s
        }
    }

    /// Makes the leading coefficient positive.
    pub fn with_positive_lc(self) -> Self {
        if self.lc().is_negative() {
            -&self
        } else {
            self
        }
    }

    /// Formats with a chosen variable name.
    pub fn display_with(&self, var: &str) -> String {
        format_poly(&self.coeffs, var)
    }
}

fn sign(v: &BigInt) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn monomial_text(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// Appends `c * monomial` with sign-aware separators.
pub(crate) fn push_term(out: &mut String, c: &BigInt, monomial: &str) {
    if Zero::is_zero(c) {
        return;
    }
    let mag = c.abs();
    if out.is_empty() {
        if c.is_negative() {
            out.push('-');
        }
    } else {
        out.push_str(if c.is_negative() { " - " } else { " + " });
    }
    if monomial.is_empty() {
        out.push_str(&mag.to_string());
    } else if mag.is_one() {
        out.push_str(monomial);
    } else {
        out.push_str(&format!("{mag}*{monomial}"));
    }
}

fn format_poly(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        push_term(&mut out, c, &monomial_text(var, k));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl<R: fmt::Debug> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn ring_ops() {
        let x1 = p(&[1, 1]);
        assert_eq!(&x1 * &x1, p(&[1, 2, 1]));
        assert_eq!(x1.pow(2), p(&[1, 2, 1]));
        assert_eq!(p(&[5]).derivative(), IntPoly::zero());
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), IntPoly::zero());
        assert_eq!(p(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn pseudo_division_identity() {
        let a = p(&[3, -2, 0, 7, 5]);
        let b = p(&[1, 0, 3]);
        let (q, r) = a.pseudo_divrem(&b);
        let lhs = a.scale(&BigInt::from(3).pow(3));
        assert_eq!(lhs, &(&q * &b) + &r);
        assert!(r.deg() < 2);
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(a.div_exact_poly(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(a.div_exact_poly(&p(&[2, 1])), None);
        assert_eq!(p(&[6, 4]).div_exact_poly(&p(&[3, 2])), Some(p(&[2])));
    }

    #[test]
    fn printing() {
        assert_eq!(p(&[-1, 1, 0, 1]).to_string(), "x^3 + x - 1");
        assert_eq!(p(&[0, -2]).to_string(), "-2*x");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }
}
