//! Subresultant machinery: resultants, discriminants, GCDs in `Z[t]` and
//! squarefree decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{IntPoly, Poly, PolyError, Ring};

/// Resultant of `a` and `b` via the subresultant PRS (exact over any ring
/// with exact division). Zero if either input is zero.
pub fn resultant<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> R {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return R::zero();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign_neg = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        sign_neg = da % 2 == 1 && db % 2 == 1;
    }
    if b.deg() == 0 {
        let r = b.lc().power(a.deg());
        return if sign_neg { r.negate() } else { r };
    }
    let mut g = R::one();
    let mut h = R::one();
    loop {
        let (da, db) = (a.deg(), b.deg());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return R::zero();
        }
        let divisor = g.times(&h.power(delta));
        a = b;
        b = r.div_exact_scalar(&divisor).expect("subresultant division is exact");
        g = a.lc();
        h = if delta == 0 {
            h
        } else {
            g.power(delta).div_exact(&h.power(delta - 1)).expect("subresultant h update is exact")
        };
        if b.deg() == 0 {
            let da = a.deg();
            let lb = b.lc();
            let out = if da == 0 {
                R::one()
            } else {
                lb.power(da).div_exact(&h.power(da - 1)).expect("final subresultant step is exact")
            };
            return if sign_neg { out.negate() } else { out };
        }
    }
}

/// The subresultant polynomial remainder sequence `a, b, S_1, S_2, ...`,
/// ending at the last nonzero member.
pub fn subresultant_prs<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> Vec<Poly<R>> {
    let (mut a, mut b) = (a.clone(), b.clone());
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut seq = vec![a.clone()];
    if b.is_zero() {
        return seq;
    }
    seq.push(b.clone());
    let mut g = R::one();
    let mut h = R::one();
    loop {
        let delta = a.deg() - b.deg();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return seq;
        }
        let divisor = g.times(&h.power(delta));
        a = b;
        b = r.div_exact_scalar(&divisor).expect("subresultant division is exact");
        g = a.lc();
        h = if delta == 0 {
            h
        } else {
            g.power(delta).div_exact(&h.power(delta - 1)).expect("subresultant h update is exact")
        };
        seq.push(b.clone());
        if b.deg() == 0 {
            return seq;
        }
    }
}

/// `(-1)^(d(d-1)/2) * Res(p, p') / lc(p)`.
pub fn discriminant<R: Ring>(p: &Poly<R>) -> Result<R, PolyError> {
    let d = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    if d < 2 {
        return Err(PolyError::DegreeTooLow(Some(d)));
    }
    let res = resultant(p, &p.derivative());
    let q = res.div_exact(&p.lc()).expect("leading coefficient divides Res(p, p')");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { q.negate() } else { q })
}

/// Nonnegative gcd of the coefficients (0 for the zero polynomial).
pub fn content(p: &IntPoly) -> BigInt {
    p.coeffs().iter().fold(<BigInt as Zero>::zero(), |acc, c| acc.gcd(c))
}

/// `p / content(p)`, with the sign of `p` kept.
pub fn primitive_part(p: &IntPoly) -> IntPoly {
    let c = content(p);
    if Zero::is_zero(&c) {
        return IntPoly::zero();
    }
    p.div_exact_scalar(&c).expect("content divides")
}

/// GCD in the UFD `Z[t]` with positive leading coefficient.
pub fn gcd_z(p: &IntPoly, q: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return q.clone().with_positive_lc();
    }
    if q.is_zero() {
        return p.clone().with_positive_lc();
    }
    let c = content(p).gcd(&content(q));
    primitive_gcd(p, q).scale(&c)
}

fn primitive_gcd(p: &IntPoly, q: &IntPoly) -> IntPoly {
    if p.is_zero() || q.is_zero() {
        return primitive_part(if p.is_zero() { q } else { p }).with_positive_lc();
    }
    let seq = subresultant_prs(&primitive_part(p), &primitive_part(q));
    let last = seq.last().expect("sequence has at least one member");
    if last.deg() == 0 {
        IntPoly::one()
    } else {
        primitive_part(last).with_positive_lc()
    }
}

/// Yun's squarefree decomposition over `Q`: primitive `a_1, a_2, ...` with
/// `p = c * prod a_i^i`. Entry `i - 1` holds `a_i` (possibly constant 1).
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<IntPoly> {
    let f = primitive_part(p);
    if f.deg() == 0 {
        return Vec::new();
    }
    // Primitive divisors divide exactly over Z (Gauss), so every step below
    // is an exact integer division.
    let df = f.derivative();
    let a0 = primitive_gcd(&f, &df);
    let mut b = f.div_exact_poly(&a0).expect("gcd divides f");
    let c = df.div_exact_poly(&a0).expect("gcd divides f'");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    while b.deg() > 0 {
        let a = primitive_gcd(&b, &d);
        b = b.div_exact_poly(&a).expect("gcd divides b");
        let c = d.div_exact_poly(&a).expect("gcd divides d");
        d = &c - &b.derivative();
        out.push(a);
    }
    out
}

/// True iff every irreducible factor of `p` occurs to an even power, i.e.
/// `p` is a constant times a square in `Q[t]`.
pub fn is_constant_times_square(p: &IntPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    squarefree_decomposition(p).iter().enumerate().all(|(i, a)| (i + 1) % 2 == 0 || a.deg() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn resultant_examples() {
        // Res_x(x^2 + 1, x + 3) = (-3)^2 + 1
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[3, 1])), BigInt::from(10));
        // Res(x - a, x - b) = a - b
        assert_eq!(resultant(&p(&[-4, 1]), &p(&[-9, 1])), BigInt::from(-5));
        assert_eq!(resultant(&p(&[1, 0, 1]), &IntPoly::zero()), BigInt::from(0));
        assert_eq!(resultant(&p(&[1, 1]), &p(&[1, 1])), BigInt::from(0));
    }

    #[test]
    fn discriminant_examples() {
        // b^2 - 4c
        assert_eq!(discriminant(&p(&[3, 5, 1])), Ok(BigInt::from(13)));
        // disc_t(-4t^3 - 27(t-1)^2) = -629856
        let dt = p(&[-27, 54, -27, -4]);
        assert_eq!(discriminant(&dt), Ok(BigInt::from(-629856)));
        assert_eq!(discriminant(&p(&[-1, 0, 1])), Ok(BigInt::from(4)));
        assert_eq!(discriminant(&p(&[1, 1])), Err(PolyError::DegreeTooLow(Some(1))));
    }

    #[test]
    fn content_examples() {
        assert_eq!(content(&p(&[18, -12, 6])), BigInt::from(6));
        assert_eq!(content(&p(&[-27, 54, -27, -4])), BigInt::from(1));
        assert_eq!(content(&IntPoly::zero()), BigInt::from(0));
    }

    #[test]
    fn gcd_examples() {
        let d = p(&[-27, 54, -27, -4]);
        assert_eq!(gcd_z(&d, &p(&[0, -72])), p(&[1]));
        assert_eq!(gcd_z(&p(&[0, 2]), &p(&[0, 0, 4])), p(&[0, 2]));
        assert_eq!(gcd_z(&p(&[6]), &p(&[15])), p(&[3]));
        let a = &p(&[1, 1]) * &p(&[2, 0, 1]);
        let b = &p(&[1, 1]) * &p(&[-3, 1]);
        assert_eq!(gcd_z(&a.scale(&BigInt::from(4)), &b.scale(&BigInt::from(6))), p(&[2, 2]));
    }

    #[test]
    fn square_classes() {
        assert!(!is_constant_times_square(&p(&[-27, 54, -27, -4])));
        assert!(is_constant_times_square(&p(&[9, 18, 9])));
        assert!(!is_constant_times_square(&p(&[1, 0, 1])));
        let sq = (&p(&[1, 1]) * &p(&[-2, 0, 3])).pow(2).scale(&BigInt::from(-5));
        assert!(is_constant_times_square(&sq));
        let cube = p(&[1, 1]).pow(3);
        assert!(!is_constant_times_square(&cube));
    }

    #[test]
    fn squarefree_decomposition_recomposes() {
        let a1 = p(&[3, 1]);
        let a2 = p(&[1, 0, 2]);
        let a3 = p(&[-1, 1]);
        let f = &(&a1 * &a2.pow(2)) * &a3.pow(3);
        let dec = squarefree_decomposition(&f.scale(&BigInt::from(7)));
        assert_eq!(dec.len(), 3);
        let rebuilt = dec.iter().enumerate().fold(IntPoly::one(), |acc, (i, a)| &acc * &a.pow(i + 1));
        assert_eq!(primitive_part(&rebuilt).with_positive_lc(), primitive_part(&f).with_positive_lc());
    }
}
