//! Roots modulo `p^k` and certified `p`-adic roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{roots_mod, ModPoly};
use crate::intarith::valuation;
use crate::zpoly::{discriminant, IntPoly};

/// Upper bound on simultaneously tracked residues while lifting.
pub const BRANCH_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError {
    #[error("more than {BRANCH_CAP} roots modulo {p}^{level} while lifting")]
    BranchOverflow { p: u64, level: u32 },
}

/// All `r` in `[0, p^k)` with `f(r) = 0 mod p^k`, ascending.
///
/// A root `r` mod `p^j` with `f'(r)` a unit lifts uniquely by a Newton step.
/// Otherwise `f(r + s p^j) = f(r) mod p^(j+1)` for every `s`, so either all
/// `p` lifts are roots or none is.
pub fn roots_mod_prime_power(f: &IntPoly, p: u64, k: u32) -> Result<Vec<BigInt>, HenselError> {
    assert!(k >= 1, "precision must be at least 1");
    let pb = BigInt::from(p);
    let fp = ModPoly::reduce(f, p);
    let mut level: Vec<BigInt> = roots_mod(&fp).into_iter().map(BigInt::from).collect();
    if level.len() > BRANCH_CAP {
        return Err(HenselError::BranchOverflow { p, level: 1 });
    }
    let df = f.derivative();
    let mut pj = pb.clone();
    for j in 1..k {
        let pj1 = &pj * &pb;
        let mut next = Vec::new();
        for r in &level {
            let v = f.eval(r);
            let d = df.eval(r);
            if !d.is_multiple_of(&pb) {
                // r - f(r)/f'(r), with the division done mod p.
                let q = (&v / &pj).mod_floor(&pb);
                let inv = d.mod_floor(&pb).modinv(&pb).expect("unit derivative");
                let s = (-(q * inv)).mod_floor(&pb);
                next.push(r + s * &pj);
            } else if v.is_multiple_of(&pj1) {
                let mut s = BigInt::zero();
                while s < pb {
                    next.push(r + &s * &pj);
                    s += 1;
                }
            }
            if next.len() > BRANCH_CAP {
                return Err(HenselError::BranchOverflow { p, level: j + 1 });
            }
        }
        next.sort();
        level = next;
        pj = pj1;
    }
    Ok(level)
}

/// A residue whose `p`-adic Newton iteration converges to a root of `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedRoot {
    pub p: u64,
    /// Working precision `k`; the root is `residue mod p^k`.
    pub precision: u32,
    #[serde(with = "crate::dec")]
    pub residue: BigInt,
    /// `v_p(f(residue))`, capped at the precision.
    pub value_valuation: u32,
    pub derivative_valuation: u32,
}

/// Searches for an `r` with `v(f(r)) > 2 v(f'(r))`, which guarantees a root
/// in `Z_p`. For a squarefree monic `f` the search is exhaustive at
/// precision `2 v_p(disc f) + 1`, so `None` means `f` has no root in `Q_p`.
pub fn hensel_certified_root(f: &IntPoly, p: u64) -> Result<Option<CertifiedRoot>, HenselError> {
    let pb = BigInt::from(p);
    let v_disc = match f.degree() {
        Some(0) | None => return Ok(None),
        Some(1) => 0,
        Some(_) => match discriminant(f) {
            Ok(d) if !d.is_zero() => valuation(&d, &pb).expect("nonzero"),
            _ => return Ok(None),
        },
    };
    certified_root_at(f, p, v_disc)
}

/// As [`hensel_certified_root`], with `v_p(disc f)` supplied by the caller.
pub fn certified_root_at(f: &IntPoly, p: u64, v_disc: u32) -> Result<Option<CertifiedRoot>, HenselError> {
    let pb = BigInt::from(p);
    let k = 2 * v_disc + 1;
    let df = f.derivative();
    for r in roots_mod_prime_power(f, p, k)? {
        let fv = f.eval(&r);
        let dv = df.eval(&r);
        if dv.is_zero() {
            continue;
        }
        let vd = valuation(&dv, &pb).expect("nonzero");
        let vf = if fv.is_zero() { u32::MAX } else { valuation(&fv, &pb).expect("nonzero") };
        if vf > 2 * vd {
            return Ok(Some(CertifiedRoot {
                p,
                precision: k,
                residue: r,
                value_valuation: vf.min(k),
                derivative_valuation: vd,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn prime_power(p: u64, k: u32) -> BigInt {
        num_traits::pow(BigInt::from(p), k as usize)
    }

    fn exhaustive(f: &IntPoly, m: u64) -> Vec<BigInt> {
        let mb = BigInt::from(m);
        (0..m).map(BigInt::from).filter(|r| f.eval(r).is_multiple_of(&mb)).collect()
    }

    #[test]
    fn examples() {
        let x2m2 = p(&[-2, 0, 1]);
        assert_eq!(roots_mod_prime_power(&x2m2, 7, 2).unwrap(), vec![BigInt::from(10), BigInt::from(39)]);
        assert!(roots_mod_prime_power(&x2m2, 3, 1).unwrap().is_empty());
        let x2m5 = p(&[-5, 0, 1]);
        assert_eq!(roots_mod_prime_power(&x2m5, 5, 1).unwrap(), vec![BigInt::zero()]);
        assert!(roots_mod_prime_power(&x2m5, 5, 2).unwrap().is_empty());
    }

    #[test]
    fn singular_branches_match_exhaustive() {
        // x^2 has p^(k - ceil(k/2)) roots mod p^k
        let f = p(&[0, 0, 1]);
        for (q, k) in [(2u64, 5u32), (3, 4), (5, 3)] {
            let m = prime_power(q, k).try_into().unwrap();
            assert_eq!(roots_mod_prime_power(&f, q, k).unwrap(), exhaustive(&f, m));
        }
        let g = p(&[-8, 0, 0, 1]);
        assert_eq!(roots_mod_prime_power(&g, 2, 6).unwrap(), exhaustive(&g, 64));
    }

    #[test]
    fn certified_roots() {
        assert!(hensel_certified_root(&p(&[-2, 0, 1]), 7).unwrap().is_some());
        assert!(hensel_certified_root(&p(&[-2, 0, 1]), 5).unwrap().is_none());
        for q in [2u64, 3, 101] {
            assert!(hensel_certified_root(&p(&[-3, 1]), q).unwrap().is_some());
        }
        // -7 is a square in Q_2, 5 is not
        assert!(hensel_certified_root(&p(&[7, 0, 1]), 2).unwrap().is_some());
        assert!(hensel_certified_root(&p(&[-5, 0, 1]), 2).unwrap().is_none());
        assert!(hensel_certified_root(&p(&[-17, 0, 1]), 2).unwrap().is_some());
    }
}
