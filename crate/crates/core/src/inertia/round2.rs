//! Local maximality at a prime: Dedekind's criterion and the Round-2
//! enlargement of the equation order `Z[x]/(f)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::InertiaError;
use crate::intarith::valuation;
use crate::modp::{factor_mod, gcd_mod, ModPoly};
use crate::zpoly::{discriminant, IntPoly};

type Q = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Dedekind,
    Round2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMaximality {
    pub p: u64,
    pub dedekind_pass: bool,
    /// `v_p` of the discriminant of the maximal order.
    pub field_disc_valuation: u32,
    pub poly_disc_valuation: u32,
    /// `v_p([O_K : Z[x]/(f)])`.
    pub index_valuation: u32,
    pub method: Method,
    pub round2_steps: usize,
}

fn check_input(f: &IntPoly, p: u64) -> Result<u32, InertiaError> {
    if !f.is_monic() {
        return Err(InertiaError::NotMonic);
    }
    if p > crate::gate::RESIDUE_PRIME_CAP {
        return Err(InertiaError::PrimeTooLarge(BigInt::from(p)));
    }
    let d = discriminant(f).map_err(|_| InertiaError::NotSeparable)?;
    if d.is_zero() {
        return Err(InertiaError::NotSeparable);
    }
    Ok(valuation(&d, &BigInt::from(p)).expect("nonzero"))
}

fn lift(a: &ModPoly) -> IntPoly {
    IntPoly::new(a.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

/// Dedekind's criterion. A pass means `Z[x]/(f)` is `p`-maximal and the
/// field valuation is `v_p(disc f)`; a failure falls through to Round-2.
pub fn dedekind_test(f: &IntPoly, p: u64) -> Result<LocalMaximality, InertiaError> {
    let v = check_input(f, p)?;
    if dedekind_criterion(f, p) {
        return Ok(LocalMaximality {
            p,
            dedekind_pass: true,
            field_disc_valuation: v,
            poly_disc_valuation: v,
            index_valuation: 0,
            method: Method::Dedekind,
            round2_steps: 0,
        });
    }
    round2(f, p, v, false)
}

fn dedekind_criterion(f: &IntPoly, p: u64) -> bool {
    let fp = ModPoly::reduce(f, p);
    let factors = factor_mod(&fp);
    if factors.iter().all(|(_, e)| *e == 1) {
        return true;
    }
    let mut g = ModPoly::constant(p, 1);
    for (gi, _) in &factors {
        g = g.mul(gi);
    }
    let h = fp.div(&g);
    let (gz, hz) = (lift(&g), lift(&h));
    let diff = f - &(&gz * &hz);
    let big = diff.div_exact_scalar(&BigInt::from(p)).expect("g h = f mod p");
    let fbar = ModPoly::reduce(&big, p);
    let common = gcd_mod(&gcd_mod(&fbar, &g), &h);
    common.deg() == 0
}

/// Exact `v_p` of the discriminant of the maximal order of `Q[x]/(f)`.
pub fn local_field_disc_valuation(f: &IntPoly, p: u64) -> Result<LocalMaximality, InertiaError> {
    dedekind_test(f, p)
}

/// Round-2 even when Dedekind would already decide; used to cross-check.
pub fn round2_only(f: &IntPoly, p: u64) -> Result<LocalMaximality, InertiaError> {
    let v = check_input(f, p)?;
    let pass = dedekind_criterion(f, p);
    round2(f, p, v, pass)
}

fn round2(f: &IntPoly, p: u64, v: u32, dedekind_pass: bool) -> Result<LocalMaximality, InertiaError> {
    let mut order = Order::power_basis(f);
    let mut steps = 0;
    while let Some(next) = order.enlarge(p) {
        order = next;
        steps += 1;
    }
    let index_valuation = order.index_valuation(p);
    Ok(LocalMaximality {
        p,
        dedekind_pass,
        field_disc_valuation: v - 2 * index_valuation,
        poly_disc_valuation: v,
        index_valuation,
        method: Method::Round2,
        round2_steps: steps,
    })
}

/// An order given by a lower-triangular basis in power-basis coordinates,
/// with integer structure constants.
struct Order<'a> {
    f: &'a IntPoly,
    n: usize,
    basis: Vec<Vec<Q>>,
    table: Vec<Vec<Vec<BigInt>>>,
}

impl<'a> Order<'a> {
    fn power_basis(f: &'a IntPoly) -> Self {
        let n = f.deg();
        let basis = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        Self::with_basis(f, basis)
    }

    fn with_basis(f: &'a IntPoly, basis: Vec<Vec<Q>>) -> Self {
        let n = f.deg();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = mul_mod_f(&basis[i], &basis[j], f);
                let c: Vec<BigInt> = solve_lower(&basis, &prod)
                    .into_iter()
                    .map(|q| {
                        assert!(q.is_integer(), "order is closed under multiplication");
                        q.to_integer()
                    })
                    .collect();
                table[j][i] = c.clone();
                table[i][j] = c;
            }
        }
        Order { f, n, basis, table }
    }

    fn table_mod(&self, p: u64) -> Vec<Vec<Vec<u64>>> {
        let pb = BigInt::from(p);
        self.table
            .iter()
            .map(|row| {
                row.iter().map(|v| v.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect()).collect()
            })
            .collect()
    }

    /// The ring of multipliers of the `p`-radical, or `None` when the order
    /// is already `p`-maximal.
    fn enlarge(&self, p: u64) -> Option<Order<'a>> {
        let n = self.n;
        let tp = self.table_mod(p);
        let mut q: u64 = p;
        while (q as usize) < n {
            q *= p;
        }
        let frob: Vec<Vec<u64>> = (0..n).map(|i| pow_elem(&unit(n, i), q, &tp, p)).collect();
        let radical = left_kernel(&frob, p);
        let mut gens: Vec<Vec<BigInt>> = radical.iter().map(|v| v.iter().map(|&c| BigInt::from(c)).collect()).collect();
        gens.extend((0..n).map(|i| scaled_unit(n, i, p)));
        let ideal = hnf(gens, n);

        // alpha -> (beta_k -> alpha beta_k mod p I)
        let mut mult: Vec<Vec<u64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n * n);
            for beta in &ideal {
                let mut w = vec![BigInt::zero(); n];
                for (l, bl) in beta.iter().enumerate() {
                    if bl.is_zero() {
                        continue;
                    }
                    for (wk, t) in w.iter_mut().zip(&self.table[i][l]) {
                        *wk += bl * t;
                    }
                }
                let c = solve_lower_int(&ideal, &w);
                row.extend(c.iter().map(|x| x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")));
            }
            mult.push(row);
        }
        let kernel = left_kernel(&mult, p);
        if kernel.is_empty() {
            return None;
        }
        let mut gens: Vec<Vec<BigInt>> = kernel.iter().map(|v| v.iter().map(|&c| BigInt::from(c)).collect()).collect();
        gens.extend((0..n).map(|i| scaled_unit(n, i, p)));
        let u = hnf(gens, n);
        let pq = Q::from_integer(BigInt::from(p));
        let rows: Vec<Vec<Q>> = u
            .iter()
            .map(|r| {
                let mut acc = vec![Q::zero(); n];
                for (l, c) in r.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let c = Q::from_integer(c.clone()) / &pq;
                    for (a, b) in acc.iter_mut().zip(&self.basis[l]) {
                        *a += &c * b;
                    }
                }
                acc
            })
            .collect();
        Some(Order::with_basis(self.f, rational_hnf(rows, n)))
    }

    fn index_valuation(&self, p: u64) -> u32 {
        let pb = BigInt::from(p);
        let mut v: i64 = 0;
        for i in 0..self.n {
            let d = &self.basis[i][i];
            v += valuation(d.denom(), &pb).expect("nonzero") as i64;
            v -= valuation(d.numer(), &pb).expect("nonzero") as i64;
        }
        v.max(0) as u32
    }
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    (0..n).map(|j| u64::from(i == j)).collect()
}

fn scaled_unit(n: usize, i: usize, p: u64) -> Vec<BigInt> {
    (0..n).map(|j| if i == j { BigInt::from(p) } else { BigInt::zero() }).collect()
}

fn mul_elem(x: &[u64], y: &[u64], t: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
    let n = x.len();
    let mut out = vec![0u128; n];
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0 {
                continue;
            }
            let s = (x[i] as u128 * y[j] as u128) % p as u128;
            for (o, &c) in out.iter_mut().zip(&t[i][j]) {
                *o = (*o + s * c as u128) % p as u128;
            }
        }
    }
    out.into_iter().map(|c| c as u64).collect()
}

fn pow_elem(x: &[u64], mut e: u64, t: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
    let n = x.len();
    // lower-triangular bases start with 1, since the order meets Q in Z
    let mut acc = unit(n, 0);
    let mut base = x.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_elem(&acc, &base, t, p);
        }
        base = mul_elem(&base, &base, t, p);
        e >>= 1;
    }
    acc
}

/// Basis of `{x : x A = 0}` over `F_p` for an `m x k` matrix `A`.
fn left_kernel(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let k = a[0].len();
    // rows of A^T
    let mut t: Vec<Vec<u64>> = (0..k).map(|j| (0..m).map(|i| a[i][j]).collect()).collect();
    nullspace(&mut t, m, p)
}

fn nullspace(rows: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let inv = |a: u64| -> u64 {
        let (mut r, mut b, mut e) = (1u128, a as u128 % p as u128, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        r as u64
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let iv = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = (*x as u128 * iv as u128 % p as u128) as u64;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let (head, tail) = rows.split_at_mut(r.max(i));
                let (src, dst) = if i < r { (&tail[0], &mut head[i]) } else { (&head[r], &mut tail[0]) };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = ((*d as u128 + (p - f) as u128 * *s as u128) % p as u128) as u64;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[ri][fc]) % p;
            }
            v
        })
        .collect()
}

/// `a * b mod f` for coefficient vectors of length `deg f`.
fn mul_mod_f(a: &[Q], b: &[Q], f: &IntPoly) -> Vec<Q> {
    let n = f.deg();
    let mut prod = vec![Q::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    for k in (n..2 * n - 1).rev() {
        let c = std::mem::replace(&mut prod[k], Q::zero());
        if c.is_zero() {
            continue;
        }
        for j in 0..n {
            let fj = f.coeff(j);
            if !fj.is_zero() {
                prod[k - n + j] -= &c * Q::from_integer(fj.clone());
            }
        }
    }
    prod.truncate(n);
    prod
}

/// Solves `c B = v` for lower-triangular `B`.
fn solve_lower(b: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    let n = v.len();
    let mut c: Vec<Q> = vec![Q::zero(); n];
    for j in (0..n).rev() {
        let mut s = v[j].clone();
        for i in j + 1..n {
            if !b[i][j].is_zero() && !c[i].is_zero() {
                s -= &c[i] * &b[i][j];
            }
        }
        c[j] = s / &b[j][j];
    }
    c
}

fn solve_lower_int(b: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    let n = v.len();
    let mut c: Vec<BigInt> = vec![BigInt::zero(); n];
    for j in (0..n).rev() {
        let mut s = v[j].clone();
        for i in j + 1..n {
            s -= &c[i] * &b[i][j];
        }
        let (q, r) = s.div_rem(&b[j][j]);
        debug_assert!(r.is_zero(), "ideal is closed under the order");
        c[j] = q;
    }
    c
}

/// Row Hermite form of a full-column-rank integer matrix: `n` rows, row `i`
/// zero after column `i`, positive pivots, entries left of a pivot reduced
/// modulo the pivot of their column.
fn hnf(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for col in (0..n).rev() {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        loop {
            let idx = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[col].is_zero())
                .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
                .map(|(i, _)| i)
                .expect("matrix has full column rank");
            let pivot = rows.swap_remove(idx);
            let mut done = true;
            for r in rows.iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&pivot[col]);
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                done &= r[col].is_zero();
            }
            if done {
                out[col] = if pivot[col].is_negative() { pivot.into_iter().map(|x| -x).collect() } else { pivot };
                break;
            }
            rows.push(pivot);
        }
    }
    for j in 1..n {
        for i in (0..j).rev() {
            let q = out[j][i].div_floor(&out[i][i]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = out.split_at_mut(j);
            for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                *x -= &q * y;
            }
        }
    }
    out
}

fn rational_hnf(rows: Vec<Vec<Q>>, n: usize) -> Vec<Vec<Q>> {
    let den = rows.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|q| (q * Q::from_integer(den.clone())).to_integer()).collect()).collect();
    let dq = Q::from_integer(den);
    hnf(ints, n).into_iter().map(|r| r.into_iter().map(|x| Q::from_integer(x) / &dq).collect()).collect()
}
