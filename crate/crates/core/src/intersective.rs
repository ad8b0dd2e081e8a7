//! Intersective products: the sextic resolvent of a quintic, root evidence
//! modulo prime powers, and optimality certificates built from a subgroup
//! cover and per-prime inertia data.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois_id::GaloisVerdict;
use crate::groups::{self, CompatibilityReport, CoverDatum, GroupError, PermGroup};
use crate::inertia::{irreducibility_evidence, InertiaStatus, IrreducibilityStatus, SpecializationCertificate};
use crate::intarith::{primes_below, primes_from, valuation};
use crate::modp::{certified_root_at, roots_mod, roots_mod_prime_power, CertifiedRoot, ModPoly};
use crate::zpoly::{discriminant, IntPoly};

/// Default prime bound for root evidence.
pub const DEFAULT_EVIDENCE_BOUND: u64 = 10_000;

/// Resolvent primes start here, so residues fit a `u64` product in `u128`.
const RESOLVENT_PRIME_START: u64 = 1 << 31;
/// Extra split primes re-checked after reconstruction.
const AUDIT_PRIMES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectiveError {
    #[error("expected a quintic, got degree {0}")]
    NotQuintic(usize),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("modular audit disagrees with the reconstructed resolvent at p = {0}")]
    PrecisionFailure(u64),
    #[error("factor {0} has degree at most 1 or a rational root")]
    TrivialFactor(usize),
    #[error("factor {0} is not certified irreducible")]
    FactorNotIrreducible(usize),
    #[error("cover check failed: {0}")]
    CoverFails(String),
    #[error("prime {0} is not certified")]
    InertiaUncertified(String),
    #[error("Galois identification does not single out {group}: surviving {surviving:?}")]
    GaloisIDAmbiguous { group: String, surviving: Vec<String> },
    #[error("{m} factors given, cover needs {expected}")]
    FactorCountMismatch { m: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Cycle orders `(l0 .. l4)` of the six pentagons on five labels, one per
/// coset of `F20` in `S5`. A pentagon and its star share a coset.
fn labelings() -> Vec<[usize; 5]> {
    fn edges(l: &[usize; 5], step: usize) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = (0..5)
            .map(|i| {
                let (a, b) = (l[i], l[(i + step) % 5]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort();
        e
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut rest = [1usize, 2, 3, 4];
    permute(&mut rest, 0, &mut |perm| {
        let l = [0, perm[0], perm[1], perm[2], perm[3]];
        let (a, b) = (edges(&l, 1), edges(&l, 2));
        if seen.insert(if a < b { (a, b) } else { (b, a) }) {
            out.push(l);
        }
    });
    out
}

fn permute(xs: &mut [usize; 4], k: usize, visit: &mut impl FnMut(&[usize; 4])) {
    if k == xs.len() {
        visit(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, visit);
        xs.swap(k, i);
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `(sum x_i x_{i+1} - sum x_i x_{i+2})^2` along the pentagon `l`.
fn theta(r: &[u64], l: &[usize; 5], p: u64) -> u64 {
    let mut d = 0u64;
    for i in 0..5 {
        let a = mulmod(r[l[i]], r[l[(i + 1) % 5]], p);
        let b = mulmod(r[l[i]], r[l[(i + 2) % 5]], p);
        d = (d + a + p - b) % p;
    }
    mulmod(d, d, p)
}

/// The resolvent modulo `p`, when the quintic splits into distinct linear
/// factors there.
fn resolvent_mod(q: &IntPoly, p: u64, labels: &[[usize; 5]]) -> Option<Vec<u64>> {
    let qp = ModPoly::reduce(q, p);
    if qp.deg() != 5 {
        return None;
    }
    let roots = roots_mod(&qp);
    if roots.len() != 5 {
        return None;
    }
    let mut poly = vec![1u64];
    for l in labels {
        let th = theta(&roots, l, p);
        // poly *= (y - th)
        let mut next = vec![0u64; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - mulmod(c, th, p)) % p;
        }
        poly = next;
    }
    Some(poly)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SexticResolvent {
    #[serde(with = "crate::dec")]
    pub quintic: IntPoly,
    #[serde(with = "crate::dec")]
    pub sextic: IntPoly,
    /// Split primes combined by CRT.
    pub primes_used: usize,
    pub modulus_bits: u64,
    /// Bits of the a priori coefficient bound.
    pub bound_bits: u64,
    pub audit_primes: Vec<u64>,
}

/// Monic sextic whose roots are the six values of
/// `(x1x2 + x2x3 + x3x4 + x4x5 + x5x1 - x1x3 - x3x5 - x5x2 - x2x4 - x4x1)^2`
/// over the roots of `quintic`. Its stabilizer is `F20`, which meets `A5` in
/// `D5`.
///
/// Computed modulo primes where the quintic splits completely and lifted by
/// CRT past twice the bound `64 (100 R^4)^6`, `R = 1 + max |a_i|`.
pub fn sextic_resolvent_report(quintic: &IntPoly) -> Result<SexticResolvent, IntersectiveError> {
    if quintic.deg() != 5 {
        return Err(IntersectiveError::NotQuintic(quintic.deg()));
    }
    if !quintic.is_monic() {
        return Err(IntersectiveError::NotMonic);
    }
    let disc = discriminant(quintic).map_err(|_| IntersectiveError::NotSeparable)?;
    if disc.is_zero() {
        return Err(IntersectiveError::NotSeparable);
    }
    let r: BigInt = quintic.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default() + 1;
    let bound: BigInt = num_traits::pow(r.pow(4) * 100, 6) * 64;
    let target = &bound * 2;
    let labels = labelings();
    let mut coeffs = vec![BigInt::zero(); 7];
    let mut modulus = BigInt::one();
    let mut used = 0usize;
    let mut primes = primes_from(RESOLVENT_PRIME_START).filter(|&p| !disc.is_multiple_of(&BigInt::from(p)));
    while modulus <= target {
        let p = primes.next().expect("primes are infinite");
        let Some(res) = resolvent_mod(quintic, p, &labels) else { continue };
        let pb = BigInt::from(p);
        let inv = modulus.mod_floor(&pb).modinv(&pb).expect("distinct primes");
        for (c, &rp) in coeffs.iter_mut().zip(&res) {
            let delta = ((BigInt::from(rp) - &*c) * &inv).mod_floor(&pb);
            *c += delta * &modulus;
        }
        modulus *= pb;
        used += 1;
    }
    let half = &modulus / 2;
    let sextic = IntPoly::new(coeffs.into_iter().map(|c| if c > half { c - &modulus } else { c }).collect());
    let mut audit_primes = Vec::new();
    while audit_primes.len() < AUDIT_PRIMES {
        let p = primes.next().expect("primes are infinite");
        let Some(res) = resolvent_mod(quintic, p, &labels) else { continue };
        if ModPoly::reduce(&sextic, p).coeffs() != ModPoly::new(p, res).coeffs() {
            return Err(IntersectiveError::PrecisionFailure(p));
        }
        audit_primes.push(p);
    }
    Ok(SexticResolvent {
        quintic: quintic.clone(),
        sextic,
        primes_used: used,
        modulus_bits: modulus.bits(),
        bound_bits: bound.bits(),
        audit_primes,
    })
}

pub fn sextic_resolvent(quintic: &IntPoly) -> Result<IntPoly, IntersectiveError> {
    sextic_resolvent_report(quintic).map(|r| r.sextic)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootEvidence {
    /// Factor `factor` has a root in `Z_p`.
    Root {
        factor: usize,
        root: CertifiedRoot,
    },
    /// The product has no root modulo `p^k`.
    NoRoot {
        p: u64,
        k: u32,
    },
    Unresolved {
        p: u64,
        reason: String,
    },
}

impl RootEvidence {
    pub fn prime(&self) -> u64 {
        match self {
            RootEvidence::Root { root, .. } => root.p,
            RootEvidence::NoRoot { p, .. } | RootEvidence::Unresolved { p, .. } => *p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceTable {
    pub bound: u64,
    pub rows: Vec<RootEvidence>,
}

impl EvidenceTable {
    /// First prime at which the product provably has no root.
    pub fn refutation(&self) -> Option<(u64, u32)> {
        self.rows.iter().find_map(|r| match r {
            RootEvidence::NoRoot { p, k } => Some((*p, *k)),
            _ => None,
        })
    }

    pub fn unresolved(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r, RootEvidence::Unresolved { .. })).count()
    }

    /// A `Z_p`-root for every prime up to the bound.
    pub fn complete(&self) -> bool {
        self.rows.iter().all(|r| matches!(r, RootEvidence::Root { .. }))
    }

    pub fn root_at(&self, p: u64) -> Option<&CertifiedRoot> {
        self.rows.iter().find_map(|r| match r {
            RootEvidence::Root { root, .. } if root.p == p => Some(root),
            _ => None,
        })
    }
}

fn evidence_at(
    factors: &[IntPoly],
    discs: &[BigInt],
    product: &IntPoly,
    product_disc: &BigInt,
    p: u64,
) -> RootEvidence {
    let pb = BigInt::from(p);
    for (i, (g, d)) in factors.iter().zip(discs).enumerate() {
        if g.deg() == 0 || d.is_zero() {
            continue;
        }
        let v = valuation(d, &pb).expect("nonzero");
        match certified_root_at(g, p, v) {
            Ok(Some(root)) => return RootEvidence::Root { factor: i, root },
            Ok(None) => {}
            Err(e) => return RootEvidence::Unresolved { p, reason: e.to_string() },
        }
    }
    if product_disc.is_zero() {
        return RootEvidence::Unresolved { p, reason: "factors share a root".to_string() };
    }
    // No Q_p-root, so the roots mod p^k die out for some k.
    let cap = 2 * valuation(product_disc, &pb).expect("nonzero") + 2;
    for k in 1..=cap {
        match roots_mod_prime_power(product, p, k) {
            Ok(r) if r.is_empty() => return RootEvidence::NoRoot { p, k },
            Ok(_) => {}
            Err(e) => return RootEvidence::Unresolved { p, reason: e.to_string() },
        }
    }
    RootEvidence::Unresolved { p, reason: format!("roots persist to p^{cap}") }
}

/// Root evidence for `prod g_i` at every prime `p <= bound`. A factor root
/// is searched modulo `p^(2v+1)` with `v = v_p(disc g_i)`.
pub fn roots_mod_all(factors: &[IntPoly], bound: u64) -> EvidenceTable {
    let discs: Vec<BigInt> = factors
        .iter()
        .map(|g| if g.deg() >= 2 { discriminant(g).unwrap_or_default() } else { BigInt::one() })
        .collect();
    let product = factors.iter().fold(IntPoly::one(), |acc, g| &acc * g);
    let product_disc = if product.deg() >= 2 { discriminant(&product).unwrap_or_default() } else { BigInt::one() };
    let primes = primes_below(u32::try_from(bound.saturating_add(1)).unwrap_or(u32::MAX));
    let rows = primes.par_iter().map(|&p| evidence_at(factors, &discs, &product, &product_disc, p as u64)).collect();
    EvidenceTable { bound, rows }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateStatus {
    EmpiricallyIntersective {
        bound: u64,
    },
    #[serde(rename = "certified_given_galois_id")]
    CertifiedGivenGaloisID,
    Refuted {
        p: u64,
        k: u32,
    },
}

/// A subgroup cover together with its tame decomposition-group check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub group: String,
    pub datum: CoverDatum,
    pub compatibility: CompatibilityReport,
}

impl CoverSpec {
    pub fn build(group: &str, g: &PermGroup, subgroups: &[(&str, &PermGroup)]) -> Result<Self, GroupError> {
        let datum = groups::conjugate_cover_check(g, subgroups)?;
        let hs: Vec<&PermGroup> = subgroups.iter().map(|(_, h)| *h).collect();
        let compatibility = groups::decomposition_compatibility(g, &hs, 2)?;
        Ok(CoverSpec { group: group.to_string(), datum, compatibility })
    }
}

/// `A5` covered by `A4` (quintic root stabilizer) and `D5` (sextic root
/// stabilizer), in factor order.
pub fn a5_cover() -> Result<CoverSpec, GroupError> {
    let (g, a4, d5) = (groups::a5()?, groups::a4()?, groups::d5()?);
    CoverSpec::build("A5", &g, &[("A4", &a4), ("D5", &d5)])
}

/// `PSL(3,3)` covered by a point stabilizer and a Sylow 13-subgroup.
pub fn psl33_cover() -> Result<CoverSpec, GroupError> {
    let g = groups::psl33()?;
    let stab = groups::point_stabilizer(&g, 0);
    let x = *g.elements().iter().find(|p| p.order() == 13).expect("PSL(3,3) has order-13 elements");
    let syl = groups::cyclic_subgroup(&g, &x)?;
    CoverSpec::build("PSL(3,3)", &g, &[("point stabilizer", &stab), ("Sylow-13", &syl)])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectiveCandidate {
    #[serde(with = "crate::dec")]
    pub factors: Vec<IntPoly>,
    pub m: usize,
    pub group: String,
    pub cover: CoverSpec,
    pub empirical: EvidenceTable,
    pub status: CandidateStatus,
    /// `m = s(G)`.
    pub optimal: bool,
    /// Each step of the argument, in order.
    pub reasoning: Vec<String>,
}

fn check_factors(factors: &[IntPoly]) -> Result<(), IntersectiveError> {
    for (i, g) in factors.iter().enumerate() {
        if g.deg() <= 1 {
            return Err(IntersectiveError::TrivialFactor(i));
        }
        match irreducibility_evidence(g).status {
            IrreducibilityStatus::Certified => {}
            IrreducibilityStatus::Reducible => return Err(IntersectiveError::TrivialFactor(i)),
            IrreducibilityStatus::Inconclusive => return Err(IntersectiveError::FactorNotIrreducible(i)),
        }
    }
    Ok(())
}

fn empirical_status(table: &EvidenceTable) -> CandidateStatus {
    match table.refutation() {
        Some((p, k)) => CandidateStatus::Refuted { p, k },
        None => CandidateStatus::EmpiricallyIntersective { bound: table.bound },
    }
}

/// Factors checked nontrivial and irreducible, then root evidence only.
pub fn empirical_candidate(
    cover: &CoverSpec,
    factors: &[IntPoly],
    bound: u64,
) -> Result<IntersectiveCandidate, IntersectiveError> {
    check_factors(factors)?;
    let empirical = roots_mod_all(factors, bound);
    let status = empirical_status(&empirical);
    Ok(IntersectiveCandidate {
        factors: factors.to_vec(),
        m: factors.len(),
        group: cover.group.clone(),
        cover: cover.clone(),
        status,
        optimal: cover.datum.s_value == Some(factors.len()),
        reasoning: vec![format!("root evidence for p <= {bound}")],
        empirical,
    })
}

/// Full argument: the cover and its decomposition check handle unramified
/// and tamely ramified primes given the Galois group, inertia certificates
/// bound the ramified ones, and exceptional primes need a `p`-adic root.
pub fn certify_optimal(
    realization: &SpecializationCertificate,
    galois: &GaloisVerdict,
    cover: &CoverSpec,
    factors: &[IntPoly],
    bound: u64,
) -> Result<IntersectiveCandidate, IntersectiveError> {
    let mut reasoning = Vec::new();
    let d = &cover.datum;
    if !d.is_cover {
        return Err(IntersectiveError::CoverFails(format!("{} elements uncovered", d.uncovered)));
    }
    if !d.trivial_intersection {
        return Err(IntersectiveError::CoverFails("intersection of conjugates is nontrivial".to_string()));
    }
    if !cover.compatibility.compatible {
        return Err(IntersectiveError::CoverFails(format!(
            "decomposition groups outside the cover: {:?}",
            cover.compatibility.minimal_offender_types
        )));
    }
    reasoning.push(format!(
        "{} = union of conjugates of {:?}, trivial core; {} admissible decomposition groups all inside a conjugate",
        cover.group, d.subgroups, cover.compatibility.admissible_subgroups
    ));
    if factors.len() != d.m {
        return Err(IntersectiveError::FactorCountMismatch { m: factors.len(), expected: d.m });
    }
    if galois.identified().map(|g| g.eq_ignore_ascii_case(&cover.group)) != Some(true) {
        return Err(IntersectiveError::GaloisIDAmbiguous {
            group: cover.group.clone(),
            surviving: galois.surviving.clone(),
        });
    }
    reasoning
        .push(format!("Galois group identified as {} from {} Frobenius samples", cover.group, galois.samples_used));
    check_factors(factors)?;
    reasoning.push(format!("{} factors, each irreducible of degree > 1", factors.len()));
    let empirical = roots_mod_all(factors, bound);
    for s in &realization.prime_statuses {
        match s.status {
            InertiaStatus::UnramifiedCertified | InertiaStatus::InertiaLE2Certified => {}
            InertiaStatus::Exceptional => {
                let root = u64::try_from(&s.p).ok().and_then(|p| {
                    if p <= bound {
                        empirical.root_at(p).cloned()
                    } else {
                        let single = roots_mod_all_at(factors, p);
                        match single {
                            RootEvidence::Root { root, .. } => Some(root),
                            _ => None,
                        }
                    }
                });
                if root.is_none() {
                    return Err(IntersectiveError::InertiaUncertified(s.p.to_string()));
                }
                reasoning.push(format!("exceptional prime {} has a p-adic root", s.p));
            }
            InertiaStatus::Uncertified => return Err(IntersectiveError::InertiaUncertified(s.p.to_string())),
        }
    }
    reasoning.push("every ramified prime has inertia of order at most 2".to_string());
    let status = match empirical.refutation() {
        Some((p, k)) => CandidateStatus::Refuted { p, k },
        None => CandidateStatus::CertifiedGivenGaloisID,
    };
    let optimal = d.s_value == Some(factors.len());
    if optimal {
        reasoning.push(format!("m = {} = s({})", factors.len(), cover.group));
    }
    Ok(IntersectiveCandidate {
        factors: factors.to_vec(),
        m: factors.len(),
        group: cover.group.clone(),
        cover: cover.clone(),
        empirical,
        status,
        optimal,
        reasoning,
    })
}

/// Root evidence at a single prime.
pub fn roots_mod_all_at(factors: &[IntPoly], p: u64) -> RootEvidence {
    let discs: Vec<BigInt> = factors.iter().map(|g| discriminant(g).unwrap_or_default()).collect();
    let product = factors.iter().fold(IntPoly::one(), |acc, g| &acc * g);
    let product_disc = discriminant(&product).unwrap_or_default();
    evidence_at(factors, &discs, &product, &product_disc, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::sturm_real_roots;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn six_cosets() {
        assert_eq!(labelings().len(), 6);
    }

    #[test]
    fn cyclic_quintic_has_rational_resolvent_root() {
        // real subfield of the 11th cyclotomic field
        let q = p(&[1, 3, -3, -4, 1, 1]);
        let s = sextic_resolvent(&q).unwrap();
        assert_eq!(s.deg(), 6);
        assert!(s.is_monic());
        assert_eq!(irreducibility_evidence(&s).status, IrreducibilityStatus::Reducible);
    }

    #[test]
    fn a5_resolvent_is_irreducible() {
        let q = p(&[-24, 25, 0, -10, 0, 1]);
        let r = sextic_resolvent_report(&q).unwrap();
        assert!(r.modulus_bits > r.bound_bits);
        assert_eq!(irreducibility_evidence(&r.sextic).status, IrreducibilityStatus::Certified);
        assert!(sturm_real_roots(&r.sextic).is_ok());
    }

    #[test]
    fn relabelled_roots_give_the_same_sextic() {
        let q = p(&[-24, 25, 0, -10, 0, 1]);
        let labels = labelings();
        let prime = primes_from(1000).find(|&x| roots_mod(&ModPoly::reduce(&q, x)).len() == 5).unwrap();
        let roots = roots_mod(&ModPoly::reduce(&q, prime));
        let base = resolvent_mod(&q, prime, &labels).unwrap();
        let mut perm = [0usize, 1, 2, 3];
        permute(&mut perm, 0, &mut |s| {
            let moved: Vec<u64> =
                [roots[0], roots[1 + s[0]], roots[1 + s[1]], roots[1 + s[2]], roots[1 + s[3]]].to_vec();
            let mut poly = vec![1u64];
            for l in &labels {
                let th = theta(&moved, l, prime);
                let mut next = vec![0u64; poly.len() + 1];
                for (i, &c) in poly.iter().enumerate() {
                    next[i + 1] = (next[i + 1] + c) % prime;
                    next[i] = (next[i] + prime - mulmod(c, th, prime)) % prime;
                }
                poly = next;
            }
            assert_eq!(poly, base);
        });
    }

    #[test]
    fn evidence_examples() {
        let t = roots_mod_all(&[p(&[-2, 0, 1]), p(&[-3, 0, 1]), p(&[-6, 0, 1])], 200);
        // 2, 3 and 6 are all non-squares in Q_2 and in Q_3
        let refuted: Vec<u64> =
            t.rows.iter().filter(|r| matches!(r, RootEvidence::NoRoot { .. })).map(RootEvidence::prime).collect();
        assert_eq!(refuted, vec![2, 3]);
        assert!(t.rows.iter().filter(|r| r.prime() > 3).all(|r| matches!(r, RootEvidence::Root { .. })));
        let good = roots_mod_all(&[p(&[-13, 0, 1]), p(&[-17, 0, 1]), p(&[-221, 0, 1])], 2000);
        assert!(good.complete(), "{:?}", good.rows.iter().find(|r| !matches!(r, RootEvidence::Root { .. })));
        let u = roots_mod_all(&[p(&[1, 0, 1])], 100);
        assert_eq!(u.refutation(), Some((2, 2)));
        assert!(u.rows.contains(&RootEvidence::NoRoot { p: 3, k: 1 }));
        for row in &t.rows {
            if let RootEvidence::Root { factor, root } = row {
                let g = [p(&[-2, 0, 1]), p(&[-3, 0, 1]), p(&[-6, 0, 1])][*factor].clone();
                let pk = num_traits::pow(BigInt::from(root.p), root.value_valuation.min(root.precision) as usize);
                assert!(g.eval(&root.residue).is_multiple_of(&pk));
            }
        }
    }
}
