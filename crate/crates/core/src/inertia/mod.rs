//! Per-specialization certificates: irreducibility evidence, per-prime
//! inertia statuses, local field discriminants, real roots and the
//! quadratic twist.

mod round2;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois_id::{self, GaloisVerdict};
use crate::gate::{GateError, GcdData, Progression, Refinement, RESIDUE_PRIME_CAP};
use crate::intarith::{factor_with, primes_from, FactorBudget, FactoredInt};
use crate::modp::{degree_pattern, roots_mod_prime_power};
use crate::zpoly::{discriminant, specialize, squarefree_decomposition, sturm_real_roots, IntPoly};

pub use round2::{dedekind_test, local_field_disc_valuation, round2_only, LocalMaximality, Method};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InertiaError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("prime {0} is too large for local computations")]
    PrimeTooLarge(BigInt),
    #[error("some ramified prime has status Uncertified")]
    UncertifiedPrimesPresent,
    #[error("no ramified primes")]
    NoRamifiedPrimes,
    #[error("discriminant not completely factored")]
    PartialFactorization,
    #[error(transparent)]
    Gate(#[from] GateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrreducibilityStatus {
    Certified,
    Inconclusive,
    Reducible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Irreducibility {
    pub status: IrreducibilityStatus,
    /// A prime modulo which `f` is irreducible.
    pub prime: Option<u64>,
    pub primes_examined: usize,
    /// Degrees a rational factor could still have after the sieve.
    pub possible_factor_degrees: Vec<usize>,
    #[serde(with = "crate::dec")]
    pub rational_root: Option<BigInt>,
}

const SIEVE_MIN_PRIMES: usize = 20;
const SIEVE_MAX_PRIMES: usize = 300;

fn integer_root(f: &IntPoly, disc: &BigInt) -> Option<BigInt> {
    if !f.is_monic() {
        return None;
    }
    let bound: BigInt = f.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default() + 1;
    let p = primes_from(3).find(|&p| !disc.is_multiple_of(&BigInt::from(p)))?;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let roots = roots_mod_prime_power(f, p, k).ok()?;
    let half = &pk / 2;
    roots.into_iter().map(|r| if r > half { r - &pk } else { r }).find(|r| f.eval(r).is_zero())
}

/// Irreducible reduction, or a degree sieve over many primes, or a rational
/// root.
pub fn irreducibility_evidence(f: &IntPoly) -> Irreducibility {
    let n = f.deg();
    let all: Vec<usize> = (0..=n).collect();
    if n <= 1 {
        return Irreducibility {
            status: if n == 1 { IrreducibilityStatus::Certified } else { IrreducibilityStatus::Reducible },
            prime: None,
            primes_examined: 0,
            possible_factor_degrees: all,
            rational_root: None,
        };
    }
    let disc = discriminant(f).expect("degree at least 2") * f.lc();
    if disc.is_zero() {
        return Irreducibility {
            status: IrreducibilityStatus::Reducible,
            prime: None,
            primes_examined: 0,
            possible_factor_degrees: all,
            rational_root: None,
        };
    }
    if let Some(r) = integer_root(f, &disc) {
        return Irreducibility {
            status: IrreducibilityStatus::Reducible,
            prime: None,
            primes_examined: 0,
            possible_factor_degrees: vec![0, 1, n - 1, n],
            rational_root: Some(r),
        };
    }
    let mut possible: BTreeSet<usize> = all.iter().copied().collect();
    let mut examined = 0;
    for p in primes_from(2) {
        if disc.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        examined += 1;
        let pat = degree_pattern(f, p).degrees;
        if pat.len() == 1 {
            return Irreducibility {
                status: IrreducibilityStatus::Certified,
                prime: Some(p),
                primes_examined: examined,
                possible_factor_degrees: vec![0, n],
                rational_root: None,
            };
        }
        let mut sums: BTreeSet<usize> = [0].into_iter().collect();
        for d in pat {
            sums = sums.iter().flat_map(|&s| [s, s + d]).collect();
        }
        possible = possible.intersection(&sums).copied().collect();
        if examined >= SIEVE_MIN_PRIMES && possible.len() == 2 {
            return Irreducibility {
                status: IrreducibilityStatus::Certified,
                prime: None,
                primes_examined: examined,
                possible_factor_degrees: possible.into_iter().collect(),
                rational_root: None,
            };
        }
        if examined >= SIEVE_MAX_PRIMES {
            break;
        }
    }
    Irreducibility {
        status: IrreducibilityStatus::Inconclusive,
        prime: None,
        primes_examined: examined,
        possible_factor_degrees: possible.into_iter().collect(),
        rational_root: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InertiaStatus {
    UnramifiedCertified,
    InertiaLE2Certified,
    /// Divides `N`; no inertia bound applies.
    Exceptional,
    Uncertified,
}

impl InertiaStatus {
    pub fn is_certified(self) -> bool {
        matches!(self, InertiaStatus::UnramifiedCertified | InertiaStatus::InertiaLE2Certified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeStatus {
    /// A prime, or an unfactored block when `block` is set.
    #[serde(with = "crate::dec")]
    pub p: BigInt,
    pub block: bool,
    /// Exponent of `p` (or of the block) in `disc(f_c)`.
    pub disc_exponent: u32,
    pub status: InertiaStatus,
    /// Status before a local computation upgraded it.
    pub initial_status: InertiaStatus,
    pub local: Option<LocalMaximality>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationCertificate {
    #[serde(with = "crate::dec")]
    pub c: BigInt,
    #[serde(with = "crate::dec")]
    pub f_c: IntPoly,
    pub irreducible: Irreducibility,
    pub disc: FactoredInt,
    /// `n(n-1) D(f'(c, x))`.
    #[serde(with = "crate::dec")]
    pub f2_value: BigInt,
    /// Every prime not listed is unramified.
    pub prime_statuses: Vec<PrimeStatus>,
    pub all_certified: bool,
    pub in_progression: Option<bool>,
    pub real_roots: usize,
    pub galois_id: Option<GaloisVerdict>,
    #[serde(with = "crate::dec")]
    pub twist: Option<BigInt>,
}

impl SpecializationCertificate {
    pub fn status_of(&self, p: &BigInt) -> InertiaStatus {
        self.prime_statuses
            .iter()
            .find(|s| !s.block && &s.p == p)
            .map_or(InertiaStatus::UnramifiedCertified, |s| s.status)
    }

    pub fn ramified_candidates(&self) -> impl Iterator<Item = &PrimeStatus> {
        self.prime_statuses.iter().filter(|s| s.status != InertiaStatus::UnramifiedCertified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub budget: FactorBudget,
    /// Run local computations on exceptional and uncertified primes.
    pub local_upgrade: bool,
    /// Galois identification prime budget; 0 skips identification.
    pub galois_primes: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: FactorBudget { rho_iterations: 300_000, rho_max_bits: 300 },
            local_upgrade: true,
            galois_primes: 0,
        }
    }
}

/// Per-family state reused across specializations.
#[derive(Debug, Clone)]
pub struct Certifier {
    pub data: GcdData,
    /// Squarefree parts of `F1` with multiplicities, and the leftover scalar.
    f1_parts: Vec<(IntPoly, u32)>,
    f1_scalar: BigInt,
    pub options: CertifyOptions,
}

impl Certifier {
    pub fn new(data: GcdData, options: CertifyOptions) -> Self {
        let parts: Vec<(IntPoly, u32)> = squarefree_decomposition(&data.f1)
            .into_iter()
            .enumerate()
            .filter(|(_, a)| a.deg() > 0)
            .map(|(i, a)| (a, i as u32 + 1))
            .collect();
        let mut prod = IntPoly::one();
        for (a, e) in &parts {
            prod = &prod * &a.pow(*e as usize);
        }
        let f1_scalar = data.f1.lc() / prod.lc();
        Certifier { data, f1_parts: parts, f1_scalar, options }
    }

    /// `disc(f_c) = F1(c)`, factored piece by piece along the squarefree
    /// decomposition of `F1`. Returns the factorization and the unfactored
    /// blocks with their exponents.
    fn factor_disc(&self, c: &BigInt) -> (FactoredInt, Vec<(BigInt, u32)>) {
        let value = self.data.f1.eval(c);
        let mut pieces: Vec<(BigInt, u32)> = vec![(self.f1_scalar.clone(), 1)];
        pieces.extend(self.f1_parts.iter().map(|(a, e)| (a.eval(c), *e)));
        let mut factors: Vec<(BigInt, u32)> = Vec::new();
        let mut blocks: Vec<(BigInt, u32)> = Vec::new();
        for (v, e) in pieces {
            if v.abs().is_one() {
                continue;
            }
            let fact = factor_with(&v, self.options.budget).expect("nonzero discriminant piece");
            for (p, k) in fact.factors {
                match factors.iter_mut().find(|(q, _)| *q == p) {
                    Some(entry) => entry.1 += k * e,
                    None => factors.push((p, k * e)),
                }
            }
            if !fact.cofactor.is_one() {
                blocks.push((fact.cofactor, e));
            }
        }
        factors.sort();
        let cofactor = blocks.iter().fold(BigInt::one(), |acc, (b, e)| acc * num_traits::pow(b.clone(), *e as usize));
        let complete = blocks.is_empty();
        (FactoredInt { value, factors, cofactor, complete }, blocks)
    }

    fn local_upgrade(
        &self,
        f_c: &IntPoly,
        p: &BigInt,
        status: InertiaStatus,
    ) -> (InertiaStatus, Option<LocalMaximality>) {
        if !self.options.local_upgrade || status.is_certified() {
            return (status, None);
        }
        let Some(q) = p.to_u64().filter(|&q| q <= RESIDUE_PRIME_CAP) else { return (status, None) };
        match local_field_disc_valuation(f_c, q) {
            Ok(loc) if loc.field_disc_valuation == 0 => (InertiaStatus::UnramifiedCertified, Some(loc)),
            Ok(loc) => (status, Some(loc)),
            Err(_) => (status, None),
        }
    }

    /// Certificate for `f(c, x)`.
    pub fn certify(&self, c: &BigInt) -> Result<SpecializationCertificate, InertiaError> {
        let f_c = specialize(&self.data.f, c);
        if self.data.f1.eval(c).is_zero() {
            return Err(InertiaError::NotSeparable);
        }
        let (disc, blocks) = self.factor_disc(c);
        let f2_value = self.data.f2.eval(c);
        let mut statuses = Vec::new();
        for (p, e) in &disc.factors {
            let initial = if self.data.divides_n(p) {
                InertiaStatus::Exceptional
            } else if !f2_value.is_multiple_of(p) {
                InertiaStatus::InertiaLE2Certified
            } else {
                InertiaStatus::Uncertified
            };
            let (status, local) = self.local_upgrade(&f_c, p, initial);
            statuses.push(PrimeStatus {
                p: p.clone(),
                block: false,
                disc_exponent: *e,
                status,
                initial_status: initial,
                local,
            });
        }
        let guard = &f2_value * &self.data.n_value;
        for (b, e) in &blocks {
            // split off everything sharing a prime with F2(c) N
            let mut clean = b.clone();
            loop {
                let g = clean.gcd(&guard);
                if g.is_one() {
                    break;
                }
                clean /= g;
            }
            let dirty = b / &clean;
            for (part, status) in [(clean, InertiaStatus::InertiaLE2Certified), (dirty, InertiaStatus::Uncertified)] {
                if !part.is_one() {
                    statuses.push(PrimeStatus {
                        p: part,
                        block: true,
                        disc_exponent: *e,
                        status,
                        initial_status: status,
                        local: None,
                    });
                }
            }
        }
        let all_certified = statuses.iter().all(|s| s.status.is_certified());
        let real_roots = sturm_real_roots(&f_c).map_err(|_| InertiaError::NotSeparable)?.real_root_count;
        let galois_id = if self.options.galois_primes > 0 {
            galois_id::identify_default(&f_c, self.options.galois_primes).ok()
        } else {
            None
        };
        let irreducible = irreducibility_evidence(&f_c);
        let mut cert = SpecializationCertificate {
            c: c.clone(),
            f_c,
            irreducible,
            disc,
            f2_value,
            prime_statuses: statuses,
            all_certified,
            in_progression: None,
            real_roots,
            galois_id,
            twist: None,
        };
        cert.twist = quadratic_twist(&cert, false).ok();
        Ok(cert)
    }
}

/// Standalone certificate: builds the family data on the fly.
pub fn inertia_certificate(data: &GcdData, c: &BigInt) -> Result<SpecializationCertificate, InertiaError> {
    Certifier::new(data.clone(), CertifyOptions::default()).certify(c)
}

/// `a = -prod p` over the primes not certified unramified (`+prod` for the
/// real variant, which needs a totally real `f_c`).
pub fn quadratic_twist(cert: &SpecializationCertificate, real: bool) -> Result<BigInt, InertiaError> {
    if cert.prime_statuses.iter().any(|s| !s.status.is_certified()) {
        return Err(InertiaError::UncertifiedPrimesPresent);
    }
    if cert.prime_statuses.iter().any(|s| s.block) {
        return Err(InertiaError::PartialFactorization);
    }
    let primes: Vec<&BigInt> = cert.ramified_candidates().map(|s| &s.p).collect();
    if primes.is_empty() {
        return Err(InertiaError::NoRamifiedPrimes);
    }
    let prod = primes.into_iter().fold(BigInt::one(), |acc, p| acc * p);
    if real && cert.real_roots == cert.f_c.deg() {
        Ok(prod)
    } else {
        Ok(-prod)
    }
}

/// Where a scan draws its specializations from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanSource {
    /// Members `a, a - b, a + b, ...`.
    Progression(Progression),
    /// `start, start + step, ...`; members must pass the gcd check
    /// individually.
    Range {
        #[serde(with = "crate::dec")]
        start: BigInt,
        step: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFilters {
    pub totally_real: bool,
    pub unramified_at_two: bool,
    /// A Galois verdict must keep this group alive.
    pub claimed_group: Option<String>,
    pub require_all_certified: bool,
    pub max_examined: usize,
}

impl Default for ScanFilters {
    fn default() -> Self {
        ScanFilters {
            totally_real: false,
            unramified_at_two: false,
            claimed_group: None,
            require_all_certified: false,
            max_examined: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub source: ScanSource,
    pub requested: usize,
    pub examined: usize,
    pub certificates: Vec<SpecializationCertificate>,
    pub warning: Option<String>,
}

fn cheap_filters(certifier: &Certifier, c: &BigInt, filters: &ScanFilters, range: bool) -> bool {
    let d1 = certifier.data.f1.eval(c);
    if d1.is_zero() {
        return false;
    }
    if filters.unramified_at_two && d1.is_even() {
        return false;
    }
    if range && !certifier.data.is_witness(c) {
        return false;
    }
    if filters.totally_real {
        let f_c = specialize(&certifier.data.f, c);
        match sturm_real_roots(&f_c) {
            Ok(r) if r.real_root_count == f_c.deg() => {}
            _ => return false,
        }
    }
    true
}

fn passes(cert: &SpecializationCertificate, filters: &ScanFilters) -> bool {
    if cert.irreducible.status != IrreducibilityStatus::Certified {
        return false;
    }
    if filters.require_all_certified && !cert.all_certified {
        return false;
    }
    match (&filters.claimed_group, &cert.galois_id) {
        (Some(g), Some(v)) => v.survives(g),
        (Some(_), None) => false,
        _ => true,
    }
}

/// Certificates for the first `count` members passing every filter, in
/// walk order.
pub fn scan_progression(certifier: &Certifier, source: &ScanSource, count: usize, filters: &ScanFilters) -> ScanResult {
    let mut certificates = Vec::new();
    let mut examined = 0usize;
    let batch = count.max(rayon::current_num_threads()).min(64);
    let range = matches!(source, ScanSource::Range { .. });
    let mut walk: Box<dyn Iterator<Item = BigInt> + '_> = match source {
        ScanSource::Progression(p) => Box::new(p.walk()),
        ScanSource::Range { start, step } => {
            let (start, step) = (start.clone(), *step);
            Box::new((0i64..).map(move |i| &start + step * i))
        }
    };
    while certificates.len() < count && examined < filters.max_examined {
        let take = batch.min(filters.max_examined - examined);
        let cs: Vec<BigInt> = walk.by_ref().take(take).collect();
        examined += cs.len();
        let found: Vec<Option<SpecializationCertificate>> = cs
            .par_iter()
            .map(|c| {
                if !cheap_filters(certifier, c, filters, range) {
                    return None;
                }
                let mut cert = certifier.certify(c).ok()?;
                if let ScanSource::Progression(p) = source {
                    cert.in_progression = Some(p.contains(c));
                }
                passes(&cert, filters).then_some(cert)
            })
            .collect();
        certificates.extend(found.into_iter().flatten().take(count - certificates.len()));
    }
    let warning = (certificates.len() < count)
        .then(|| format!("only {} of {} certificates after {} members", certificates.len(), count, examined));
    ScanResult { source: source.clone(), requested: count, examined, certificates, warning }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    #[serde(with = "crate::dec")]
    pub c: BigInt,
    /// `(p, field valuation at t_ref, field valuation at c)`.
    pub valuations: Vec<(u64, u32, u32)>,
    pub agrees: bool,
}

/// Compares local field discriminants at the refinement primes between
/// `t_ref` and sampled members of the refined progression.
pub fn exceptional_spot_check(
    f: &crate::zpoly::BiPoly,
    refinement: &Refinement,
    samples: usize,
) -> Result<Vec<SpotCheck>, InertiaError> {
    let reference = specialize(f, &refinement.t_ref);
    let ref_vals: Vec<(u64, u32)> = refinement
        .exponents
        .iter()
        .map(|&(p, _)| local_field_disc_valuation(&reference, p).map(|l| (p, l.field_disc_valuation)))
        .collect::<Result<_, _>>()?;
    refinement
        .combined
        .walk()
        .take(samples)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|c| {
            let f_c = specialize(f, c);
            let mut valuations = Vec::new();
            for &(p, v_ref) in &ref_vals {
                valuations.push((p, v_ref, local_field_disc_valuation(&f_c, p)?.field_disc_valuation));
            }
            let agrees = valuations.iter().all(|(_, a, b)| a == b);
            Ok(SpotCheck { c: c.clone(), valuations, agrees })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::compute_n;
    use crate::presets;

    #[test]
    fn s3_at_two() {
        let data = compute_n(&presets::S3.f()).unwrap();
        let cert = inertia_certificate(&data, &BigInt::from(2)).unwrap();
        assert_eq!(cert.disc.value, BigInt::from(-59));
        assert_eq!(cert.prime_statuses.len(), 1);
        assert_eq!(cert.prime_statuses[0].p, BigInt::from(59));
        assert_eq!(cert.prime_statuses[0].status, InertiaStatus::InertiaLE2Certified);
        assert_eq!(cert.twist, Some(BigInt::from(-59)));
        assert_eq!(cert.irreducible.status, IrreducibilityStatus::Certified);
    }

    #[test]
    fn a5_at_minus_three() {
        let data = compute_n(&presets::A5.f()).unwrap();
        let cert = inertia_certificate(&data, &BigInt::from(-3)).unwrap();
        assert!(cert.all_certified);
        let primes: Vec<i64> = cert.prime_statuses.iter().map(|s| s.p.to_i64().unwrap()).collect();
        assert_eq!(primes, vec![3, 17, 3299]);
    }

    #[test]
    fn irreducibility() {
        let q = IntPoly::from_i64s(&[-24, 25, 0, -10, 0, 1]);
        assert_eq!(irreducibility_evidence(&q).status, IrreducibilityStatus::Certified);
        let r = irreducibility_evidence(&IntPoly::from_i64s(&[-1, 0, 1]));
        assert_eq!(r.status, IrreducibilityStatus::Reducible);
        assert!(r.rational_root.is_some());
        // (x^2 + 1)(x^2 + 2) has no rational root
        let s = irreducibility_evidence(&IntPoly::from_i64s(&[2, 0, 3, 0, 1]));
        assert_eq!(s.status, IrreducibilityStatus::Inconclusive);
        assert_eq!(s.possible_factor_degrees, vec![0, 2, 4]);
        let psl = specialize(&presets::PSL27.f(), &BigInt::zero());
        let e = irreducibility_evidence(&psl);
        assert_eq!((e.status, e.prime), (IrreducibilityStatus::Certified, Some(2)));
    }

    #[test]
    fn twist_errors() {
        let data = compute_n(&presets::S3.f()).unwrap();
        let mut cert = inertia_certificate(&data, &BigInt::from(2)).unwrap();
        cert.prime_statuses[0].status = InertiaStatus::Uncertified;
        assert_eq!(quadratic_twist(&cert, false), Err(InertiaError::UncertifiedPrimesPresent));
        cert.prime_statuses.clear();
        assert_eq!(quadratic_twist(&cert, false), Err(InertiaError::NoRamifiedPrimes));
    }

    #[test]
    fn s3_scan() {
        let f = presets::S3.f();
        let gate = crate::gate::run_gate(&f, &Default::default()).unwrap();
        let certifier = Certifier::new(gate.data.clone(), CertifyOptions::default());
        let src = ScanSource::Progression(gate.progression.clone());
        let res = scan_progression(&certifier, &src, 3, &ScanFilters::default());
        assert_eq!(res.certificates.len(), 3);
        for c in &res.certificates {
            assert!(c.all_certified);
            assert_eq!(c.in_progression, Some(true));
        }
        assert!(scan_progression(&certifier, &src, 0, &ScanFilters::default()).certificates.is_empty());
    }
}
