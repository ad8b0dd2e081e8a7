//! The fixed-divisor gate: `N`, witnesses, bad primes, and the arithmetic
//! progression of specializations along which `gcd(F1(c), F2(c))` stays
//! supported on the primes of `N`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intarith::{self, factor_with, prime_support_within, strip_primes, valuation, ArithError, FactorBudget};
use crate::modp::{gcd_mod, residue, roots_mod, ModPoly};
use crate::zpoly::{
    content, discriminant, normalized_derivative, resultant, specialize, squarefree_decomposition, BiPoly, IntPoly,
    PolyError,
};

/// Largest prime whose residues are computed; above this only the witness
/// residue is tested.
pub const RESIDUE_PRIME_CAP: u64 = 1 << 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("f is not monic in x")]
    NotMonic,
    #[error("x-degree {0} is too low; need at least 3")]
    DegreeTooLow(usize),
    #[error("f is not separable in x")]
    NotSeparable,
    #[error("gcd of D(f) and n(n-1)D(f') is not constant: {0}")]
    NonConstantGcd(String),
    #[error("no witness c with {lo} <= c <= {hi}")]
    NoWitnessInRange { lo: i64, hi: i64 },
    #[error("{c} is not a witness")]
    NotAWitness { c: BigInt },
    #[error("every residue mod {p} is bad; the fixed-divisor hypothesis fails")]
    FixedDivisorViolated { p: BigInt },
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(BigInt, BigInt),
    #[error("f({t}, x) is not separable")]
    SingularReference { t: BigInt },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<ArithError> for GateError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::NonCoprimeModuli(a, b) => GateError::NonCoprimeModuli(a, b),
            other => unreachable!("gate arithmetic on validated input: {other}"),
        }
    }
}

/// `c ≡ a (mod b)`, `0 <= a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    #[serde(with = "crate::dec")]
    pub a: BigInt,
    #[serde(with = "crate::dec")]
    pub b: BigInt,
}

impl Progression {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        let a = a.mod_floor(&b);
        Progression { a, b }
    }

    pub fn trivial() -> Self {
        Progression { a: BigInt::zero(), b: BigInt::one() }
    }

    pub fn contains(&self, c: &BigInt) -> bool {
        (c - &self.a).mod_floor(&self.b).is_zero()
    }

    /// `a + i b`.
    pub fn member(&self, i: i64) -> BigInt {
        &self.a + &self.b * i
    }

    /// Members ordered `a, a - b, a + b, a - 2b, ...`.
    pub fn walk(&self) -> impl Iterator<Item = BigInt> + '_ {
        (0i64..).map(|k| if k % 2 == 1 { self.member(-(k + 1) / 2) } else { self.member(k / 2) })
    }
}

impl std::fmt::Display for Progression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}Z", self.a, self.b)
    }
}

/// `F1 = D(f)`, `F2 = n(n-1) D(f')` and their constant gcd `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdData {
    #[serde(with = "crate::dec")]
    pub f: BiPoly,
    pub n: usize,
    #[serde(with = "crate::dec")]
    pub f1: IntPoly,
    #[serde(with = "crate::dec")]
    pub f2: IntPoly,
    #[serde(with = "crate::dec")]
    pub n_value: BigInt,
    /// Primes of `N`; a composite entry means `N` did not factor.
    #[serde(with = "crate::dec")]
    pub n_support: Vec<BigInt>,
    #[serde(with = "crate::dec")]
    pub g1: IntPoly,
    #[serde(with = "crate::dec")]
    pub g2: IntPoly,
}

impl GcdData {
    /// `gcd(F1(c), F2(c))`, or `None` when `f(c, x)` is inseparable.
    pub fn gcd_at(&self, c: &BigInt) -> Option<BigInt> {
        let v1 = self.f1.eval(c);
        if v1.is_zero() {
            return None;
        }
        Some(v1.gcd(&self.f2.eval(c)))
    }

    /// Hypothesis (ii) at `c`.
    pub fn is_witness(&self, c: &BigInt) -> bool {
        self.gcd_at(c).is_some_and(|g| prime_support_within(&g, &self.n_support).unwrap_or(false))
    }

    pub fn divides_n(&self, p: &BigInt) -> bool {
        self.n_value.is_multiple_of(p)
    }
}

/// Computes `F1`, `F2`, `N = gcd_Z(F1, F2)` and `G_i = F_i / N`.
pub fn compute_n(f: &BiPoly) -> Result<GcdData, GateError> {
    let n = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if !f.is_monic() {
        return Err(GateError::NotMonic);
    }
    if n < 3 {
        return Err(GateError::DegreeTooLow(n));
    }
    let f1 = discriminant(f)?;
    if f1.is_zero() {
        return Err(GateError::NotSeparable);
    }
    let scale = BigInt::from(n * (n - 1));
    let f2 = discriminant(&normalized_derivative(f)?)?.scale(&scale);
    let g = crate::zpoly::gcd_z(&f1, &f2);
    if g.deg() > 0 {
        return Err(GateError::NonConstantGcd(g.display_with("t")));
    }
    let n_value = g.coeff(0).clone();
    let g1 = f1.div_exact_scalar(&n_value).expect("N divides F1");
    let g2 = f2.div_exact_scalar(&n_value).expect("N divides F2");
    let fact = intarith::factor(&n_value).expect("N is nonzero");
    let mut n_support: Vec<BigInt> = fact.primes().cloned().collect();
    if !fact.cofactor.is_one() {
        n_support.push(fact.cofactor.clone());
    }
    Ok(GcdData { f: f.clone(), n, f1, f2, n_value, n_support, g1, g2 })
}

/// Smallest `|c|` in `[lo, hi]` passing the support check; ties go to the
/// positive value.
pub fn find_witness(data: &GcdData, lo: i64, hi: i64) -> Result<BigInt, GateError> {
    const BLOCK: i64 = 512;
    let max_abs = lo.unsigned_abs().max(hi.unsigned_abs()) as i64;
    let mut start = 0i64;
    while start <= max_abs {
        let end = (start + BLOCK).min(max_abs + 1);
        let hit = (start..end)
            .into_par_iter()
            .flat_map_iter(|m| if m == 0 { vec![0] } else { vec![-m, m] })
            .filter(|c| (lo..=hi).contains(c))
            .filter(|c| data.is_witness(&BigInt::from(*c)))
            .min_by_key(|c| (c.abs(), *c < 0));
        if let Some(c) = hit {
            return Ok(BigInt::from(c));
        }
        start = end;
    }
    Err(GateError::NoWitnessInRange { lo, hi })
}

/// How the bad residues of a prime were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidueScan {
    /// Common roots of `G1` and `G2` mod `p`: the complete bad set.
    Complete,
    /// Prime too large; only the witness residue was checked.
    WitnessOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPrime {
    #[serde(with = "crate::dec")]
    pub p: BigInt,
    pub bad_residues: Vec<u64>,
    pub chosen: Option<u64>,
    pub scan: ResidueScan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPrimeTable {
    /// Candidate primes not dividing `N`, each with a nonempty bad set.
    pub primes: Vec<BadPrime>,
    /// Candidates examined, including those with no bad residue.
    pub candidates_examined: usize,
    /// Resultant parts that did not factor; primes hidden there are caught
    /// by the per-member gcd check.
    #[serde(with = "crate::dec")]
    pub unfactored: Vec<BigInt>,
}

fn common_roots(g1: &IntPoly, g2: &IntPoly, p: u64) -> Vec<u64> {
    let (a, b) = (ModPoly::reduce(g1, p), ModPoly::reduce(g2, p));
    match (a.is_zero(), b.is_zero()) {
        (true, true) => (0..p).collect(),
        (true, false) => roots_mod(&b),
        (false, true) => roots_mod(&a),
        (false, false) => roots_mod(&gcd_mod(&a, &b)),
    }
}

/// Primes `p ∤ N` at which `G1` and `G2` have a common root, with the roots.
///
/// Candidates come from the contents of `G1`, `G2` and the resultants of
/// their squarefree parts, which cover every prime of `Res(G1, G2)`.
pub fn bad_primes(g1: &IntPoly, g2: &IntPoly, n_value: &BigInt, budget: FactorBudget) -> BadPrimeTable {
    let mut to_factor: Vec<BigInt> = Vec::new();
    let (c1, c2) = (content(g1), content(g2));
    if g1.deg() > 0 || g2.deg() > 0 {
        to_factor.push(c1.clone());
        to_factor.push(c2.clone());
    }
    let lc_gcd = g1.lc().gcd(&g2.lc());
    to_factor.push(lc_gcd);
    let parts1: Vec<IntPoly> = squarefree_decomposition(g1).into_iter().filter(|a| a.deg() > 0).collect();
    let parts2: Vec<IntPoly> = squarefree_decomposition(g2).into_iter().filter(|a| a.deg() > 0).collect();
    let pairs: Vec<(&IntPoly, &IntPoly)> = parts1.iter().flat_map(|a| parts2.iter().map(move |b| (a, b))).collect();
    to_factor.extend(pairs.par_iter().map(|(a, b)| resultant(*a, *b)).collect::<Vec<_>>());

    let n_primes: Vec<BigInt> = intarith::factor(n_value).map(|f| f.primes().cloned().collect()).unwrap_or_default();
    let mut candidates: BTreeSet<BigInt> = BTreeSet::new();
    let mut unfactored: Vec<BigInt> = Vec::new();
    for v in to_factor.iter().filter(|v| !v.is_zero()) {
        let v = strip_primes(v, &n_primes);
        if v.is_one() {
            continue;
        }
        let fact = factor_with(&v, budget).expect("nonzero");
        candidates.extend(fact.primes().cloned());
        if !fact.cofactor.is_one() && !unfactored.contains(&fact.cofactor) {
            unfactored.push(fact.cofactor.clone());
        }
    }
    let candidates: Vec<BigInt> = candidates.into_iter().filter(|p| !n_value.is_multiple_of(p)).collect();
    let mut primes: Vec<BadPrime> = candidates
        .par_iter()
        .filter_map(|p| match p.to_u64().filter(|&q| q <= RESIDUE_PRIME_CAP) {
            Some(q) => {
                let bad = common_roots(g1, g2, q);
                (!bad.is_empty()).then(|| BadPrime {
                    p: p.clone(),
                    bad_residues: bad,
                    chosen: None,
                    scan: ResidueScan::Complete,
                })
            }
            None => {
                Some(BadPrime { p: p.clone(), bad_residues: Vec::new(), chosen: None, scan: ResidueScan::WitnessOnly })
            }
        })
        .collect();
    primes.sort_by(|x, y| x.p.cmp(&y.p));
    BadPrimeTable { primes, candidates_examined: candidates.len(), unfactored }
}

/// Chooses `r_p = witness mod p` (or the least good residue) for each bad
/// prime and combines them by CRT. Large primes checked only at the
/// witness do not enter the modulus.
pub fn build_progression(
    table: &mut BadPrimeTable,
    data: &GcdData,
    witness: &BigInt,
) -> Result<Progression, GateError> {
    let mut pairs = Vec::new();
    for bp in table.primes.iter_mut() {
        match bp.scan {
            ResidueScan::Complete => {
                let p = bp.p.to_u64().expect("complete scans use word-size primes");
                if bp.bad_residues.len() as u64 == p {
                    return Err(GateError::FixedDivisorViolated { p: bp.p.clone() });
                }
                let w = residue(witness, p);
                let r = if bp.bad_residues.binary_search(&w).is_err() {
                    w
                } else {
                    (0..p).find(|r| bp.bad_residues.binary_search(r).is_err()).expect("a good residue exists")
                };
                bp.chosen = Some(r);
                pairs.push((BigInt::from(r), bp.p.clone()));
            }
            ResidueScan::WitnessOnly => {
                let bad = data.g1.eval(witness).is_multiple_of(&bp.p) && data.g2.eval(witness).is_multiple_of(&bp.p);
                if bad {
                    return Err(GateError::NotAWitness { c: witness.clone() });
                }
            }
        }
    }
    let (a, b) = intarith::crt(&pairs)?;
    Ok(Progression::new(a, b))
}

/// Krasner refinement data around a reference specialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    #[serde(with = "crate::dec")]
    pub t_ref: BigInt,
    /// `(p, k_p)` with `k_p = 2 v_p(disc f(t_ref, x)) + 1`.
    pub exponents: Vec<(u64, u32)>,
    #[serde(with = "crate::dec")]
    pub modulus: BigInt,
    pub base: Progression,
    pub combined: Progression,
    pub note: String,
}

/// Intersects the progression with `t_ref + M Z`, `M = prod p^(k_p)`.
pub fn refine_for_exceptional_primes(
    f: &BiPoly,
    progression: &Progression,
    t_ref: &BigInt,
    primes: &[u64],
) -> Result<Refinement, GateError> {
    let d = discriminant(&specialize(f, t_ref))?;
    if d.is_zero() {
        return Err(GateError::SingularReference { t: t_ref.clone() });
    }
    let mut exponents = Vec::new();
    let mut modulus = BigInt::one();
    for &p in primes {
        let k = 2 * valuation(&d, &BigInt::from(p))? + 1;
        exponents.push((p, k));
        modulus *= num_traits::pow(BigInt::from(p), k as usize);
    }
    let (a, b) = intarith::crt(&[(progression.a.clone(), progression.b.clone()), (t_ref.clone(), modulus.clone())])?;
    Ok(Refinement {
        t_ref: t_ref.clone(),
        exponents,
        modulus,
        base: progression.clone(),
        combined: Progression::new(a, b),
        note: "k_p is sufficient, not minimal".to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessCheck {
    pub members_checked: usize,
    /// Member indices `i` (member `a + i b`) whose gcd escaped `N`'s primes.
    pub violations: Vec<i64>,
}

impl SoundnessCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Direct check of members `a, a + b, ..., a + (count - 1) b`.
pub fn soundness_check(data: &GcdData, progression: &Progression, count: usize) -> SoundnessCheck {
    let violations: Vec<i64> =
        (0..count as i64).into_par_iter().filter(|&i| !data.is_witness(&progression.member(i))).collect();
    SoundnessCheck { members_checked: count, violations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOptions {
    pub witness_range: (i64, i64),
    /// Checked before searching; the search runs only when it fails.
    pub witness: Option<i64>,
    pub exceptional: Vec<u64>,
    pub t_ref: Option<i64>,
    pub budget: FactorBudget,
    pub soundness_members: usize,
}

impl Default for GateOptions {
    fn default() -> Self {
        GateOptions {
            witness_range: (-10_000, 10_000),
            witness: None,
            exceptional: Vec::new(),
            t_ref: None,
            budget: FactorBudget { rho_iterations: 200_000, rho_max_bits: 256 },
            soundness_members: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCertificate {
    #[serde(flatten)]
    pub data: GcdData,
    #[serde(with = "crate::dec")]
    pub witness: BigInt,
    pub witness_range: (i64, i64),
    pub bad_primes: BadPrimeTable,
    /// Progression before refinement.
    pub base: Progression,
    pub refinement: Option<Refinement>,
    /// Final progression.
    pub progression: Progression,
    pub soundness: SoundnessCheck,
}

/// Runs the whole gate.
pub fn run_gate(f: &BiPoly, opts: &GateOptions) -> Result<GateCertificate, GateError> {
    let data = compute_n(f)?;
    let (lo, hi) = opts.witness_range;
    let witness = match opts.witness.map(BigInt::from) {
        Some(c) if data.is_witness(&c) => c,
        _ => find_witness(&data, lo, hi)?,
    };
    let mut table = bad_primes(&data.g1, &data.g2, &data.n_value, opts.budget);
    let base = build_progression(&mut table, &data, &witness)?;
    let refinement = match opts.t_ref {
        Some(t) if !opts.exceptional.is_empty() => {
            Some(refine_for_exceptional_primes(f, &base, &BigInt::from(t), &opts.exceptional)?)
        }
        _ => None,
    };
    let progression = refinement.as_ref().map_or_else(|| base.clone(), |r| r.combined.clone());
    let soundness = soundness_check(&data, &progression, opts.soundness_members);
    Ok(GateCertificate {
        data,
        witness,
        witness_range: opts.witness_range,
        bad_primes: table,
        base,
        refinement,
        progression,
        soundness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn toy_bad_primes() {
        // t^2 + 1 and t + 3: Res = 10
        let t = bad_primes(&ip(&[1, 0, 1]), &ip(&[3, 1]), &BigInt::one(), FactorBudget::default());
        let got: Vec<(i64, Vec<u64>)> =
            t.primes.iter().map(|b| (b.p.to_i64().unwrap(), b.bad_residues.clone())).collect();
        assert_eq!(got, vec![(2, vec![1]), (5, vec![2])]);
        assert!(bad_primes(&ip(&[1]), &ip(&[3, 1]), &BigInt::one(), FactorBudget::default()).primes.is_empty());
    }

    #[test]
    fn s3_gate() {
        let f = presets::S3.f();
        let data = compute_n(&f).unwrap();
        assert_eq!(data.n_value, BigInt::one());
        assert_eq!(find_witness(&data, -100, 100).unwrap(), BigInt::from(2));
        let cert = run_gate(&f, &GateOptions::default()).unwrap();
        assert_eq!(cert.progression, Progression::new(BigInt::from(2), BigInt::from(6)));
        let residues: Vec<(i64, Vec<u64>)> =
            cert.bad_primes.primes.iter().map(|b| (b.p.to_i64().unwrap(), b.bad_residues.clone())).collect();
        assert_eq!(residues, vec![(2, vec![1]), (3, vec![0])]);
        assert!(cert.soundness.passed());
    }

    #[test]
    fn preset_witnesses() {
        for (preset, c) in [(&presets::A5, -3), (&presets::PSL27, 0), (&presets::S3, 2)] {
            let data = compute_n(&preset.f()).unwrap();
            assert_eq!(data.n_value, BigInt::one(), "{}", preset.name);
            assert!(data.is_witness(&BigInt::from(c)), "{}", preset.name);
        }
    }

    #[test]
    fn walk_order() {
        let p = Progression::new(BigInt::from(2), BigInt::from(6));
        let w: Vec<BigInt> = p.walk().take(4).collect();
        assert_eq!(w, [2, -4, 8, -10].map(BigInt::from));
        assert!(p.contains(&BigInt::from(-10)));
    }

    #[test]
    fn rejects_bad_input() {
        let f = crate::zpoly::parse_poly("2x^3 + t").unwrap();
        assert_eq!(compute_n(&f), Err(GateError::NotMonic));
        let g = crate::zpoly::parse_poly("x^2 + t").unwrap();
        assert_eq!(compute_n(&g), Err(GateError::DegreeTooLow(2)));
    }
}
