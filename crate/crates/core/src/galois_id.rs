//! Galois-group identification by elimination: Frobenius cycle types,
//! element-order lower bounds and the discriminant parity test.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{self, PermGroup};
use crate::intarith::{is_perfect_square, primes_from};
use crate::modp::degree_pattern;
use crate::zpoly::{discriminant, IntPoly};

pub const DEFAULT_PRIME_BUDGET: usize = 500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("every candidate was eliminated; the input may be reducible or the list incomplete")]
    AllCandidatesEliminated,
    #[error("polynomial has degree {0}; need at least 2")]
    DegreeTooLow(usize),
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("no candidate list for degree {0}")]
    NoCandidates(usize),
    #[error("unknown group {0:?} for degree {1}")]
    UnknownGroup(String, usize),
}

/// Cycle types a candidate group can show.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternSet {
    Listed(BTreeSet<Vec<usize>>),
    /// Every partition of the degree, optionally only the even ones.
    AllPartitions {
        even_only: bool,
    },
}

impl PatternSet {
    pub fn contains(&self, degree: usize, pattern: &[usize]) -> bool {
        match self {
            PatternSet::Listed(s) => s.contains(pattern),
            PatternSet::AllPartitions { even_only } => {
                pattern.iter().sum::<usize>() == degree && (!even_only || (degree - pattern.len()).is_multiple_of(2))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransitiveGroup {
    pub name: &'static str,
    pub degree: usize,
    pub order: u64,
    /// Contained in the alternating group.
    pub even: bool,
    pub patterns: PatternSet,
}

impl TransitiveGroup {
    fn from_perm_group(name: &'static str, g: &PermGroup) -> Self {
        TransitiveGroup {
            name,
            degree: g.degree(),
            order: g.order() as u64,
            even: g.elements().iter().all(|p| p.is_even()),
            patterns: PatternSet::Listed(g.cycle_types()),
        }
    }

    fn alternating(name: &'static str, n: usize) -> Self {
        let order = (1..=n as u64).product::<u64>() / 2;
        TransitiveGroup { name, degree: n, order, even: true, patterns: PatternSet::AllPartitions { even_only: true } }
    }

    fn symmetric(name: &'static str, n: usize) -> Self {
        let order = (1..=n as u64).product::<u64>();
        TransitiveGroup {
            name,
            degree: n,
            order,
            even: false,
            patterns: PatternSet::AllPartitions { even_only: false },
        }
    }
}

fn build(name: &'static str, g: Result<PermGroup, groups::GroupError>) -> TransitiveGroup {
    TransitiveGroup::from_perm_group(name, &g.expect("shipped group builds"))
}

/// The complete list of transitive groups of the given degree, for the
/// degrees shipped (2, 3, 5, 7, 13). Other degrees get `[A_n, S_n]` and the
/// flag `false`.
pub fn transitive_groups(degree: usize) -> (&'static [TransitiveGroup], bool) {
    static D2: OnceLock<Vec<TransitiveGroup>> = OnceLock::new();
    static D3: OnceLock<Vec<TransitiveGroup>> = OnceLock::new();
    static D5: OnceLock<Vec<TransitiveGroup>> = OnceLock::new();
    static D7: OnceLock<Vec<TransitiveGroup>> = OnceLock::new();
    static D13: OnceLock<Vec<TransitiveGroup>> = OnceLock::new();
    match degree {
        2 => (D2.get_or_init(|| vec![TransitiveGroup::symmetric("C2", 2)]), true),
        3 => {
            (D3.get_or_init(|| vec![TransitiveGroup::alternating("C3", 3), TransitiveGroup::symmetric("S3", 3)]), true)
        }
        5 => (
            D5.get_or_init(|| {
                vec![
                    build("C5", groups::c5()),
                    build("D5", groups::d5()),
                    build("F20", groups::f20()),
                    TransitiveGroup::alternating("A5", 5),
                    TransitiveGroup::symmetric("S5", 5),
                ]
            }),
            true,
        ),
        7 => (
            D7.get_or_init(|| {
                vec![
                    build("C7", groups::affine_group(7, 1)),
                    build("D7", groups::affine_group(7, 2)),
                    build("F21", groups::affine_group(7, 3)),
                    build("F42", groups::affine_group(7, 6)),
                    build("PSL(3,2)", groups::psl27()),
                    TransitiveGroup::alternating("A7", 7),
                    TransitiveGroup::symmetric("S7", 7),
                ]
            }),
            true,
        ),
        13 => (
            D13.get_or_init(|| {
                vec![
                    build("C13", groups::affine_group(13, 1)),
                    build("D13", groups::affine_group(13, 2)),
                    build("13:3", groups::affine_group(13, 3)),
                    build("13:4", groups::affine_group(13, 4)),
                    build("13:6", groups::affine_group(13, 6)),
                    build("13:12", groups::affine_group(13, 12)),
                    build("PSL(3,3)", groups::psl33()),
                    TransitiveGroup::alternating("A13", 13),
                    TransitiveGroup::symmetric("S13", 13),
                ]
            }),
            true,
        ),
        _ => {
            static OTHER: OnceLock<std::sync::Mutex<std::collections::HashMap<usize, &'static [TransitiveGroup]>>> =
                OnceLock::new();
            let map = OTHER.get_or_init(Default::default);
            let mut guard = map.lock().expect("candidate cache");
            let list = *guard.entry(degree).or_insert_with(|| {
                Box::leak(
                    vec![TransitiveGroup::alternating("A_n", degree), TransitiveGroup::symmetric("S_n", degree)]
                        .into_boxed_slice(),
                )
            });
            (list, false)
        }
    }
}

/// Looks a group up by name (case-insensitive) among the shipped lists.
pub fn candidate(degree: usize, name: &str) -> Result<&'static TransitiveGroup, GaloisError> {
    transitive_groups(degree)
        .0
        .iter()
        .find(|g| g.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| GaloisError::UnknownGroup(name.to_string(), degree))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSample {
    pub prime: u64,
    pub pattern: Vec<usize>,
    /// False when `p` divides the discriminant.
    pub used: bool,
}

/// Factorization patterns of `f` modulo the first `prime_budget` primes not
/// dividing `disc(f)`; skipped primes are kept with `used = false`.
pub fn sample_patterns(f: &IntPoly, prime_budget: usize) -> Result<Vec<FrobeniusSample>, GaloisError> {
    let n = f.deg();
    if n < 2 {
        return Err(GaloisError::DegreeTooLow(n));
    }
    let d = discriminant(f).expect("degree checked");
    if d.is_zero() {
        return Err(GaloisError::NotSeparable);
    }
    let dd = &d * f.lc();
    let mut out = Vec::with_capacity(prime_budget);
    let mut primes = primes_from(2);
    let mut used = 0;
    while used < prime_budget {
        let batch: Vec<u64> = primes.by_ref().take(prime_budget - used).collect();
        let samples: Vec<FrobeniusSample> = batch
            .par_iter()
            .map(|&p| {
                if dd.is_multiple_of(&BigInt::from(p)) {
                    FrobeniusSample { prime: p, pattern: Vec::new(), used: false }
                } else {
                    FrobeniusSample { prime: p, pattern: degree_pattern(f, p).degrees, used: true }
                }
            })
            .collect();
        used += samples.iter().filter(|s| s.used).count();
        out.extend(samples);
    }
    Ok(out)
}

/// `lcm` of the element orders the used patterns exhibit.
pub fn order_lower_bound(samples: &[FrobeniusSample]) -> u64 {
    samples
        .iter()
        .filter(|s| s.used)
        .map(|s| s.pattern.iter().fold(1u64, |acc, &k| acc.lcm(&(k as u64))))
        .fold(1u64, |acc, o| acc.lcm(&o))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// Square discriminant: the group lies in `A_n`.
    Even,
    Odd,
}

pub fn parity_test(f: &IntPoly) -> Result<Parity, GaloisError> {
    let d = discriminant(f).map_err(|_| GaloisError::DegreeTooLow(f.deg()))?;
    if d.is_zero() {
        return Err(GaloisError::NotSeparable);
    }
    Ok(if is_perfect_square(&d) { Parity::Even } else { Parity::Odd })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EliminationReason {
    Pattern { prime: u64, pattern: Vec<usize> },
    Parity { discriminant_square: bool },
    OrderBound { bound: u64, order: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub group: String,
    pub reason: EliminationReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdStatus {
    IdentifiedHeuristic,
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisVerdict {
    pub degree: usize,
    pub candidates: Vec<String>,
    /// The candidate list is every transitive group of this degree.
    pub complete_list: bool,
    pub eliminated: Vec<Elimination>,
    pub surviving: Vec<String>,
    pub parity: Parity,
    pub order_lower_bound: u64,
    pub samples_used: usize,
    /// Distinct patterns seen, with the first prime showing each.
    pub observed: Vec<(Vec<usize>, u64)>,
    pub status: IdStatus,
    pub note: String,
}

impl GaloisVerdict {
    pub fn identified(&self) -> Option<&str> {
        (self.status == IdStatus::IdentifiedHeuristic).then(|| self.surviving[0].as_str())
    }

    pub fn survives(&self, name: &str) -> bool {
        self.surviving.iter().any(|s| s.eq_ignore_ascii_case(name))
    }
}

/// Drops every candidate contradicted by a sample, the parity or the order
/// bound; the first contradicting sample is recorded.
pub fn identify(
    f: &IntPoly,
    candidates: &[&TransitiveGroup],
    samples: &[FrobeniusSample],
    complete_list: bool,
) -> Result<GaloisVerdict, GaloisError> {
    let n = f.deg();
    let parity = parity_test(f)?;
    let bound = order_lower_bound(samples);
    let mut observed: Vec<(Vec<usize>, u64)> = Vec::new();
    for s in samples.iter().filter(|s| s.used) {
        if !observed.iter().any(|(p, _)| p == &s.pattern) {
            observed.push((s.pattern.clone(), s.prime));
        }
    }
    let mut eliminated = Vec::new();
    let mut surviving = Vec::new();
    for g in candidates {
        let reason = if let Some((pattern, prime)) = observed.iter().find(|(p, _)| !g.patterns.contains(n, p)) {
            Some(EliminationReason::Pattern { prime: *prime, pattern: pattern.clone() })
        } else if g.even != (parity == Parity::Even) {
            Some(EliminationReason::Parity { discriminant_square: parity == Parity::Even })
        } else if g.order % bound != 0 {
            Some(EliminationReason::OrderBound { bound, order: g.order })
        } else {
            None
        };
        match reason {
            Some(reason) => eliminated.push(Elimination { group: g.name.to_string(), reason }),
            None => surviving.push(g.name.to_string()),
        }
    }
    if surviving.is_empty() {
        return Err(GaloisError::AllCandidatesEliminated);
    }
    let status = if surviving.len() == 1 { IdStatus::IdentifiedHeuristic } else { IdStatus::Ambiguous };
    let note = if complete_list {
        "elimination over every transitive group of this degree; pattern absence is sampling evidence only"
    } else {
        "candidate list incomplete; verdict is heuristic"
    };
    Ok(GaloisVerdict {
        degree: n,
        candidates: candidates.iter().map(|g| g.name.to_string()).collect(),
        complete_list,
        eliminated,
        surviving,
        parity,
        order_lower_bound: bound,
        samples_used: samples.iter().filter(|s| s.used).count(),
        observed,
        status,
        note: note.to_string(),
    })
}

/// Samples and identifies against the full shipped list for `deg f`.
pub fn identify_default(f: &IntPoly, prime_budget: usize) -> Result<GaloisVerdict, GaloisError> {
    let (list, complete) = transitive_groups(f.deg());
    let samples = sample_patterns(f, prime_budget)?;
    let refs: Vec<&TransitiveGroup> = list.iter().collect();
    identify(f, &refs, &samples, complete)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_have_the_right_orders() {
        let orders: Vec<u64> = transitive_groups(7).0.iter().map(|g| g.order).collect();
        assert_eq!(orders, vec![7, 14, 21, 42, 168, 2520, 5040]);
        let orders: Vec<u64> = transitive_groups(5).0.iter().map(|g| g.order).collect();
        assert_eq!(orders, vec![5, 10, 20, 60, 120]);
    }

    #[test]
    fn quintic_is_a5() {
        let f = IntPoly::from_i64s(&[-24, 25, 0, -10, 0, 1]);
        let v = identify_default(&f, 200).unwrap();
        assert_eq!(v.identified(), Some("A5"));
        let mut pats: Vec<Vec<usize>> = v.observed.iter().map(|(p, _)| p.clone()).collect();
        pats.sort();
        assert_eq!(pats, vec![vec![1, 1, 1, 1, 1], vec![1, 1, 3], vec![1, 2, 2], vec![5]]);
    }

    #[test]
    fn s3_and_c2() {
        // f(-1, x) = x^3 - x - 2
        let f = IntPoly::from_i64s(&[-2, -1, 0, 1]);
        let v = identify_default(&f, 50).unwrap();
        assert_eq!(v.identified(), Some("S3"));
        let g = IntPoly::from_i64s(&[1, 0, 1]);
        let v = identify_default(&g, 50).unwrap();
        assert_eq!(v.identified(), Some("C2"));
        let samples = sample_patterns(&g, 20).unwrap();
        assert!(samples.iter().filter(|s| s.used).all(|s| s.pattern == vec![1, 1] || s.pattern == vec![2]));
    }

    #[test]
    fn order_bounds() {
        let s = |pattern: Vec<usize>| FrobeniusSample { prime: 0, pattern, used: true };
        assert_eq!(order_lower_bound(&[s(vec![1, 3, 9])]) % 9, 0);
        assert_eq!(order_lower_bound(&[s(vec![13])]), 13);
        assert_eq!(order_lower_bound(&[s(vec![5]), s(vec![1, 2, 2])]), 10);
    }

    #[test]
    fn parity() {
        assert_eq!(parity_test(&IntPoly::from_i64s(&[1, 1, 0, 1])).unwrap(), Parity::Odd);
        assert_eq!(parity_test(&IntPoly::from_i64s(&[-24, 25, 0, -10, 0, 1])).unwrap(), Parity::Even);
    }
}
