//! Subgroup-conjugate covers and the admissible decomposition groups of a
//! tamely ramified prime.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{cycle_type_label, ElemSet, GroupError, Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDatum {
    pub group_order: usize,
    pub subgroups: Vec<String>,
    pub subgroup_orders: Vec<usize>,
    pub m: usize,
    /// Union of all conjugates of all `H_i` is the whole group.
    pub is_cover: bool,
    /// Intersection of all conjugates of all `H_i` is trivial.
    pub trivial_intersection: bool,
    /// Elements outside every conjugate.
    pub uncovered: usize,
    /// Cycle types of the uncovered elements.
    pub uncovered_types: Vec<String>,
    /// `s(G)` when this cover attains it. No group is the union of the
    /// conjugates of one proper subgroup, so a two-subgroup cover is optimal.
    pub s_value: Option<usize>,
    pub note: String,
}

/// Exact union/intersection of the conjugates of the given subgroups.
pub fn conjugate_cover_check(g: &PermGroup, subgroups: &[(&str, &PermGroup)]) -> Result<CoverDatum, GroupError> {
    let n = g.order();
    let mut sets = Vec::new();
    for (name, h) in subgroups {
        if !h.is_subgroup_of(g) {
            return Err(GroupError::SubgroupNotContained(name.to_string()));
        }
        sets.push(g.element_set(h)?);
    }
    let classes = g.conjugacy_classes();
    let mut covered = ElemSet::empty(n);
    let mut core_all = ElemSet::empty(n);
    for i in 0..n {
        core_all.insert(i);
    }
    for s in &sets {
        let mut core = ElemSet::empty(n);
        for class in &classes {
            if class.iter().any(|&i| s.contains(i)) {
                class.iter().for_each(|&i| covered.insert(i));
            }
            if class.iter().all(|&i| s.contains(i)) {
                class.iter().for_each(|&i| core.insert(i));
            }
        }
        core_all.intersect(&core);
    }
    let uncovered: Vec<usize> = (0..n).filter(|&i| !covered.contains(i)).collect();
    let mut uncovered_types: Vec<String> =
        uncovered.iter().map(|&i| cycle_type_label(&g.elements()[i].cycle_type())).collect();
    uncovered_types.sort();
    uncovered_types.dedup();
    let is_cover = uncovered.is_empty();
    let trivial_intersection = core_all.len() == 1;
    let proper = subgroups.iter().all(|(_, h)| h.order() < n);
    let m = subgroups.len();
    let s_value = (is_cover && trivial_intersection && proper && m == 2).then_some(2);
    let note = match (s_value, is_cover) {
        (Some(_), _) => "r(G) >= s(G) = 2 attained by this cover".to_string(),
        (None, true) => format!("cover by {m} subgroups; s(G) <= {m}"),
        (None, false) => "not a cover".to_string(),
    };
    Ok(CoverDatum {
        group_order: n,
        subgroups: subgroups.iter().map(|(s, _)| s.to_string()).collect(),
        subgroup_orders: subgroups.iter().map(|(_, h)| h.order()).collect(),
        m,
        is_cover,
        trivial_intersection,
        uncovered: uncovered.len(),
        uncovered_types,
        s_value,
        note,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffendingSubgroup {
    pub order: usize,
    pub structure: String,
    /// `tau` generates inertia, `sigma` lifts Frobenius.
    pub tau: String,
    pub sigma: String,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub inertia_order_bound: usize,
    pub admissible_subgroups: usize,
    pub compatible: bool,
    pub offenders: Vec<OffendingSubgroup>,
    /// Structures of the inclusion-minimal offenders, deduplicated.
    pub minimal_offender_types: Vec<String>,
}

/// Checks that every possible tame decomposition group lies in a conjugate
/// of some `H_i`.
///
/// With inertia `<tau>` of order at most `bound` and a Frobenius lift `sigma`
/// normalizing it, the candidates are all `<tau, sigma>`. For `bound = 2`
/// these are the cyclic groups and the abelian groups `<tau, sigma>` with
/// `tau` an involution commuting with `sigma`.
pub fn decomposition_compatibility(
    g: &PermGroup,
    subgroups: &[&PermGroup],
    bound: usize,
) -> Result<CompatibilityReport, GroupError> {
    let mut conj_sets = Vec::new();
    for h in subgroups {
        conj_sets.extend(g.subgroup_conjugates(h)?);
    }
    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut candidates: Vec<(ElemSet, Perm, Perm)> = Vec::new();
    for tau in g.elements().iter().filter(|t| t.order() <= bound) {
        let inertia = g.subgroup(&[*tau])?;
        for sigma in g.elements() {
            if !inertia.contains(&tau.conjugate_by(sigma)) {
                continue;
            }
            let d = g.subgroup(&[*tau, *sigma])?;
            let set = g.element_set(&d)?;
            if seen.insert(set.clone()) {
                candidates.push((set, *tau, *sigma));
            }
        }
    }
    let bad: Vec<&(ElemSet, Perm, Perm)> =
        candidates.iter().filter(|(s, _, _)| !conj_sets.iter().any(|c| s.is_subset(c))).collect();
    let mut offenders = Vec::new();
    for (set, tau, sigma) in &bad {
        let minimal = !bad.iter().any(|(other, _, _)| other != set && other.is_subset(set));
        let elems: Vec<Perm> = set.iter().map(|i| g.elements()[i]).collect();
        offenders.push(OffendingSubgroup {
            order: set.len(),
            structure: structure_label(&elems),
            tau: tau.to_string(),
            sigma: sigma.to_string(),
            minimal,
        });
    }
    let mut minimal_offender_types: Vec<String> =
        offenders.iter().filter(|o| o.minimal).map(|o| o.structure.clone()).collect();
    minimal_offender_types.sort();
    minimal_offender_types.dedup();
    Ok(CompatibilityReport {
        inertia_order_bound: bound,
        admissible_subgroups: candidates.len(),
        compatible: offenders.is_empty(),
        offenders,
        minimal_offender_types,
    })
}

/// Coarse isomorphism label for a small group given by its elements:
/// `C<n>`, `V4`, `S3`, `D<n>`, or `order-<n>`.
pub fn structure_label(elems: &[Perm]) -> String {
    let n = elems.len();
    let max_order = elems.iter().map(Perm::order).max().unwrap_or(1);
    if max_order == n {
        return format!("C{n}");
    }
    let abelian = elems.iter().all(|a| elems.iter().all(|b| a.then(b) == b.then(a)));
    if abelian {
        return if n == 4 { "V4".to_string() } else { format!("abelian-{n}") };
    }
    let involutions = elems.iter().filter(|p| p.order() == 2).count();
    if max_order == n / 2 && involutions == n / 2 + usize::from(n.is_multiple_of(4)) {
        return if n == 6 { "S3".to_string() } else { format!("D{}", n / 2) };
    }
    format!("order-{n}")
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn a5_cover() {
        let g = a5().unwrap();
        let (d, a) = (d5().unwrap(), a4().unwrap());
        let c = conjugate_cover_check(&g, &[("D5", &d), ("A4", &a)]).unwrap();
        assert!(c.is_cover && c.trivial_intersection);
        assert_eq!(c.s_value, Some(2));
        let only_a4 = conjugate_cover_check(&g, &[("A4", &a)]).unwrap();
        assert!(!only_a4.is_cover);
        assert_eq!(only_a4.uncovered_types, vec!["5".to_string()]);
    }

    #[test]
    fn no_single_maximal_subgroup_covers_a5() {
        let g = a5().unwrap();
        let s3 = g
            .subgroup(&[
                Perm::from_cycles(5, &[&[1, 2, 3]]).unwrap(),
                Perm::from_cycles(5, &[&[1, 2], &[4, 5]]).unwrap(),
            ])
            .unwrap();
        assert_eq!(s3.order(), 6);
        for h in [a4().unwrap(), d5().unwrap(), s3] {
            assert!(!conjugate_cover_check(&g, &[("H", &h)]).unwrap().is_cover);
        }
    }

    #[test]
    fn a5_decomposition_groups() {
        let g = a5().unwrap();
        let (d, a) = (d5().unwrap(), a4().unwrap());
        let ok = decomposition_compatibility(&g, &[&d, &a], 2).unwrap();
        assert!(ok.compatible);
        let bad = decomposition_compatibility(&g, &[&d, &a], 3).unwrap();
        assert!(!bad.compatible);
        assert_eq!(bad.minimal_offender_types, vec!["S3".to_string()]);
    }

    #[test]
    fn labels() {
        let g = a5().unwrap();
        assert_eq!(structure_label(d5().unwrap().elements()), "D5");
        assert_eq!(structure_label(c5().unwrap().elements()), "C5");
        let v4 = g
            .subgroup(&[
                Perm::from_cycles(5, &[&[1, 2], &[3, 4]]).unwrap(),
                Perm::from_cycles(5, &[&[1, 3], &[2, 4]]).unwrap(),
            ])
            .unwrap();
        assert_eq!(structure_label(v4.elements()), "V4");
    }
}
