//! Small permutation groups, enumerated exhaustively.

mod builders;
mod cover;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builders::{
    a4, a5, affine_group, alternating, c5, cyclic_subgroup, d5, f20, point_stabilizer, projective_special_linear,
    psl27, psl33, s5, symmetric,
};
pub use cover::{
    conjugate_cover_check, decomposition_compatibility, structure_label, CompatibilityReport, CoverDatum,
    OffendingSubgroup,
};

pub const MAX_DEGREE: usize = 16;
/// Closure stops with an error past this many elements.
pub const ORDER_BOUND: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("degree {0} outside 1..={MAX_DEGREE}")]
    BadDegree(usize),
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("generators have different degrees")]
    DegreeMismatch,
    #[error("group order exceeds the bound {0}")]
    OrderBoundExceeded(usize),
    #[error("subgroup {0} is not contained in the group")]
    SubgroupNotContained(String),
}

/// A permutation of `{0, .., deg-1}`; printed 1-based in cycle notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    deg: u8,
    img: [u8; MAX_DEGREE],
}

impl Perm {
    pub fn identity(deg: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&deg));
        let mut img = [0u8; MAX_DEGREE];
        for (i, v) in img.iter_mut().enumerate() {
            *v = i as u8;
        }
        Perm { deg: deg as u8, img }
    }

    /// From 0-based images.
    pub fn from_images(images: &[usize]) -> Result<Self, GroupError> {
        let d = images.len();
        if !(1..=MAX_DEGREE).contains(&d) {
            return Err(GroupError::BadDegree(d));
        }
        let mut seen = [false; MAX_DEGREE];
        let mut p = Perm::identity(d);
        for (i, &v) in images.iter().enumerate() {
            if v >= d || seen[v] {
                return Err(GroupError::NotAPermutation(d));
            }
            seen[v] = true;
            p.img[i] = v as u8;
        }
        Ok(p)
    }

    /// From 1-based disjoint cycles, e.g. `&[&[1, 2, 3]]`.
    pub fn from_cycles(deg: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        if !(1..=MAX_DEGREE).contains(&deg) {
            return Err(GroupError::BadDegree(deg));
        }
        let mut images: Vec<usize> = (0..deg).collect();
        let mut touched = vec![false; deg];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a == 0 || a > deg || b == 0 || b > deg || touched[a - 1] {
                    return Err(GroupError::NotAPermutation(deg));
                }
                touched[a - 1] = true;
                images[a - 1] = b - 1;
            }
        }
        Perm::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.deg as usize
    }

    pub fn image(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.img[..self.degree()].iter().map(|&v| v as usize).collect()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[i] = other.img[self.img[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[self.img[i] as usize] = i as u8;
        }
        out
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.img[i] as usize == i)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i);
                i = self.img[i] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths, ascending, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, num_integer::lcm)
    }

    pub fn fixed_points(&self) -> usize {
        (0..self.degree()).filter(|&i| self.img[i] as usize == i).count()
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().filter(|c| c.len() % 2 == 0).count() % 2 == 0
    }

    pub fn pow(&self, e: usize) -> Perm {
        (0..e).fold(Perm::identity(self.degree()), |acc, _| acc.then(self))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            let parts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
            any = true;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle type written as e.g. `2^4.1^5` (descending parts).
pub fn cycle_type_label(t: &[usize]) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in t {
        *counts.entry(k).or_default() += 1;
    }
    let parts: Vec<String> =
        counts.iter().rev().map(|(k, m)| if *m == 1 { k.to_string() } else { format!("{k}^{m}") }).collect();
    parts.join(".")
}

/// Set of group elements, as a bitset over the parent's element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElemSet(Vec<u64>);

impl ElemSet {
    pub fn empty(n: usize) -> Self {
        ElemSet(vec![0; n.div_ceil(64)])
    }
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    pub fn intersect(&mut self, other: &ElemSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.0.len() * 64).filter(|&i| self.contains(i))
    }
}

/// A finite permutation group with all elements listed (sorted).
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    /// Closure of `gens` under composition, capped at [`ORDER_BOUND`].
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<Self, GroupError> {
        Self::generate_bounded(degree, gens, ORDER_BOUND)
    }

    pub fn generate_bounded(degree: usize, gens: &[Perm], bound: usize) -> Result<Self, GroupError> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(GroupError::BadDegree(degree));
        }
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch);
        }
        let id = Perm::identity(degree);
        let mut seen: HashMap<Perm, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.then(g);
                if !seen.contains_key(&y) {
                    if seen.len() >= bound {
                        return Err(GroupError::OrderBoundExceeded(bound));
                    }
                    seen.insert(y, 0);
                    queue.push_back(y);
                }
            }
        }
        Ok(Self::from_closed(degree, gens.to_vec(), seen.into_keys().collect()))
    }

    /// Trusted constructor for a set already known to be a group.
    fn from_closed(degree: usize, generators: Vec<Perm>, mut elements: Vec<Perm>) -> Self {
        elements.sort_unstable();
        let index = elements.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        PermGroup { degree, generators, elements, index }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn is_subgroup_of(&self, g: &PermGroup) -> bool {
        self.degree == g.degree && self.generators.iter().all(|x| g.contains(x))
    }

    /// Indices (in `self`) of the elements of a subgroup.
    pub fn element_set(&self, h: &PermGroup) -> Result<ElemSet, GroupError> {
        let mut s = ElemSet::empty(self.order());
        for x in h.elements() {
            s.insert(self.index_of(x).ok_or_else(|| GroupError::SubgroupNotContained(format!("{h:?}")))?);
        }
        Ok(s)
    }

    /// Subgroup generated by elements of `self`.
    pub fn subgroup(&self, gens: &[Perm]) -> Result<PermGroup, GroupError> {
        if let Some(bad) = gens.iter().find(|g| !self.contains(g)) {
            return Err(GroupError::SubgroupNotContained(bad.to_string()));
        }
        PermGroup::generate(self.degree, gens)
    }

    /// Subgroup of elements satisfying `keep` (which must define a subgroup).
    pub fn filter_subgroup(&self, keep: impl Fn(&Perm) -> bool) -> PermGroup {
        let elems: Vec<Perm> = self.elements.iter().copied().filter(|p| keep(p)).collect();
        let gens = small_generating_set(self.degree, &elems);
        PermGroup::from_closed(self.degree, gens, elems)
    }

    /// `cycle type -> count`.
    pub fn cycle_type_census(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for p in &self.elements {
            *out.entry(p.cycle_type()).or_default() += 1;
        }
        out
    }

    pub fn cycle_types(&self) -> BTreeSet<Vec<usize>> {
        self.cycle_type_census().into_keys().collect()
    }

    /// Conjugacy classes as lists of element indices, ordered by smallest
    /// member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![i];
            class_of[i] = id;
            let mut k = 0;
            while k < members.len() {
                let x = self.elements[members[k]];
                for g in &self.generators {
                    let j = self.index[&x.conjugate_by(g)];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    pub fn centralizer(&self, tau: &Perm) -> PermGroup {
        self.filter_subgroup(|g| g.then(tau) == tau.then(g))
    }

    /// Normalizer of the subgroup `h` (given as elements of `self`).
    pub fn normalizer(&self, h: &PermGroup) -> PermGroup {
        self.filter_subgroup(|g| h.generators().iter().all(|x| h.contains(&x.conjugate_by(g))))
    }

    /// True iff some point is fixed by every element.
    pub fn fixes_a_point(&self) -> bool {
        (0..self.degree).any(|i| self.generators.iter().all(|g| g.image(i) == i))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for g in &self.generators {
                let j = g.image(i);
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    pub fn fixed_point_free_elements(&self) -> Vec<Perm> {
        self.elements.iter().copied().filter(|p| p.fixed_points() == 0).collect()
    }

    pub fn involutions(&self) -> Vec<Perm> {
        self.elements.iter().copied().filter(|p| p.order() == 2).collect()
    }

    /// True iff the involutions generate the whole group.
    pub fn generated_by_involutions(&self) -> bool {
        let inv = self.involutions();
        if inv.is_empty() {
            return self.order() == 1;
        }
        PermGroup::generate(self.degree, &inv).map(|h| h.order() == self.order()).unwrap_or(false)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|a| g.iter().all(|b| a.then(b) == b.then(a)))
    }

    /// Distinct conjugates `x^-1 H x` of a subgroup, as element sets.
    pub fn subgroup_conjugates(&self, h: &PermGroup) -> Result<Vec<ElemSet>, GroupError> {
        let base = self.element_set(h)?;
        let mut out: Vec<ElemSet> = vec![base];
        let mut known: std::collections::HashSet<ElemSet> = out.iter().cloned().collect();
        // Conjugates under coset representatives suffice, but the group is
        // small enough to walk every element.
        for x in &self.elements {
            let mut s = ElemSet::empty(self.order());
            for y in h.elements() {
                s.insert(self.index[&y.conjugate_by(x)]);
            }
            if known.insert(s.clone()) {
                out.push(s);
            }
        }
        Ok(out)
    }
}

/// Greedy generating set: keep an element when it enlarges the span.
fn small_generating_set(degree: usize, elems: &[Perm]) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut span: std::collections::HashSet<Perm> = [Perm::identity(degree)].into_iter().collect();
    let target = elems.len();
    // Prefer high-order elements; they shrink the set fastest.
    let mut order: Vec<&Perm> = elems.iter().collect();
    order.sort_by_key(|p| std::cmp::Reverse(p.order()));
    for p in order {
        if span.len() == target {
            break;
        }
        if span.contains(p) {
            continue;
        }
        gens.push(*p);
        span = PermGroup::generate(degree, &gens).expect("subgroup of a bounded group").elements.into_iter().collect();
    }
    gens
}

/// Census with printable cycle-type labels.
pub fn census_summary(g: &PermGroup) -> Vec<(String, usize)> {
    g.cycle_type_census().iter().map(|(t, n)| (cycle_type_label(t), *n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub name: String,
    pub degree: usize,
    pub order: usize,
    pub generators: Vec<String>,
    pub census: Vec<(String, usize)>,
}

impl GroupSummary {
    pub fn of(name: &str, g: &PermGroup) -> Self {
        GroupSummary {
            name: name.to_string(),
            degree: g.degree(),
            order: g.order(),
            generators: g.generators().iter().map(Perm::to_string).collect(),
            census: census_summary(g),
        }
    }
}
