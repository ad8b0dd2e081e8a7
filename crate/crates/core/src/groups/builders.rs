//! Explicit constructions of the groups used by the presets.

use super::{GroupError, Perm, PermGroup};

fn cyc(deg: usize, cycles: &[&[usize]]) -> Perm {
    Perm::from_cycles(deg, cycles).expect("valid literal permutation")
}

pub fn symmetric(n: usize) -> Result<PermGroup, GroupError> {
    if n == 1 {
        return PermGroup::generate(1, &[]);
    }
    let long: Vec<usize> = (1..=n).collect();
    PermGroup::generate(n, &[cyc(n, &[&long]), cyc(n, &[&[1, 2]])])
}

/// Generated by the 3-cycles `(1 2 k)`.
pub fn alternating(n: usize) -> Result<PermGroup, GroupError> {
    let gens: Vec<Perm> = (3..=n).map(|k| cyc(n, &[&[1, 2, k]])).collect();
    PermGroup::generate(n, &gens)
}

pub fn a5() -> Result<PermGroup, GroupError> {
    PermGroup::generate(5, &[cyc(5, &[&[1, 2, 3, 4, 5]]), cyc(5, &[&[1, 2, 3]])])
}

pub fn s5() -> Result<PermGroup, GroupError> {
    symmetric(5)
}

pub fn c5() -> Result<PermGroup, GroupError> {
    PermGroup::generate(5, &[cyc(5, &[&[1, 2, 3, 4, 5]])])
}

/// Dihedral group of order 10 inside `A_5`.
pub fn d5() -> Result<PermGroup, GroupError> {
    PermGroup::generate(5, &[cyc(5, &[&[1, 2, 3, 4, 5]]), cyc(5, &[&[2, 5], &[3, 4]])])
}

/// Frobenius group of order 20, the normalizer of a 5-cycle in `S_5`.
pub fn f20() -> Result<PermGroup, GroupError> {
    PermGroup::generate(5, &[cyc(5, &[&[1, 2, 3, 4, 5]]), cyc(5, &[&[2, 3, 5, 4]])])
}

/// `A_4` on `{1..4}` inside `A_5` (stabilizer of 5).
pub fn a4() -> Result<PermGroup, GroupError> {
    PermGroup::generate(5, &[cyc(5, &[&[1, 2, 3]]), cyc(5, &[&[1, 2], &[3, 4]])])
}

/// `x -> a x + b` over `F_p` with `a` in the subgroup of order `k` of
/// `F_p^*`; order `p k`.
pub fn affine_group(p: usize, k: usize) -> Result<PermGroup, GroupError> {
    if !(p - 1).is_multiple_of(k) {
        return Err(GroupError::NotAPermutation(p));
    }
    let g = (2..p).find(|&g| (1..p - 1).all(|e| !(p - 1).is_multiple_of(e) || pow_mod(g, e, p) != 1)).unwrap_or(1);
    let a = pow_mod(g, (p - 1) / k, p);
    let shift: Vec<usize> = (0..p).map(|x| (x + 1) % p).collect();
    let scale: Vec<usize> = (0..p).map(|x| x * a % p).collect();
    PermGroup::generate(p, &[Perm::from_images(&shift)?, Perm::from_images(&scale)?])
}

fn pow_mod(b: usize, e: usize, m: usize) -> usize {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

/// Points of the projective plane over `F_q` as normalized vectors (first
/// nonzero coordinate 1), in lexicographic order.
fn projective_points(q: usize) -> Vec<[usize; 3]> {
    let mut pts = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    pts.push(v);
                }
            }
        }
    }
    pts.sort_by_key(|v| std::cmp::Reverse(*v));
    pts
}

fn normalize(v: [usize; 3], q: usize) -> [usize; 3] {
    let lead = *v.iter().find(|&&x| x != 0).expect("nonzero vector");
    let inv = (1..q).find(|&i| i * lead % q == 1).expect("field inverse");
    v.map(|x| x * inv % q)
}

/// `SL_3(F_q)` acting on the `q^2 + q + 1` points of the projective plane,
/// generated by the elementary transvections. Faithful (and equal to
/// `PSL_3(q)`) for `q` = 2, 3.
pub fn projective_special_linear(q: usize) -> Result<PermGroup, GroupError> {
    let pts = projective_points(q);
    let pos = |v: [usize; 3]| pts.iter().position(|w| *w == v).expect("point on the plane");
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            // x_i += x_j
            let images: Vec<usize> = pts
                .iter()
                .map(|v| {
                    let mut w = *v;
                    w[i] = (w[i] + w[j]) % q;
                    pos(normalize(w, q))
                })
                .collect();
            gens.push(Perm::from_images(&images)?);
        }
    }
    PermGroup::generate(pts.len(), &gens)
}

/// `PSL_2(7) = PSL_3(2)` on the 7 points of the Fano plane.
pub fn psl27() -> Result<PermGroup, GroupError> {
    projective_special_linear(2)
}

/// `PSL_3(3)` on the 13 points of the projective plane over `F_3`.
pub fn psl33() -> Result<PermGroup, GroupError> {
    projective_special_linear(3)
}

pub fn point_stabilizer(g: &PermGroup, point: usize) -> PermGroup {
    g.filter_subgroup(|x| x.image(point) == point)
}

pub fn cyclic_subgroup(g: &PermGroup, x: &Perm) -> Result<PermGroup, GroupError> {
    g.subgroup(&[*x])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(a5().unwrap().order(), 60);
        assert_eq!(alternating(5).unwrap().order(), 60);
        assert_eq!(symmetric(5).unwrap().order(), 120);
        assert_eq!(d5().unwrap().order(), 10);
        assert_eq!(f20().unwrap().order(), 20);
        assert_eq!(a4().unwrap().order(), 12);
        assert_eq!(affine_group(13, 12).unwrap().order(), 156);
        assert_eq!(affine_group(7, 3).unwrap().order(), 21);
        assert_eq!(psl27().unwrap().order(), 168);
    }

    #[test]
    fn psl27_census() {
        let g = psl27().unwrap();
        let allowed: Vec<Vec<usize>> = vec![vec![1; 7], vec![1, 1, 1, 2, 2], vec![1, 3, 3], vec![7], vec![1, 2, 4]];
        assert!(g.cycle_types().iter().all(|t| allowed.contains(t)));
        assert!(g.elements().iter().all(Perm::is_even));
        assert!(g.is_transitive());
    }
}
