use inertia_lab::groups::*;

#[test]
fn psl33_order_and_fixed_point_free_elements() {
    let g = psl33().unwrap();
    assert_eq!(g.degree(), 13);
    assert_eq!(g.order(), 5616);
    assert!(g.is_transitive());
    let fpf = g.fixed_point_free_elements();
    let order13: Vec<Perm> = g.elements().iter().copied().filter(|p| p.order() == 13).collect();
    assert_eq!(fpf, order13);
    // 144 Sylow 13-subgroups, 12 generators each.
    assert_eq!(fpf.len(), 1728);
}

#[test]
fn psl33_involution_centralizers_fix_points() {
    let g = psl33().unwrap();
    let invs = g.involutions();
    assert!(!invs.is_empty());
    for t in &invs {
        assert_eq!(t.cycle_type(), vec![1, 1, 1, 1, 1, 2, 2, 2, 2]);
        assert!(g.centralizer(t).fixes_a_point());
    }
    assert!(g.generated_by_involutions());
}

#[test]
fn psl33_cover_and_decomposition_groups() {
    let g = psl33().unwrap();
    let stab = point_stabilizer(&g, 0);
    assert_eq!(stab.order(), 432);
    let x = g.elements().iter().find(|p| p.order() == 13).unwrap();
    let syl = cyclic_subgroup(&g, x).unwrap();
    let cover = conjugate_cover_check(&g, &[("stabilizer", &stab), ("Sylow-13", &syl)]).unwrap();
    assert!(cover.is_cover && cover.trivial_intersection);
    assert_eq!(cover.s_value, Some(2));
    let rep = decomposition_compatibility(&g, &[&stab, &syl], 2).unwrap();
    assert!(rep.compatible, "{:?}", rep.offenders.first());
}

#[test]
fn a5_census() {
    let g = a5().unwrap();
    let census = g.cycle_type_census();
    let expected = [(vec![1, 1, 1, 1, 1], 1), (vec![1, 1, 3], 20), (vec![1, 2, 2], 15), (vec![5], 24)];
    assert_eq!(census.len(), 4);
    for (t, n) in expected {
        assert_eq!(census[&t], n);
    }
    assert!(g.generated_by_involutions());
    let tau = Perm::from_cycles(5, &[&[1, 2], &[3, 4]]).unwrap();
    assert_eq!(g.centralizer(&tau).order(), 4);
    assert_eq!(g.centralizer(&g.identity()).order(), 60);
}

#[test]
fn cyclic_group_not_generated_by_involutions() {
    let g = PermGroup::generate(3, &[Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap()]).unwrap();
    assert!(!g.generated_by_involutions());
}
