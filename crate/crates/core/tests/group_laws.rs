use folrank::groups::{GroupElement, GroupSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn groups() -> Vec<GroupSpec> {
    vec![
        GroupSpec::zd(1),
        GroupSpec::zd(2),
        GroupSpec::finite(vec![3, 4]).unwrap(),
        GroupSpec::finite_times_zd(vec![2], 1).unwrap(),
        GroupSpec::Heisenberg,
    ]
}

fn element(group: &GroupSpec, raw: &[i64]) -> GroupElement {
    group.element(&raw[..group.coord_len()]).unwrap()
}

proptest! {
    #[test]
    fn group_axioms(gi in 0usize..5, a in prop::collection::vec(-6i64..6, 3), b in prop::collection::vec(-6i64..6, 3), c in prop::collection::vec(-6i64..6, 3)) {
        let group = &groups()[gi];
        let (x, y, z) = (element(group, &a), element(group, &b), element(group, &c));
        let e = group.identity();
        let xy_z = group.mul(&group.mul(&x, &y).unwrap(), &z).unwrap();
        let x_yz = group.mul(&x, &group.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(group.mul(&x, &e).unwrap(), x.clone());
        prop_assert_eq!(group.mul(&e, &x).unwrap(), x.clone());
        prop_assert_eq!(group.mul(&x, &group.inverse(&x)).unwrap(), e.clone());
        prop_assert_eq!(group.mul(&group.inverse(&x), &x).unwrap(), e);
        if group.is_abelian() {
            prop_assert_eq!(group.mul(&x, &y).unwrap(), group.mul(&y, &x).unwrap());
        }
    }

    #[test]
    fn elements_are_reduced(a in prop::collection::vec(-20i64..20, 2)) {
        let group = GroupSpec::finite(vec![3, 4]).unwrap();
        let x = group.element(&a).unwrap();
        prop_assert!(group.contains(&x));
        prop_assert_eq!(x.coords(), &[a[0].rem_euclid(3), a[1].rem_euclid(4)][..]);
    }
}

#[test]
fn heisenberg_is_not_abelian() {
    let h = GroupSpec::Heisenberg;
    let x = h.element(&[1, 0, 0]).unwrap();
    let y = h.element(&[0, 1, 0]).unwrap();
    assert_eq!(h.mul(&x, &y).unwrap().coords(), &[1, 1, 1]);
    assert_eq!(h.mul(&y, &x).unwrap().coords(), &[1, 1, 0]);
}

#[test]
fn window_sizes() {
    for group in groups() {
        for l in [1, 2, 3, 5] {
            let w = group.folner_set(l).unwrap();
            assert_eq!(Some(w.len() as u128), group.folner_size(l), "{group:?} L={l}");
            assert!(w.elements().windows(2).all(|p| p[0] < p[1]));
            assert!(w.elements().iter().all(|g| w.position(g).is_some()));
        }
    }
    assert_eq!(GroupSpec::Heisenberg.folner_set(2).unwrap().len(), 5 * 5 * 9);
    assert_eq!(GroupSpec::finite(vec![2, 3]).unwrap().folner_set(7).unwrap().len(), 6);
}

#[test]
fn boundary_ratios_shrink() {
    for group in
        [GroupSpec::zd(1), GroupSpec::zd(2), GroupSpec::finite_times_zd(vec![3], 1).unwrap(), GroupSpec::Heisenberg]
    {
        let k = group.unit_box().into_iter().collect();
        let ratios: Vec<BigRational> =
            [2, 4, 8].iter().map(|&l| group.boundary_ratio(&group.folner_set(l).unwrap(), &k)).collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2], "{group:?}: {ratios:?}");
    }
    // Exact ratio for the unit box of ℤ²: |[-1, L]²∖[0, L)²| / L².
    let z2 = GroupSpec::zd(2);
    let k = z2.unit_box().into_iter().collect();
    let r = z2.boundary_ratio(&z2.folner_set(8).unwrap(), &k);
    assert_eq!(r, BigRational::new(BigInt::from(100 - 64), BigInt::from(64)));
    // Finite groups are invariant under every translate.
    let c6 = GroupSpec::finite(vec![6]).unwrap();
    let k = c6.unit_box().into_iter().collect();
    assert_eq!(c6.boundary_ratio(&c6.folner_set(1).unwrap(), &k), BigRational::from_integer(BigInt::from(0)));
}

#[test]
fn window_budget_is_enforced() {
    let z3 = GroupSpec::zd(3);
    assert!(z3.folner_set_with_budget(100, 1000).is_err());
    assert!(z3.folner_set_with_budget(10, 1000).is_ok());
}
