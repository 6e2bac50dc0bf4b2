use folrank::groupring::{window_matrix, RingElem, RingMatrix};
use folrank::groups::GroupSpec;
use folrank::rational::int;
use num_bigint::BigInt;
use proptest::prelude::*;

fn groups() -> Vec<GroupSpec> {
    vec![GroupSpec::zd(1), GroupSpec::zd(2), GroupSpec::finite_times_zd(vec![3], 1).unwrap(), GroupSpec::Heisenberg]
}

type RawTerms = Vec<(i64, Vec<i64>)>;

fn raw_terms() -> impl Strategy<Value = RawTerms> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(-2i64..=2, 3)), 0..4)
}

fn elem(group: &GroupSpec, raw: &RawTerms) -> RingElem {
    let len = group.coord_len();
    let terms: Vec<(i64, &[i64])> = raw.iter().map(|(c, g)| (*c, &g[..len])).collect();
    RingElem::from_ints(group, &terms).unwrap()
}

fn matrix(group: &GroupSpec, rows: usize, cols: usize, raw: &[RawTerms]) -> RingMatrix {
    let entries = (0..rows * cols).map(|i| elem(group, &raw[i % raw.len()])).collect();
    RingMatrix::new(group, rows, cols, entries).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(gi in 0usize..4, a in raw_terms(), b in raw_terms(), c in raw_terms()) {
        let group = &groups()[gi];
        let (x, y, z) = (elem(group, &a), elem(group, &b), elem(group, &c));
        let one = RingElem::one(group);
        prop_assert_eq!(x.try_mul(&y).unwrap().try_mul(&z).unwrap(), x.try_mul(&y.try_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.try_mul(&y.try_add(&z).unwrap()).unwrap(),
            x.try_mul(&y).unwrap().try_add(&x.try_mul(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            y.try_add(&z).unwrap().try_mul(&x).unwrap(),
            y.try_mul(&x).unwrap().try_add(&z.try_mul(&x).unwrap()).unwrap()
        );
        prop_assert_eq!(x.try_mul(&one).unwrap(), x.clone());
        prop_assert_eq!(one.try_mul(&x).unwrap(), x.clone());
        prop_assert!(x.try_sub(&x).unwrap().is_zero());
        prop_assert_eq!(x.try_add(&y).unwrap(), y.try_add(&x).unwrap());
    }

    #[test]
    fn star_is_an_anti_involution(gi in 0usize..4, a in raw_terms(), b in raw_terms()) {
        let group = &groups()[gi];
        let (x, y) = (elem(group, &a), elem(group, &b));
        prop_assert_eq!(x.star().star(), x.clone());
        prop_assert_eq!(x.try_mul(&y).unwrap().star(), y.star().try_mul(&x.star()).unwrap());
        prop_assert_eq!(x.norm1(), x.star().norm1());
    }

    #[test]
    fn support_of_products(gi in 0usize..4, a in raw_terms(), b in raw_terms()) {
        let group = &groups()[gi];
        let (x, y) = (elem(group, &a), elem(group, &b));
        let allowed = group.product_set(&x.support(), &y.support());
        prop_assert!(x.try_mul(&y).unwrap().support().is_subset(&allowed));
        prop_assert!(x.try_mul(&y).unwrap().norm1() <= x.norm1() * y.norm1());
    }

    #[test]
    fn matrix_involution_reverses_products(
        gi in 0usize..4,
        (m, n, p) in (1usize..3, 1usize..3, 1usize..3),
        raw in prop::collection::vec(raw_terms(), 1..5),
    ) {
        let group = &groups()[gi];
        let f = matrix(group, m, n, &raw);
        let mut shifted = raw.clone();
        shifted.rotate_left(1);
        let g = matrix(group, n, p, &shifted);
        let fg = f.try_mul(&g).unwrap();
        prop_assert_eq!(fg.involution(), g.involution().try_mul(&f.involution()).unwrap());
        prop_assert_eq!(f.involution().involution(), f);
    }

    #[test]
    fn window_matrix_is_multiplication(
        gi in 0usize..4,
        (m, n) in (1usize..3, 1usize..3),
        raw in prop::collection::vec(raw_terms(), 1..4),
        xs in prop::collection::vec(-4i64..=4, 1..40),
        l in 1u64..3,
    ) {
        let group = &groups()[gi];
        let f = matrix(group, m, n, &raw);
        let window = group.folner_set(l).unwrap();
        let w = window_matrix(&f, &window).unwrap();
        // x supported on F, one column of the group ring per generator
        let values: Vec<i64> = (0..n * window.len()).map(|i| xs[i % xs.len()]).collect();
        let x_cols: Vec<RingElem> = (0..n)
            .map(|k| {
                let terms = window.elements().iter().enumerate()
                    .map(|(i, s)| (s.clone(), int(values[k * window.len() + i])));
                RingElem::from_terms(group, terms).unwrap()
            })
            .collect();
        let x = RingMatrix::new(group, n, 1, x_cols).unwrap();
        let fx = f.try_mul(&x).unwrap();
        let image = w.matrix.mul_vec(&values.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()).unwrap();
        for (r, (j, t)) in w.row_index.iter().enumerate() {
            prop_assert_eq!(num_rational::BigRational::from_integer(image[r].clone()), fx.entry(*j, 0).coeff(t));
        }
        // nothing of fx lives outside the row index
        let rows: std::collections::BTreeSet<_> = w.row_index.iter().map(|(_, t)| t.clone()).collect();
        for j in 0..m {
            prop_assert!(fx.entry(j, 0).support().is_subset(&rows));
        }
    }
}

#[test]
fn window_matrix_shapes() {
    let z = GroupSpec::zd(1);
    let f = RingMatrix::scalar(RingElem::from_ints(&z, &[(1, &[0]), (2, &[1])]).unwrap());
    let w = window_matrix(&f, &z.folner_set(4).unwrap()).unwrap();
    assert_eq!((w.rows(), w.cols()), (5, 4));
    let zero = RingMatrix::zero(&z, 2, 3);
    let w = window_matrix(&zero, &z.folner_set(4).unwrap()).unwrap();
    assert_eq!((w.rows(), w.cols(), w.matrix.nnz()), (8, 12, 0));
}

#[test]
fn json_round_trip() {
    let z2 = GroupSpec::zd(2);
    let f = RingMatrix::from_rows(
        &z2,
        2,
        vec![vec![
            RingElem::from_ints(&z2, &[(1, &[1, 0]), (-1, &[0, 0])]).unwrap(),
            RingElem::from_ints(&z2, &[(1, &[0, 1]), (-1, &[0, 0])]).unwrap(),
        ]],
    )
    .unwrap();
    let text = serde_json::to_string(&f).unwrap();
    let back: RingMatrix = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
}
