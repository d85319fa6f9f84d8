use proptest::prelude::*;
use racah_core::{Monomial, Poly, QPoly, QWeylOp, Rational, Space};

const RING: Space = Space { vars: 3, nus: 0 };
const OPS: Space = Space { vars: 2, nus: 1 };

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Exponent vectors over `width` slots with total degree `<= max_deg`.
fn exponents(width: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, width)
        .prop_filter("degree bound", move |e| e.iter().sum::<u32>() <= max_deg)
}

fn poly(space: Space, max_deg: u32, max_terms: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((exponents(space.width(), max_deg), rational()), 0..=max_terms)
        .prop_map(move |terms| {
            Poly::from_terms(space, terms.into_iter().map(|(e, c)| (Monomial(e), c))).unwrap()
        })
}

fn weyl(max_order: u32) -> impl Strategy<Value = QWeylOp> {
    prop::collection::vec((poly(OPS, 2, 3), exponents(OPS.vars, max_order)), 0..=3).prop_map(
        |terms| {
            terms.into_iter().fold(QWeylOp::zero(OPS), |acc, (c, e)| {
                acc + QWeylOp::term(c, e).unwrap()
            })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_is_a_commutative_group(a in poly(RING, 4, 5), b in poly(RING, 4, 5), c in poly(RING, 4, 5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &QPoly::zero(RING), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-b.clone()), &a - &b);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in poly(RING, 4, 4), b in poly(RING, 4, 4), c in poly(RING, 4, 4)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &QPoly::one(RING), a.clone());
        prop_assert!((&a * &QPoly::zero(RING)).is_zero());
    }

    #[test]
    fn multiplication_distributes(a in poly(RING, 4, 4), b in poly(RING, 4, 4), c in poly(RING, 4, 4)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn diff_is_a_derivation(p in poly(RING, 4, 5), q in poly(RING, 4, 5), var in 1usize..=3) {
        let lhs = (&p * &q).diff(var).unwrap();
        let rhs = &(&p.diff(var).unwrap() * &q) + &(&p * &q.diff(var).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn diff_is_linear_and_commutes(p in poly(RING, 4, 5), q in poly(RING, 4, 5), c in rational()) {
        prop_assert_eq!(
            (&p.scale(&c) + &q).diff(1).unwrap(),
            &p.diff(1).unwrap().scale(&c) + &q.diff(1).unwrap()
        );
        prop_assert_eq!(p.diff(1).unwrap().diff(2).unwrap(), p.diff(2).unwrap().diff(1).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn composition_is_associative(a in weyl(2), b in weyl(2), c in weyl(2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn composition_distributes(a in weyl(2), b in weyl(2), c in weyl(2)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn action_is_a_module_action(a in weyl(2), b in weyl(2), p in poly(OPS, 3, 4)) {
        let composed = (&a * &b).apply(&p).unwrap();
        let sequential = a.apply(&b.apply(&p).unwrap()).unwrap();
        prop_assert_eq!(composed, sequential);
        prop_assert_eq!(QWeylOp::one(OPS).apply(&p).unwrap(), p);
    }

    #[test]
    fn leibniz_commutator_is_the_derivative(q in poly(OPS, 3, 4), i in 1usize..=2) {
        let d = QWeylOp::d(OPS, i);
        let mult = QWeylOp::from_poly(q.clone());
        let comm = d.commutator(&mult).unwrap();
        prop_assert_eq!(comm, QWeylOp::from_poly(q.diff(i).unwrap()));
    }

    #[test]
    fn commutator_is_a_derivation(a in weyl(1), b in weyl(1), c in weyl(1)) {
        let lhs = a.commutator(&(&b * &c)).unwrap();
        let rhs = &(&a.commutator(&b).unwrap() * &c) + &(&b * &a.commutator(&c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn canonical_weyl_relations() {
    let s = Space::new(3, 2);
    for i in 1..=3 {
        for j in 1..=3 {
            let (u_i, u_j, d_i, d_j) =
                (QWeylOp::u(s, i), QWeylOp::u(s, j), QWeylOp::d(s, i), QWeylOp::d(s, j));
            let expected = if i == j { QWeylOp::one(s) } else { QWeylOp::zero(s) };
            assert_eq!(d_i.commutator(&u_j).unwrap(), expected, "[d{i}, u{j}]");
            assert!(u_i.commutator(&u_j).unwrap().is_zero());
            assert!(d_i.commutator(&d_j).unwrap().is_zero());
        }
    }
    let k = QWeylOp::from_poly(QPoly::k(s));
    assert!(k.commutator(&QWeylOp::d(s, 1)).unwrap().is_zero());
}

#[test]
fn d1_past_u1_squared_acts_like_its_normal_form() {
    let s = Space::new(2, 0);
    let u1 = QWeylOp::u(s, 1);
    let d1 = QWeylOp::d(s, 1);
    let composed = &d1 * &u1.pow(2);
    let expected = &u1.pow(2) * &d1 + &(&u1 * &QWeylOp::scalar(s, Rational::from_integer(2.into())));
    assert_eq!(composed, expected);
    for a in 0..5 {
        for b in 0..3 {
            let m = &QPoly::u(s, 1).pow(a) * &QPoly::u(s, 2).pow(b);
            let by_steps = d1.apply(&u1.apply(&u1.apply(&m).unwrap()).unwrap()).unwrap();
            assert_eq!(composed.apply(&m).unwrap(), by_steps, "u1^{a} u2^{b}");
            assert_eq!(expected.apply(&m).unwrap(), by_steps);
        }
    }
}
