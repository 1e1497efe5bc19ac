mod common;

use common::*;
use discres_core::verify::proportional;
use discres_core::{exact_div, gcd, primitive_part, sqrfree_part, Poly};
use proptest::prelude::*;

fn t3() -> discres_core::VarTable {
    table(&["x", "y", "z"])
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn gcd_divides_both((a, b, c) in structured(t3())) {
        let p = &a * &c;
        let q = &b * &c;
        let g = gcd(&p, &q);
        prop_assert!(exact_div(&p, &g).is_ok());
        prop_assert!(exact_div(&q, &g).is_ok());
        prop_assert!(exact_div(&g, &c).is_ok() || c.is_constant());
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn gcd_of_common_multiple((p, q, r) in structured(t3())) {
        let lhs = gcd(&(&p * &r), &(&q * &r));
        let rhs = gcd(&p, &q).as_poly() * primitive_part(&r).unwrap().as_poly();
        prop_assert!(proportional(&lhs, &rhs));
        prop_assert_eq!(lhs, gcd(&rhs, &rhs));
    }

    #[test]
    fn sqrfree_is_idempotent(p in poly(t3(), 3, 5, 9)) {
        let s = sqrfree_part(&p);
        prop_assert_eq!(sqrfree_part(s.as_poly()), s);
    }

    #[test]
    fn squares_are_killed(p in poly(t3(), 2, 3, 6), q in poly(t3(), 2, 3, 6)) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert_eq!(sqrfree_part(&(&(&p * &p) * &q)), sqrfree_part(&(&p * &q)));
    }

    #[test]
    fn sqrfree_divides(p in poly(t3(), 3, 5, 9)) {
        prop_assume!(!p.is_constant());
        prop_assert!(exact_div(&p, sqrfree_part(&p).as_poly()).is_ok());
    }

    #[test]
    fn sqrfree_of_known_factorization(
        roots in prop::collection::btree_set((-6i64..=6, -6i64..=6), 1..4),
        mults in prop::collection::vec(1u32..=3, 4),
    ) {
        let t = t3();
        let mut product = Poly::one(&t);
        let mut distinct = Poly::one(&t);
        for ((a, b), m) in roots.iter().zip(&mults) {
            let f = &(&parse("x + 1", &t) + &parse("y", &t).scale(&int(*a))) + &parse("z", &t).scale(&int(*b));
            product = &product * &f.pow(*m);
            distinct = &distinct * &f;
        }
        prop_assert_eq!(sqrfree_part(&product), gcd(&distinct, &distinct));
    }
}

#[test]
fn gcd_examples() {
    let t = t3();
    let g = gcd(&parse("x^2 - y^2", &t), &parse("x^2 + 2*x*y + y^2", &t));
    assert_eq!(g.to_string(), "x + y");
    assert_eq!(sqrfree_part(&parse("4*x^3 + 4*x^2", &t)).to_string(), "x^2 + x");
}
