mod common;

use common::*;
use conic_core::expr::Var;
use conic_core::{parse, Expr};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Expr::one(), a.clone());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in expr(), b in expr(), p in point()) {
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        prop_assert!(close((&a * &b).eval(&p).unwrap(), va * vb, 1e-9));
        prop_assert!(close((&a + &b).eval(&p).unwrap(), va + vb, 1e-9));
    }

    #[test]
    fn derivative_matches_central_difference(a in expr(), p in point()) {
        let h = 1e-5;
        for v in Var::ALL {
            let mut hi = p.to_array();
            let mut lo = p.to_array();
            hi[v.index()] += h;
            lo[v.index()] -= h;
            let fd = (a.eval(&conic_core::Point::from_array(hi)).unwrap()
                - a.eval(&conic_core::Point::from_array(lo)).unwrap()) / (2.0 * h);
            let exact = a.differentiate(v).eval(&p).unwrap();
            prop_assert!(close(fd, exact, 1e-6), "{} d/d{}: fd {} exact {}", a, v.name(), fd, exact);
        }
    }

    #[test]
    fn product_rule(a in expr(), b in expr()) {
        for v in Var::ALL {
            let lhs = (&a * &b).differentiate(v);
            let rhs = &(&a.differentiate(v) * &b) + &(&a * &b.differentiate(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn print_parse_round_trip(a in expr()) {
        let text = a.to_string();
        prop_assert_eq!(parse(&text).unwrap(), a, "{}", text);
    }
}

#[test]
fn trig_and_hyperbolic_identities() {
    let one = Expr::one();
    assert_eq!(&Expr::cos(1).pow(2) + &Expr::sin(1).pow(2), one);
    assert_eq!(&Expr::cosh(1).pow(2) - &Expr::sinh(1).pow(2), one);
    assert_eq!(parse("2*sin(w)*cos(w)").unwrap(), Expr::sin(2));
}
