mod common;

use common::*;
use conic_core::vectorfield::{lie_bracket, wedge};
use conic_core::Expr;
use proptest::prelude::*;

fn times(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    core::array::from_fn(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn antisymmetry(u in field(), v in field()) {
        prop_assert_eq!(lie_bracket(&u, &v), -&lie_bracket(&v, &u));
        prop_assert!(lie_bracket(&u, &u).is_zero());
    }

    #[test]
    fn jacobi(u in poly_field(), v in poly_field(), w in poly_field()) {
        let s = &(&lie_bracket(&u, &lie_bracket(&v, &w)) + &lie_bracket(&v, &lie_bracket(&w, &u)))
            + &lie_bracket(&w, &lie_bracket(&u, &v));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn leibniz(u in field(), v in field(), h in expr()) {
        let lhs = lie_bracket(&u, &v.scale_by(&h));
        let rhs = &lie_bracket(&u, &v).scale_by(&h) + &v.scale_by(&u.apply(&h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_matches_numeric_jacobians(u in field(), v in field(), p in point()) {
        // [u, v] = Dv·u − Du·v with Jacobians from central differences.
        let du = fd_jacobian(|q| u.eval(q).unwrap(), &p, 1e-5);
        let dv = fd_jacobian(|q| v.eval(q).unwrap(), &p, 1e-5);
        let (up, vp) = (u.eval(&p).unwrap(), v.eval(&p).unwrap());
        let (a, b) = (times(&dv, &up), times(&du, &vp));
        let exact = lie_bracket(&u, &v).eval(&p).unwrap();
        for i in 0..3 {
            prop_assert!(close(a[i] - b[i], exact[i], 1e-5), "component {}: {} vs {}", i, a[i] - b[i], exact[i]);
        }
    }

    #[test]
    fn wedge_vanishes_on_multiples(u in field(), h in expr()) {
        prop_assert!(wedge(&u, &u.scale_by(&h)).iter().all(Expr::is_zero));
    }
}

#[test]
fn elliptic_drift_bracket() {
    let s = conic_core::systems::elliptic();
    assert_eq!(lie_bracket(&s.f, &s.g).to_string(), "sin(w), -cos(w), 0");
    assert!(lie_bracket(&s.g, &s.g).is_zero());
}
