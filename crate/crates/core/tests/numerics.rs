mod common;

use std::f64::consts::{E, FRAC_PI_2, PI};

use common::*;
use conic_core::numerics::{
    build_chart, chart_invariant, constraint_residual, flow_pushforward_residual, integrate_flow, simulate, ChartBox,
    ControlSchedule, NumericsError,
};
use conic_core::systems::{self, ConicKind};
use conic_core::vectorfield::apply_feedback;
use conic_core::{parse, solve_symmetries, Ansatz, Point, SymmetryBasis, VectorField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn field(x: &str, y: &str, w: &str) -> VectorField {
    VectorField::new(parse(x).unwrap(), parse(y).unwrap(), parse(w).unwrap())
}

fn dist(a: &Point, b: &Point) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2) + (a.w - b.w).powi(2)).sqrt()
}

#[test]
fn rotation_flow() {
    let v = field("y", "-x", "-1");
    let (q, m) = integrate_flow(&v, &Point::new(1.0, 0.0, 0.0), FRAC_PI_2, 1e-3).unwrap();
    assert!(dist(&q, &Point::new(0.0, -1.0, -FRAC_PI_2)) < 1e-8);
    let expect = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((m[i][j] - expect[i][j]).abs() < 1e-8);
        }
    }
}

#[test]
fn scalar_growth_flow() {
    let (q, m) = integrate_flow(&field("0", "0", "w"), &Point::new(0.0, 0.0, 1.0), 1.0, 1e-3).unwrap();
    assert!((q.w - E).abs() < 1e-10 && (m[2][2] - E).abs() < 1e-10);
}

fn smooth_field() -> VectorField {
    field("cos(w) + 1/2*y", "x*sin(w)", "1 + 1/4*y^2")
}

#[test]
fn rk4_is_fourth_order() {
    let v = smooth_field();
    let p = Point::new(0.3, -0.2, 0.1);
    let (reference, _) = integrate_flow(&v, &p, 1.0, 1e-3).unwrap();
    let (coarse, _) = integrate_flow(&v, &p, 1.0, 0.1).unwrap();
    let (fine, _) = integrate_flow(&v, &p, 1.0, 0.05).unwrap();
    let ratio = dist(&coarse, &reference) / dist(&fine, &reference);
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn variational_jacobian_matches_finite_differences() {
    let v = smooth_field();
    for p in [Point::new(0.3, -0.2, 0.1), Point::new(-1.0, 0.5, 2.0)] {
        let (_, m) = integrate_flow(&v, &p, 0.8, 1e-3).unwrap();
        let fd = fd_jacobian(|q| integrate_flow(&v, q, 0.8, 1e-3).unwrap().0.to_array(), &p, 1e-5);
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - fd[i][j]).abs() < 1e-6, "({i},{j}) {} vs {}", m[i][j], fd[i][j]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flow_group_law(s in 0.0f64..0.5, t in 0.0f64..0.5, p in point(), which in 0usize..4) {
        let v = [smooth_field(), field("y", "-x", "-1"), field("2*x", "y", "w"), field("cosh(w)", "sinh(w)", "1")][which].clone();
        let step = 0.01;
        let (a, _) = integrate_flow(&v, &p, s, step).unwrap();
        let (ab, _) = integrate_flow(&v, &a, t, step).unwrap();
        let (direct, _) = integrate_flow(&v, &p, s + t, step).unwrap();
        prop_assert!(dist(&ab, &direct) < 10.0 * step.powi(4), "{}", dist(&ab, &direct));
    }
}

#[test]
fn generators_are_numerical_symmetries() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for kind in [ConicKind::Elliptic, ConicKind::Hyperbolic, ConicKind::Parabolic] {
        let s = systems::for_kind(kind);
        for v in systems::symmetries_for_kind(kind) {
            for _ in 0..5 {
                let p = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                for t in [0.1, 0.5, 1.0] {
                    let r = flow_pushforward_residual(&v, &s, &p, t).unwrap();
                    assert!(r < 1e-6, "{kind} v = {v} p = {p:?} t = {t}: {r}");
                }
            }
        }
    }
    let r = flow_pushforward_residual(&field("x", "0", "0"), &systems::elliptic(), &Point::new(1.0, 0.0, 0.0), 0.5);
    assert!(r.unwrap() > 1e-2);
    let r = flow_pushforward_residual(&field("1", "0", "0"), &systems::elliptic(), &Point::new(0.4, 0.0, 2.0), 0.5);
    assert!(r.unwrap() < 1e-8);
}

#[test]
fn simulation_examples() {
    let e = systems::elliptic();
    let tr = simulate(&e, &ControlSchedule::constant(1.0), &Point::ORIGIN, 2.0 * PI, 1e-3).unwrap();
    assert!(dist(&tr.endpoint().unwrap(), &Point::new(0.0, 0.0, 2.0 * PI)) < 1e-6);
    let tr = simulate(&systems::parabolic(), &ControlSchedule::constant(0.0), &Point::new(0.0, 0.0, 2.0), 1.0, 1e-3)
        .unwrap();
    assert!(dist(&tr.endpoint().unwrap(), &Point::new(4.0, 2.0, 2.0)) < 1e-12);
}

fn random_schedule(rng: &mut impl Rng, t_end: f64) -> ControlSchedule {
    let n = rng.gen_range(1..6);
    let mut starts: Vec<f64> = (1..n).map(|_| rng.gen_range(0.0..t_end)).collect();
    starts.sort_by(f64::total_cmp);
    starts.dedup();
    let pieces = std::iter::once(0.0).chain(starts).map(|t| (t, rng.gen_range(-1.0..1.0))).collect();
    ControlSchedule::new(pieces).unwrap()
}

#[test]
fn trajectories_satisfy_their_constraint() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for kind in [ConicKind::Elliptic, ConicKind::Hyperbolic, ConicKind::Parabolic] {
        let s = systems::for_kind(kind);
        for _ in 0..50 {
            let u = random_schedule(&mut rng, 2.0);
            let p = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let tr = simulate(&s, &u, &p, 2.0, 1e-3).unwrap();
            let r = constraint_residual(&tr, kind).unwrap();
            assert!(r < 1e-6, "{kind}: {r}");
        }
    }
}

#[test]
fn constraint_detects_the_wrong_conic() {
    let tr = simulate(&systems::elliptic(), &ControlSchedule::constant(0.0), &Point::ORIGIN, 1.0, 1e-3).unwrap();
    assert!(constraint_residual(&tr, ConicKind::Elliptic).unwrap() < 1e-10);
    let tr = simulate(&systems::elliptic(), &ControlSchedule::constant(0.0), &Point::new(0.0, 0.0, FRAC_PI_2), 1.0, 1e-3)
        .unwrap();
    assert!(constraint_residual(&tr, ConicKind::Hyperbolic).unwrap() >= 1.0 - 1e-6);
}

fn chart_reading(s: &conic_core::ControlSystem, p: Point, half: f64, kind: ConicKind) -> (f64, f64) {
    let b = solve_symmetries(s, &Ansatz::default()).unwrap();
    let ch = build_chart(s, &b, &p, ChartBox::new(half), 1e-3).unwrap();
    assert!(ch.report.v1_residual < 1e-6 && ch.report.v2_residual < 1e-6);
    assert!(ch.report.g_ratio_spread < 1e-6);
    let r = chart_invariant(s, &ch, kind).unwrap();
    (r.value, r.spread)
}

#[test]
fn identity_charts_read_the_conserved_quantity() {
    let (value, spread) = chart_reading(&systems::elliptic(), Point::ORIGIN, 0.5, ConicKind::Elliptic);
    assert!((value - 1.0).abs() < 1e-12 && spread < 1e-12);
    let (value, spread) = chart_reading(&systems::hyperbolic(), Point::ORIGIN, 0.5, ConicKind::Hyperbolic);
    assert!((value - 1.0).abs() < 1e-10 && spread < 1e-10);
    let (value, spread) = chart_reading(&systems::parabolic(), Point::new(0.0, 0.0, 1.0), 0.5, ConicKind::Parabolic);
    assert!((value - 1.0).abs() < 1e-10 && spread < 1e-10);
}

#[test]
fn scrambled_charts_keep_the_invariant_constant() {
    let t = transform(1, -1, 1, 0, true, 2, -1, parse("x*w - 2*y^2 + 1").unwrap(), q(2));
    let cases = [
        (systems::elliptic(), Point::new(0.1, 0.2, 0.3), ConicKind::Elliptic),
        (systems::hyperbolic(), Point::new(0.0, 0.0, 0.2), ConicKind::Hyperbolic),
        (systems::parabolic(), Point::new(0.0, 0.0, 1.0), ConicKind::Parabolic),
    ];
    for (s, p, kind) in cases {
        let moved = apply_feedback(&s.with_base(p), &t).unwrap();
        let (_, spread) = chart_reading(&moved, moved.base.unwrap(), 0.2, kind);
        assert!(spread < 1e-5, "{kind}: {spread}");
    }
}

#[test]
fn chart_preconditions() {
    let s = systems::elliptic();
    // An ideal spanned by ∂x and ∂w cannot be transversal to g = ∂w.
    let b = SymmetryBasis::new(vec![
        VectorField::coordinate(conic_core::Var::X),
        VectorField::coordinate(conic_core::Var::W),
        field("w", "0", "-x"),
    ])
    .unwrap();
    assert!(matches!(
        build_chart(&s, &b, &Point::ORIGIN, ChartBox::new(0.1), 1e-3),
        Err(NumericsError::NotIndependent)
    ));
    let p = systems::parabolic();
    let b = solve_symmetries(&p, &Ansatz::default()).unwrap();
    let ch = build_chart(&p, &b, &Point::ORIGIN, ChartBox::new(0.1), 1e-3).unwrap();
    assert!(matches!(chart_invariant(&p, &ch, ConicKind::Parabolic), Err(NumericsError::DivisionNearZero { .. })));
}
