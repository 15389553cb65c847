#![allow(dead_code)]

use conic_core::expr::{Monomial, Trig};
use conic_core::{ControlSystem, Expr, FeedbackTransform, Point, Rational, VectorField};
use proptest::prelude::*;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn monomial() -> impl Strategy<Value = Monomial> {
    (0u32..3, 0u32..3, 0u32..3, prop_oneof![Just(None), (0usize..2, 1u32..3).prop_map(Some)], -2i32..3).prop_map(
        |(px, py, pw, trig, e)| {
            let trig = trig.map(|(t, k)| (if t == 0 { Trig::Cos } else { Trig::Sin }, k));
            Monomial::new(px, py, pw, trig, e).expect("valid monomial")
        },
    )
}

pub fn poly_monomial() -> impl Strategy<Value = Monomial> {
    (0u32..3, 0u32..3, 0u32..3).prop_map(|(a, b, c)| Monomial::poly(a, b, c))
}

fn sum_of(terms: Vec<(Monomial, i64, i64)>) -> Expr {
    terms
        .into_iter()
        .fold(Expr::zero(), |acc, (m, n, d)| acc + Expr::term(m, Rational::new(n.into(), d.into())))
}

/// Sums of up to four terms from the full expression class.
pub fn expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((monomial(), -4i64..5, 1i64..4), 0..5).prop_map(sum_of)
}

pub fn poly_expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((poly_monomial(), -4i64..5, 1i64..4), 0..5).prop_map(sum_of)
}

pub fn field() -> impl Strategy<Value = VectorField> {
    (expr(), expr(), expr()).prop_map(|(a, b, c)| VectorField::new(a, b, c))
}

pub fn poly_field() -> impl Strategy<Value = VectorField> {
    (poly_expr(), poly_expr(), poly_expr()).prop_map(|(a, b, c)| VectorField::new(a, b, c))
}

pub fn point() -> impl Strategy<Value = Point> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y, w)| Point::new(x, y, w))
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Central-difference Jacobian of a numeric map.
pub fn fd_jacobian(f: impl Fn(&Point) -> [f64; 3], p: &Point, h: f64) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut a = p.to_array();
        let mut b = p.to_array();
        a[j] += h;
        b[j] -= h;
        let (fa, fb) = (f(&Point::from_array(a)), f(&Point::from_array(b)));
        for i in 0..3 {
            out[i][j] = (fa[i] - fb[i]) / (2.0 * h);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
/// A block-triangular unimodular transform that keeps trig and exponential
/// terms in the rational class.
pub fn transform(
    a: i64,
    b: i64,
    cx: i64,
    cy: i64,
    flip: bool,
    tx: i64,
    ty: i64,
    alpha: Expr,
    beta: Rational,
) -> FeedbackTransform {
    let s = if flip { -1 } else { 1 };
    FeedbackTransform {
        matrix: [[q(1 + a * b), q(b), q(cx)], [q(a), q(1), q(cy)], [q(0), q(0), q(s)]],
        translation: [q(tx), q(ty), q(0)],
        alpha,
        beta: Expr::constant(beta),
    }
}

pub fn feedback() -> impl Strategy<Value = FeedbackTransform> {
    (
        (-2i64..3, -2i64..3, -1i64..2, -1i64..2, any::<bool>()),
        (-2i64..3, -2i64..3),
        poly_expr(),
        prop::sample::select(vec![(1i64, 2i64), (1, 1), (2, 1), (3, 1)]),
    )
        .prop_map(|((a, b, cx, cy, flip), (tx, ty), alpha, (n, d))| {
            transform(a, b, cx, cy, flip, tx, ty, alpha, Rational::new(n.into(), d.into()))
        })
}

pub fn with_base(s: ControlSystem, p: Point) -> ControlSystem {
    s.with_base(p)
}
