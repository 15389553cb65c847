//! Seeded random feedback transformations for invariance checks.

use conic_core::vectorfield::{apply_feedback, FieldError};
use conic_core::{ControlSystem, Expr, FeedbackTransform, Monomial, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Draws an affine feedback transformation.
///
/// `φ` has an integer unimodular `(x, y)` block, integer coupling of `w`
/// into the `x` and `y` rows, `w ↦ ±w`, and integer translations in
/// `[-2, 2]`. The `w` translation is only drawn when `polynomial` is set,
/// since shifting `w` would give trigonometric and exponential terms
/// irrational coefficients. `α` is a polynomial of degree at most 2 with
/// small integer coefficients and `β ∈ {1/2, 1, 2, 3}`.
pub fn random_transform(rng: &mut impl Rng, polynomial: bool) -> FeedbackTransform {
    let a = rng.gen_range(-2..=2);
    let b = rng.gen_range(-2..=2);
    // [[1, b], [0, 1]] · [[1, 0], [a, 1]], possibly with its rows swapped.
    let mut block = [[1 + a * b, b], [a, 1]];
    if rng.gen_bool(0.5) {
        block.swap(0, 1);
    }
    if rng.gen_bool(0.5) {
        block[0] = block[0].map(|v| -v);
    }
    let sw: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let matrix = [
        [int(block[0][0]), int(block[0][1]), int(rng.gen_range(-1..=1))],
        [int(block[1][0]), int(block[1][1]), int(rng.gen_range(-1..=1))],
        [int(0), int(0), int(sw)],
    ];
    let tw = if polynomial { rng.gen_range(-2..=2) } else { 0 };
    let translation = [int(rng.gen_range(-2..=2)), int(rng.gen_range(-2..=2)), int(tw)];

    let mut monomials = Vec::new();
    for px in 0..=2u32 {
        for py in 0..=2 - px {
            for pw in 0..=2 - px - py {
                monomials.push(Monomial::poly(px, py, pw));
            }
        }
    }
    let terms = rng.gen_range(0..=3);
    let alpha = monomials
        .choose_multiple(rng, terms)
        .fold(Expr::zero(), |acc, m| {
            let c = *[-2i64, -1, 1, 2].choose(rng).expect("nonempty");
            acc + Expr::term(*m, int(c))
        });
    let beta = [
        Rational::new(1.into(), 2.into()),
        int(1),
        int(2),
        int(3),
    ]
    .choose(rng)
    .expect("nonempty")
    .clone();
    FeedbackTransform {
        matrix,
        translation,
        alpha,
        beta: Expr::constant(beta),
    }
}

pub fn transform_for_seed(seed: u64, polynomial: bool) -> FeedbackTransform {
    random_transform(&mut ChaCha8Rng::seed_from_u64(seed), polynomial)
}

fn is_polynomial(s: &ControlSystem) -> bool {
    s.f.components().iter().chain(s.g.components()).all(Expr::is_polynomial)
}

/// Applies the transform drawn for `seed` to `s`.
pub fn scramble(s: &ControlSystem, seed: u64) -> Result<(ControlSystem, FeedbackTransform), FieldError> {
    let t = transform_for_seed(seed, is_polynomial(s));
    let out = apply_feedback(s, &t)?;
    Ok((out, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use conic_core::expr::ExprError;
    use conic_core::linalg::det3;
    use conic_core::systems;

    #[test]
    fn transforms_are_unimodular_and_deterministic() {
        for seed in 0..200 {
            let t = transform_for_seed(seed, seed % 2 == 0);
            let d = det3(&t.matrix);
            assert!(d == int(1) || d == int(-1), "seed {seed}");
            assert_eq!(t, transform_for_seed(seed, seed % 2 == 0));
            assert!(t.alpha.degree() <= 2);
        }
    }

    #[test]
    fn trig_systems_stay_in_class() {
        for seed in 0..50 {
            let r = scramble(&systems::elliptic(), seed);
            assert!(!matches!(r, Err(FieldError::Expr(ExprError::OutOfClass))), "seed {seed}");
            r.unwrap();
        }
    }
}
