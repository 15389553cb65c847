//! Vector fields on R³, Lie brackets and control-affine systems.

use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::expr::{rational_to_f64, AffineSubst, Expr, ExprError, Point, Rational, Var};
use crate::linalg::{det3, inv3, mat3_mul, mat3_vec, Mat3};

/// Default tolerance of the pointwise rank and membership tests.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    /// `|g(p)|` is below tolerance where a nonzero control field is required.
    DegenerateG,
    NonInvertiblePhi,
    BetaVanishesAtBase,
    ZeroControlField,
    Expr(ExprError),
}

impl From<ExprError> for FieldError {
    fn from(e: ExprError) -> Self {
        FieldError::Expr(e)
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::DegenerateG => f.write_str("control field vanishes at the point"),
            FieldError::NonInvertiblePhi => f.write_str("affine map is not invertible"),
            FieldError::BetaVanishesAtBase => f.write_str("beta vanishes at the base point"),
            FieldError::ZeroControlField => f.write_str("control field is identically zero"),
            FieldError::Expr(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for FieldError {}

/// `cx ∂x + cy ∂y + cw ∂w`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VectorField {
    components: [Expr; 3],
}

impl VectorField {
    pub fn new(cx: Expr, cy: Expr, cw: Expr) -> Self {
        VectorField {
            components: [cx, cy, cw],
        }
    }

    pub fn from_components(components: [Expr; 3]) -> Self {
        VectorField { components }
    }

    pub fn zero() -> Self {
        VectorField::default()
    }

    /// The coordinate field `∂var`.
    pub fn coordinate(var: Var) -> Self {
        let mut v = VectorField::zero();
        v.components[var.index()] = Expr::one();
        v
    }

    pub fn components(&self) -> &[Expr; 3] {
        &self.components
    }

    pub fn component(&self, var: Var) -> &Expr {
        &self.components[var.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    /// `h · self` for a scalar function `h`.
    pub fn scale_by(&self, h: &Expr) -> Self {
        VectorField {
            components: core::array::from_fn(|i| h * &self.components[i]),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField {
            components: core::array::from_fn(|i| self.components[i].scale(c)),
        }
    }

    /// Lie derivative of a function along the field, `Σ vᵢ ∂ᵢh`.
    pub fn apply(&self, h: &Expr) -> Expr {
        Var::ALL.iter().fold(Expr::zero(), |acc, v| {
            let c = &self.components[v.index()];
            if c.is_zero() {
                acc
            } else {
                acc + c * &h.differentiate(*v)
            }
        })
    }

    pub fn eval(&self, p: &Point) -> Result<[f64; 3], ExprError> {
        Ok([
            self.components[0].eval(p)?,
            self.components[1].eval(p)?,
            self.components[2].eval(p)?,
        ])
    }

    /// Symbolic Jacobian, `jac[i][j] = ∂ⱼ vᵢ`.
    pub fn jacobian(&self) -> [[Expr; 3]; 3] {
        core::array::from_fn(|i| core::array::from_fn(|j| self.components[i].differentiate(Var::ALL[j])))
    }

    /// Largest polynomial degree over the components.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(Expr::degree).max().unwrap_or(0)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}", self.components[0], self.components[1], self.components[2])
    }
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, rhs: &'a VectorField) -> VectorField {
        VectorField {
            components: core::array::from_fn(|i| &self.components[i] + &rhs.components[i]),
        }
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &'a VectorField) -> VectorField {
        VectorField {
            components: core::array::from_fn(|i| &self.components[i] - &rhs.components[i]),
        }
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField {
            components: core::array::from_fn(|i| -&self.components[i]),
        }
    }
}

/// `[u, v] = (u·∇)v − (v·∇)u`.
pub fn lie_bracket(u: &VectorField, v: &VectorField) -> VectorField {
    VectorField {
        components: core::array::from_fn(|i| u.apply(&v.components[i]) - v.apply(&u.components[i])),
    }
}

/// `ad_g^k f`, with `ad_g^0 f = f`.
pub fn ad_power(g: &VectorField, f: &VectorField, k: u32) -> VectorField {
    (0..k).fold(f.clone(), |acc, _| lie_bracket(g, &acc))
}

/// The three 2×2 minors of the 3×2 matrix `(a | b)`; all vanish exactly
/// when `a ∧ b = 0`.
pub fn wedge(a: &VectorField, b: &VectorField) -> [Expr; 3] {
    let [ax, ay, aw] = &a.components;
    let [bx, by, bw] = &b.components;
    [
        ax * by - ay * bx,
        ax * bw - aw * bx,
        ay * bw - aw * by,
    ]
}

pub(crate) fn norm(v: &[f64; 3]) -> f64 {
    libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Largest absolute 2×2 minor of the numeric pair `(a | b)`.
pub(crate) fn max_minor(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    cross(a, b).iter().fold(0.0, |m, c| m.max(c.abs()))
}

/// Pointwise independence of two numeric vectors, scale-relative.
pub fn independent_vectors(a: &[f64; 3], b: &[f64; 3], tol: f64) -> bool {
    max_minor(a, b) > tol * (1.0 + norm(a) * norm(b))
}

/// Whether `u(p)` and `v(p)` are linearly independent.
pub fn independent_at(u: &VectorField, v: &VectorField, p: &Point, tol: f64) -> Result<bool, ExprError> {
    Ok(independent_vectors(&u.eval(p)?, &v.eval(p)?, tol))
}

/// Whether `v(p) ∈ span{g(p)}`.
pub fn in_span_at(v: &VectorField, g: &VectorField, p: &Point, tol: f64) -> Result<bool, FieldError> {
    let gp = g.eval(p)?;
    if norm(&gp) <= tol {
        return Err(FieldError::DegenerateG);
    }
    Ok(in_span_vectors(&v.eval(p)?, &gp, tol))
}

pub(crate) fn in_span_vectors(v: &[f64; 3], g: &[f64; 3], tol: f64) -> bool {
    norm(&cross(v, g)) <= tol * (1.0 + norm(v) * norm(g))
}

/// `ξ̇ = f(ξ) + g(ξ)u` with an optional base point.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSystem {
    pub f: VectorField,
    pub g: VectorField,
    pub base: Option<Point>,
}

impl ControlSystem {
    pub fn new(f: VectorField, g: VectorField) -> Result<Self, FieldError> {
        if g.is_zero() {
            return Err(FieldError::ZeroControlField);
        }
        Ok(ControlSystem { f, g, base: None })
    }

    pub fn with_base(mut self, base: Point) -> Self {
        self.base = Some(base);
        self
    }
}

/// Feedback transformation `(φ, α, β)` with affine `φ(ξ) = Aξ + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackTransform {
    pub matrix: Mat3,
    pub translation: [Rational; 3],
    pub alpha: Expr,
    pub beta: Expr,
}

impl FeedbackTransform {
    pub fn identity() -> Self {
        FeedbackTransform {
            matrix: crate::linalg::identity3(),
            translation: core::array::from_fn(|_| Rational::zero()),
            alpha: Expr::zero(),
            beta: Expr::one(),
        }
    }

    pub fn map_point(&self, p: &Point) -> Point {
        let a = p.to_array();
        let img: [f64; 3] = core::array::from_fn(|i| {
            (0..3).fold(rational_to_f64(&self.translation[i]), |acc, j| {
                acc + rational_to_f64(&self.matrix[i][j]) * a[j]
            })
        });
        Point::from_array(img)
    }

    /// The substitution expressing old coordinates through new ones.
    fn inverse_subst(&self) -> Result<AffineSubst, FieldError> {
        let inv = inv3(&self.matrix).ok_or(FieldError::NonInvertiblePhi)?;
        let shifted = mat3_vec(&inv, &self.translation);
        Ok(AffineSubst {
            offset: core::array::from_fn(|i| -shifted[i].clone()),
            matrix: inv,
        })
    }

    /// `φ_* v`.
    pub fn push_field(&self, v: &VectorField) -> Result<VectorField, FieldError> {
        let sub = self.inverse_subst()?;
        let mut out: [Expr; 3] = Default::default();
        for (i, slot) in out.iter_mut().enumerate() {
            let mixed = (0..3).fold(Expr::zero(), |acc, j| acc + v.components[j].scale(&self.matrix[i][j]));
            *slot = mixed.substitute_affine(&sub)?;
        }
        Ok(VectorField::from_components(out))
    }

    /// `self` followed by `next`, as a single transform.
    pub fn then(&self, next: &FeedbackTransform) -> Result<FeedbackTransform, FieldError> {
        let forward = AffineSubst {
            matrix: self.matrix.clone(),
            offset: self.translation.clone(),
        };
        let alpha2 = next.alpha.substitute_affine(&forward)?;
        let beta2 = next.beta.substitute_affine(&forward)?;
        let t = mat3_vec(&next.matrix, &self.translation);
        Ok(FeedbackTransform {
            matrix: mat3_mul(&next.matrix, &self.matrix),
            translation: core::array::from_fn(|i| &t[i] + &next.translation[i]),
            alpha: &self.alpha + &(&self.beta * &alpha2),
            beta: &self.beta * &beta2,
        })
    }
}

/// `(φ_*(f + gα), φ_*(gβ))` with base point `φ(ξ₀)`.
pub fn apply_feedback(s: &ControlSystem, t: &FeedbackTransform) -> Result<ControlSystem, FieldError> {
    if det3(&t.matrix).is_zero() {
        return Err(FieldError::NonInvertiblePhi);
    }
    if t.beta.is_zero() {
        return Err(FieldError::BetaVanishesAtBase);
    }
    if let Some(p) = &s.base {
        if t.beta.eval(p)?.abs() <= 1e-12 {
            return Err(FieldError::BetaVanishesAtBase);
        }
    }
    let drift = &s.f + &s.g.scale_by(&t.alpha);
    let control = s.g.scale_by(&t.beta);
    Ok(ControlSystem {
        f: t.push_field(&drift)?,
        g: t.push_field(&control)?,
        base: s.base.as_ref().map(|p| t.map_point(p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, rat};
    use crate::systems;

    fn field(cx: &str, cy: &str, cw: &str) -> VectorField {
        VectorField::new(parse(cx).unwrap(), parse(cy).unwrap(), parse(cw).unwrap())
    }

    #[test]
    fn bracket_examples() {
        let u = field("cos(w)", "sin(w)", "0");
        let dw = VectorField::coordinate(Var::W);
        assert_eq!(lie_bracket(&u, &dw), field("sin(w)", "-cos(w)", "0"));
        let dx = VectorField::coordinate(Var::X);
        let dy = VectorField::coordinate(Var::Y);
        assert!(lie_bracket(&dx, &dy).is_zero());
        let u = field("w^2", "w", "0");
        assert_eq!(lie_bracket(&dw, &u), field("2*w", "1", "0"));
    }

    #[test]
    fn ad_powers_of_parabolic_drift() {
        let s = systems::parabolic();
        assert_eq!(ad_power(&s.g, &s.f, 0), s.f);
        assert_eq!(ad_power(&s.g, &s.f, 1), field("2*w", "1", "0"));
        assert_eq!(ad_power(&s.g, &s.f, 2), field("2", "0", "0"));
        assert!(ad_power(&s.g, &s.f, 3).is_zero());
    }

    #[test]
    fn pointwise_tests() {
        let dx = VectorField::coordinate(Var::X);
        let dy = VectorField::coordinate(Var::Y);
        let p = Point::new(0.3, -1.0, 2.0);
        assert!(independent_at(&dx, &dy, &p, DEFAULT_TOL).unwrap());
        assert!(!independent_at(&dx, &dx.scale(&rat(2)), &p, DEFAULT_TOL).unwrap());

        let s = systems::parabolic();
        let fg = lie_bracket(&s.f, &s.g);
        assert!(independent_at(&s.g, &fg, &Point::ORIGIN, DEFAULT_TOL).unwrap());
        assert!(in_span_at(&s.f, &s.g, &Point::ORIGIN, DEFAULT_TOL).unwrap());

        let e = systems::elliptic();
        assert!(!in_span_at(&e.f, &e.g, &p, DEFAULT_TOL).unwrap());
        assert!(in_span_at(&e.g.scale(&rat(3)), &e.g, &p, DEFAULT_TOL).unwrap());
        assert_eq!(
            in_span_at(&e.f, &VectorField::zero(), &p, DEFAULT_TOL),
            Err(FieldError::DegenerateG)
        );
    }

    #[test]
    fn identity_feedback_is_noop() {
        let s = systems::elliptic().with_base(Point::ORIGIN);
        assert_eq!(apply_feedback(&s, &FeedbackTransform::identity()).unwrap(), s);
    }

    #[test]
    fn feedback_adds_alpha_times_g() {
        let s = systems::elliptic();
        let t = FeedbackTransform {
            alpha: Expr::w(),
            ..FeedbackTransform::identity()
        };
        let out = apply_feedback(&s, &t).unwrap();
        assert_eq!(out.f, field("cos(w)", "sin(w)", "w"));
        assert_eq!(out.g, s.g);
    }

    #[test]
    fn affine_pushforward_of_parabolic_drift() {
        let s = systems::parabolic().with_base(Point::ORIGIN);
        let mut t = FeedbackTransform::identity();
        t.matrix[0][0] = rat(2);
        t.translation[1] = rat(1);
        let out = apply_feedback(&s, &t).unwrap();
        assert_eq!(out.f, field("2*w^2", "w", "0"));
        assert_eq!(out.base, Some(Point::new(0.0, 1.0, 0.0)));
    }

    #[test]
    fn feedback_errors() {
        let s = systems::parabolic().with_base(Point::ORIGIN);
        let mut t = FeedbackTransform::identity();
        t.matrix[2][2] = rat(0);
        assert_eq!(apply_feedback(&s, &t), Err(FieldError::NonInvertiblePhi));
        let t = FeedbackTransform {
            beta: Expr::w(),
            ..FeedbackTransform::identity()
        };
        assert_eq!(apply_feedback(&s, &t), Err(FieldError::BetaVanishesAtBase));
    }
}
