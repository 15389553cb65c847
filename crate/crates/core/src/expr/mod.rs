//! Exact scalar expressions in the state variables `x`, `y`, `w`.
//!
//! An [`Expr`] is a finite sum of rational multiples of monomials
//!
//! ```text
//! x^a · y^b · w^c · T(m·w) · e^(n·w)      T ∈ {1, cos, sin}
//! ```
//!
//! This family is linearly independent over the reals, so an expression is
//! identically zero exactly when its term map is empty. Products of trig
//! factors are reduced with the product-to-sum identities and `cosh`/`sinh`
//! are rewritten in the `e^(±w)` basis, which keeps every value in canonical
//! form at all times.

mod parse;
mod print;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub use parse::{parse, ParseError};

pub type Rational = num_rational::BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest double to an exact rational.
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    W,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::W];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::W => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::W => "w",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    Cos,
    Sin,
}

/// `x^px · y^py · w^pw · trig(m·w) · e^(expk·w)` with unit coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    px: u32,
    py: u32,
    pw: u32,
    trig: Option<(Trig, u32)>,
    expk: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        px: 0,
        py: 0,
        pw: 0,
        trig: None,
        expk: 0,
    };

    /// Returns `None` for a zero trig frequency, which is not a valid key
    /// (`cos(0·w)` belongs to the polynomial part and `sin(0·w)` vanishes).
    pub fn new(px: u32, py: u32, pw: u32, trig: Option<(Trig, u32)>, expk: i32) -> Option<Self> {
        if matches!(trig, Some((_, 0))) {
            return None;
        }
        Some(Monomial {
            px,
            py,
            pw,
            trig,
            expk,
        })
    }

    pub fn poly(px: u32, py: u32, pw: u32) -> Self {
        Monomial {
            px,
            py,
            pw,
            trig: None,
            expk: 0,
        }
    }

    pub fn power(&self, var: Var) -> u32 {
        match var {
            Var::X => self.px,
            Var::Y => self.py,
            Var::W => self.pw,
        }
    }

    pub fn trig(&self) -> Option<(Trig, u32)> {
        self.trig
    }

    pub fn exp_frequency(&self) -> i32 {
        self.expk
    }

    pub fn degree(&self) -> u32 {
        self.px + self.py + self.pw
    }

    pub fn is_polynomial(&self) -> bool {
        self.trig.is_none() && self.expk == 0
    }

    fn with_powers(self, px: u32, py: u32, pw: u32) -> Self {
        Monomial { px, py, pw, ..self }
    }

    fn eval(&self, p: &Point) -> f64 {
        let mut v = powi(p.x, self.px) * powi(p.y, self.py) * powi(p.w, self.pw);
        match self.trig {
            Some((Trig::Cos, m)) => v *= libm::cos(f64::from(m) * p.w),
            Some((Trig::Sin, m)) => v *= libm::sin(f64::from(m) * p.w),
            None => {}
        }
        if self.expk != 0 {
            v *= libm::exp(f64::from(self.expk) * p.w);
        }
        v
    }
}

pub(crate) fn powi(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// A point of R³ in the coordinates `(x, y, w)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl Point {
    pub const ORIGIN: Point = Point {
        x: 0.0,
        y: 0.0,
        w: 0.0,
    };

    pub const fn new(x: f64, y: f64, w: f64) -> Self {
        Point { x, y, w }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Point::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.w]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.w.is_finite()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    /// A term evaluated outside the range of `f64`.
    Overflow,
    /// An affine substitution would put `x` or `y` (or a non-integer
    /// frequency) inside a trig or exponential factor.
    OutOfClass,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Overflow => f.write_str("expression value overflows f64"),
            ExprError::OutOfClass => {
                f.write_str("substitution leaves the polynomial-trig-exponential class")
            }
        }
    }
}

impl core::error::Error for ExprError {}

/// Affine change of variables `old_i = Σ_j matrix[i][j]·new_j + offset[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubst {
    pub matrix: [[Rational; 3]; 3],
    pub offset: [Rational; 3],
}

/// Canonical exact expression. See the module docs for the term basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expr::term(Monomial::ONE, c)
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(rat(n))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn var(v: Var) -> Self {
        let m = match v {
            Var::X => Monomial::poly(1, 0, 0),
            Var::Y => Monomial::poly(0, 1, 0),
            Var::W => Monomial::poly(0, 0, 1),
        };
        Expr::term(m, Rational::one())
    }

    pub fn x() -> Self {
        Expr::var(Var::X)
    }

    pub fn y() -> Self {
        Expr::var(Var::Y)
    }

    pub fn w() -> Self {
        Expr::var(Var::W)
    }

    /// `cos(m·w)`; any integer frequency is accepted.
    pub fn cos(m: i64) -> Self {
        trig_expr(Trig::Cos, m)
    }

    /// `sin(m·w)`; any integer frequency is accepted.
    pub fn sin(m: i64) -> Self {
        trig_expr(Trig::Sin, m)
    }

    /// `e^(n·w)`.
    pub fn exp(n: i32) -> Self {
        Expr::term(
            Monomial {
                expk: n,
                ..Monomial::ONE
            },
            Rational::one(),
        )
    }

    pub fn cosh(n: i32) -> Self {
        (Expr::exp(n) + Expr::exp(-n)).scale(&ratio(1, 2))
    }

    pub fn sinh(n: i32) -> Self {
        (Expr::exp(n) - Expr::exp(-n)).scale(&ratio(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this is a constant (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .get(&Monomial::ONE)
                .cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when every monomial is polynomial (no trig or exponential factor).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    /// Largest total polynomial degree among the terms (0 for zero).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: Var) -> bool {
        self.terms.keys().any(|m| match var {
            Var::W => m.pw > 0 || m.trig.is_some() || m.expk != 0,
            v => m.power(v) > 0,
        })
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (*m, q * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut acc = Expr::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn accumulate(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Exact partial derivative.
    pub fn differentiate(&self, var: Var) -> Expr {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            match var {
                Var::X if m.px > 0 => {
                    let dm = m.with_powers(m.px - 1, m.py, m.pw);
                    Expr::accumulate(&mut out, dm, c * rat(i64::from(m.px)));
                }
                Var::Y if m.py > 0 => {
                    let dm = m.with_powers(m.px, m.py - 1, m.pw);
                    Expr::accumulate(&mut out, dm, c * rat(i64::from(m.py)));
                }
                Var::W => {
                    if m.pw > 0 {
                        let dm = m.with_powers(m.px, m.py, m.pw - 1);
                        Expr::accumulate(&mut out, dm, c * rat(i64::from(m.pw)));
                    }
                    if let Some((kind, f)) = m.trig {
                        let (dkind, sign) = match kind {
                            Trig::Cos => (Trig::Sin, -1),
                            Trig::Sin => (Trig::Cos, 1),
                        };
                        let dm = Monomial {
                            trig: Some((dkind, f)),
                            ..*m
                        };
                        Expr::accumulate(&mut out, dm, c * rat(sign * i64::from(f)));
                    }
                    if m.expk != 0 {
                        Expr::accumulate(&mut out, *m, c * rat(i64::from(m.expk)));
                    }
                }
                _ => {}
            }
        }
        Expr { terms: out }
    }

    /// Numeric value at `p`, summed term by term.
    pub fn eval(&self, p: &Point) -> Result<f64, ExprError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let t = rational_to_f64(c) * m.eval(p);
            if !t.is_finite() {
                return Err(ExprError::Overflow);
            }
            acc += t;
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(ExprError::Overflow)
        }
    }

    /// Rewrites the expression in new variables through an affine map.
    ///
    /// Polynomial parts accept any affine map. Monomials carrying a trig or
    /// exponential factor require `w = s·w'` with no offset and no `x'`, `y'`
    /// dependence, and `s·frequency` integral.
    pub fn substitute_affine(&self, sub: &AffineSubst) -> Result<Expr, ExprError> {
        let images: Vec<Expr> = (0..3)
            .map(|i| {
                let mut e = Expr::constant(sub.offset[i].clone());
                for (j, v) in Var::ALL.iter().enumerate() {
                    e = e + Expr::var(*v).scale(&sub.matrix[i][j]);
                }
                e
            })
            .collect();
        let w_scale = {
            let row = &sub.matrix[2];
            if row[0].is_zero() && row[1].is_zero() && sub.offset[2].is_zero() {
                Some(row[2].clone())
            } else {
                None
            }
        };

        let mut powers: BTreeMap<(usize, u32), Expr> = BTreeMap::new();
        let mut power_of = |i: usize, k: u32| -> Expr {
            powers
                .entry((i, k))
                .or_insert_with(|| images[i].pow(k))
                .clone()
        };

        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut t = power_of(0, m.px);
            t = &t * &power_of(1, m.py);
            t = &t * &power_of(2, m.pw);
            if !m.is_polynomial() {
                let s = w_scale.as_ref().ok_or(ExprError::OutOfClass)?;
                if let Some((kind, f)) = m.trig {
                    let freq = s * rat(i64::from(f));
                    if !freq.is_integer() {
                        return Err(ExprError::OutOfClass);
                    }
                    let freq = freq.to_integer().to_i64().ok_or(ExprError::OutOfClass)?;
                    t = &t * &trig_expr(kind, freq);
                }
                if m.expk != 0 {
                    let freq = s * rat(i64::from(m.expk));
                    if !freq.is_integer() {
                        return Err(ExprError::OutOfClass);
                    }
                    let freq = freq.to_integer().to_i32().ok_or(ExprError::OutOfClass)?;
                    t = &t * &Expr::exp(freq);
                }
            }
            out = out + t.scale(c);
        }
        Ok(out)
    }
}

/// `kind(d·w)` for a signed frequency, folded into canonical form.
fn trig_expr(kind: Trig, d: i64) -> Expr {
    match signed_trig(kind, d) {
        None => Expr::zero(),
        Some((trig, sign)) => Expr::term(
            Monomial {
                trig,
                ..Monomial::ONE
            },
            rat(sign),
        ),
    }
}

/// Folds `kind(d·w)` to `(factor, sign)`; `None` when the value is zero.
fn signed_trig(kind: Trig, d: i64) -> Option<(Option<(Trig, u32)>, i64)> {
    let f = u32::try_from(d.unsigned_abs()).expect("trig frequency fits in u32");
    match (kind, d.signum()) {
        (Trig::Cos, 0) => Some((None, 1)),
        (Trig::Sin, 0) => None,
        (Trig::Cos, _) => Some((Some((Trig::Cos, f)), 1)),
        (Trig::Sin, s) => Some((Some((Trig::Sin, f)), s)),
    }
}

/// Product of two unit monomials as at most two signed, halved terms.
fn mul_monomials(a: &Monomial, b: &Monomial, mut emit: impl FnMut(Monomial, Rational)) {
    let base = Monomial {
        px: a.px + b.px,
        py: a.py + b.py,
        pw: a.pw + b.pw,
        trig: None,
        expk: a.expk + b.expk,
    };
    match (a.trig, b.trig) {
        (None, t) | (t, None) => emit(Monomial { trig: t, ..base }, Rational::one()),
        (Some((ka, ma)), Some((kb, mb))) => {
            let (ma, mb) = (i64::from(ma), i64::from(mb));
            // (kind of difference term, sign), (kind of sum term, sign)
            let ((kd, sd), (ks, ss)) = match (ka, kb) {
                (Trig::Cos, Trig::Cos) => ((Trig::Cos, 1), (Trig::Cos, 1)),
                (Trig::Sin, Trig::Sin) => ((Trig::Cos, 1), (Trig::Cos, -1)),
                (Trig::Sin, Trig::Cos) => ((Trig::Sin, 1), (Trig::Sin, 1)),
                (Trig::Cos, Trig::Sin) => ((Trig::Sin, -1), (Trig::Sin, 1)),
            };
            for (kind, d, s) in [(kd, ma - mb, sd), (ks, ma + mb, ss)] {
                if let Some((trig, sign)) = signed_trig(kind, d) {
                    emit(Monomial { trig, ..base }, ratio(s * sign, 2));
                }
            }
        }
    }
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &'a Expr) -> Expr {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Expr::accumulate(&mut terms, *m, c.clone());
        }
        Expr { terms }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        for (m, c) in rhs.terms {
            Expr::accumulate(&mut self.terms, m, c);
        }
        self
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &'a Expr) -> Expr {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Expr::accumulate(&mut terms, *m, -c);
        }
        Expr { terms }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(mut self, rhs: Expr) -> Expr {
        for (m, c) in rhs.terms {
            Expr::accumulate(&mut self.terms, m, -c);
        }
        self
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &'a Expr) -> Expr {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                mul_monomials(ma, mb, |m, f| Expr::accumulate(&mut terms, m, &c * f));
            }
        }
        Expr { terms }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Self {
        Expr::constant(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_squared_reduces_to_cosine_of_double_frequency() {
        let s = Expr::sin(1);
        let expected = Expr::constant(ratio(1, 2)) - Expr::cos(2).scale(&ratio(1, 2));
        assert_eq!(&s * &s, expected);
    }

    #[test]
    fn pythagorean_identities_collapse() {
        let c = Expr::cos(1);
        let s = Expr::sin(1);
        assert_eq!(&(&c * &c) + &(&s * &s), Expr::one());

        let ch = Expr::cosh(1);
        let sh = Expr::sinh(1);
        assert_eq!(&(&ch * &ch) - &(&sh * &sh), Expr::one());
        assert!((&(&Expr::exp(1) * &Expr::exp(-1)) - &Expr::one()).is_zero());
    }

    #[test]
    fn additive_inverse_is_empty() {
        let e = Expr::x() * Expr::cos(3) + Expr::exp(2);
        assert!((&e + &(-&e)).is_zero());
        assert!(!(Expr::cos(1) - Expr::sin(1)).is_zero());
    }

    #[test]
    fn negative_frequencies_fold() {
        assert_eq!(Expr::cos(-2), Expr::cos(2));
        assert_eq!(Expr::sin(-2), -Expr::sin(2));
        assert_eq!(Expr::cos(0), Expr::one());
        assert!(Expr::sin(0).is_zero());
    }

    #[test]
    fn derivatives() {
        assert_eq!(Expr::cos(1).differentiate(Var::W), -Expr::sin(1));
        assert_eq!(Expr::w().pow(2).differentiate(Var::W), Expr::w().scale(&rat(2)));
        let e = (Expr::x() * Expr::y()).scale(&rat(3)) + Expr::cos(1);
        assert_eq!(e.differentiate(Var::X), Expr::y().scale(&rat(3)));
        assert_eq!(Expr::exp(-2).differentiate(Var::W), Expr::exp(-2).scale(&rat(-2)));
        // product rule across all three w-factors
        let m = Expr::w() * Expr::sin(2) * Expr::exp(1);
        let expected = Expr::sin(2) * Expr::exp(1)
            + (Expr::w() * Expr::cos(2) * Expr::exp(1)).scale(&rat(2))
            + Expr::w() * Expr::sin(2) * Expr::exp(1);
        assert_eq!(m.differentiate(Var::W), expected);
    }

    #[test]
    fn evaluation() {
        assert_eq!(Expr::cos(1).eval(&Point::ORIGIN).unwrap(), 1.0);
        let e = Expr::w().pow(2) + Expr::x();
        assert_eq!(e.eval(&Point::new(2.0, 0.0, 3.0)).unwrap(), 11.0);
        let id = Expr::sin(1).pow(2) + Expr::cos(1).pow(2);
        assert_eq!(id.len(), 1);
        assert_eq!(id.eval(&Point::new(0.0, 0.0, 0.7)).unwrap(), 1.0);
        assert_eq!(
            Expr::exp(1000).eval(&Point::new(0.0, 0.0, 1.0)),
            Err(ExprError::Overflow)
        );
    }

    #[test]
    fn affine_substitution_keeps_trig_under_sign_flip() {
        let e = Expr::sin(1) + Expr::exp(2);
        let flip = AffineSubst {
            matrix: [
                [rat(1), rat(0), rat(0)],
                [rat(0), rat(1), rat(0)],
                [rat(0), rat(0), rat(-1)],
            ],
            offset: [rat(0), rat(0), rat(0)],
        };
        assert_eq!(e.substitute_affine(&flip).unwrap(), -Expr::sin(1) + Expr::exp(-2));

        let shift = AffineSubst {
            offset: [rat(0), rat(0), rat(1)],
            ..flip.clone()
        };
        assert_eq!(e.substitute_affine(&shift), Err(ExprError::OutOfClass));
        // polynomial parts take any affine map
        let p = Expr::w().pow(2);
        let expected = Expr::w().pow(2) - Expr::w().scale(&rat(2)) + Expr::one();
        assert_eq!(p.substitute_affine(&shift).unwrap(), expected);
    }
}
