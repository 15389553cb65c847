//! The conic null-forms and their known symmetry generators.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::expr::{rat, Expr, Var};
use crate::vectorfield::{ControlSystem, VectorField};

/// Which conic the admissible velocities of a null-form trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConicKind {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl ConicKind {
    pub fn letter(self) -> &'static str {
        match self {
            ConicKind::Elliptic => "E",
            ConicKind::Hyperbolic => "H",
            ConicKind::Parabolic => "P",
        }
    }
}

impl fmt::Display for ConicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl FromStr for ConicKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "E" | "e" | "elliptic" => Ok(ConicKind::Elliptic),
            "H" | "h" | "hyperbolic" => Ok(ConicKind::Hyperbolic),
            "P" | "p" | "parabolic" => Ok(ConicKind::Parabolic),
            _ => Err(()),
        }
    }
}

fn dw() -> VectorField {
    VectorField::coordinate(Var::W)
}

fn system(fx: Expr, fy: Expr) -> ControlSystem {
    ControlSystem::new(VectorField::new(fx, fy, Expr::zero()), dw()).expect("∂w is nonzero")
}

/// Dubins car: `ẋ = cos w, ẏ = sin w, ẇ = u`.
pub fn elliptic() -> ControlSystem {
    system(Expr::cos(1), Expr::sin(1))
}

/// `ẋ = cosh w, ẏ = sinh w, ẇ = u`.
pub fn hyperbolic() -> ControlSystem {
    system(Expr::cosh(1), Expr::sinh(1))
}

/// `ẋ = w², ẏ = w, ẇ = u`.
pub fn parabolic() -> ControlSystem {
    parabolic_k(1)
}

/// `ẋ = w^(2k), ẏ = w^k, ẇ = u`.
pub fn parabolic_k(k: u32) -> ControlSystem {
    system(Expr::w().pow(2 * k), Expr::w().pow(k))
}

/// `ẋ = (w+1)², ẏ = w+1, ẇ = u`, the non-equilibrium parabolic form.
pub fn parabolic_shifted() -> ControlSystem {
    let s = Expr::w() + Expr::one();
    system(s.pow(2), s)
}

pub fn for_kind(kind: ConicKind) -> ControlSystem {
    match kind {
        ConicKind::Elliptic => elliptic(),
        ConicKind::Hyperbolic => hyperbolic(),
        ConicKind::Parabolic => parabolic(),
    }
}

/// `∂x, ∂y, y∂x − x∂y − ∂w`.
pub fn elliptic_symmetries() -> Vec<VectorField> {
    vec![
        VectorField::coordinate(Var::X),
        VectorField::coordinate(Var::Y),
        VectorField::new(Expr::y(), -Expr::x(), Expr::int(-1)),
    ]
}

/// `∂x, ∂y, y∂x + x∂y + ∂w`.
pub fn hyperbolic_symmetries() -> Vec<VectorField> {
    vec![
        VectorField::coordinate(Var::X),
        VectorField::coordinate(Var::Y),
        VectorField::new(Expr::y(), Expr::x(), Expr::one()),
    ]
}

/// `∂x, ∂y, 2x∂x + y∂y + w∂w`.
pub fn parabolic_symmetries() -> Vec<VectorField> {
    parabolic_k_symmetries(1)
}

/// `∂x, ∂y, 2k·x∂x + k·y∂y + w∂w` for `parabolic_k(k)`.
pub fn parabolic_k_symmetries(k: u32) -> Vec<VectorField> {
    let k = i64::from(k);
    vec![
        VectorField::coordinate(Var::X),
        VectorField::coordinate(Var::Y),
        VectorField::new(Expr::x().scale(&rat(2 * k)), Expr::y().scale(&rat(k)), Expr::w()),
    ]
}

pub fn symmetries_for_kind(kind: ConicKind) -> Vec<VectorField> {
    match kind {
        ConicKind::Elliptic => elliptic_symmetries(),
        ConicKind::Hyperbolic => hyperbolic_symmetries(),
        ConicKind::Parabolic => parabolic_symmetries(),
    }
}
