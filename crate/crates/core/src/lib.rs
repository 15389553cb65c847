//! Infinitesimal symmetries of single-input control-affine systems on R³ and
//! the decision procedure that recognizes the conic null-forms
//! (elliptic, hyperbolic and parabolic) from their symmetry algebra.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and seeded scrambles live in the `conic-forms` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod expr;
pub mod liealg;
pub mod linalg;
pub mod numerics;
pub mod symmetry;
pub mod vectorfield;

pub mod systems;

pub use classifier::{classify, smallest_k, ClassifyOptions, Verdict, VerdictTag};
pub use expr::{parse, Expr, Monomial, Point, Rational, Trig, Var};
pub use liealg::{AlgebraClass, AlgebraTag, StructureConstants};
pub use symmetry::{solve_symmetries, Ansatz, SymmetryBasis};
pub use vectorfield::{ControlSystem, FeedbackTransform, VectorField};
