//! Three-dimensional real Lie algebras given by structure constants.
//!
//! Recognizes the three symmetry algebras of the conic null-forms through the
//! action of a complement element on the two-dimensional abelian ideal:
//!
//! | class           | `ad_ℓ` on the ideal                 |
//! |-----------------|-------------------------------------|
//! | elliptic (E(2)) | trace 0, det > 0 (imaginary pair)   |
//! | hyperbolic      | trace 0, det < 0 (`λ₁ = −λ₂`)       |
//! | parabolic       | `2·trace² = 9·det` (`λ₁ = 2λ₂`)     |
//!
//! All arithmetic is exact.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::expr::{rat, Rational};
use crate::linalg::{self, inv3, sparse_from_dense, Mat3};
use crate::symmetry::{bracket_table, SymmetryBasis};

pub type Vec3 = [Rational; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieError {
    NotThreeDimensional(usize),
    NotClosed,
    JacobiViolated,
    SingularChangeOfBasis,
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::NotThreeDimensional(d) => write!(f, "algebra has dimension {d}, expected 3"),
            LieError::NotClosed => f.write_str("basis is not closed under the bracket"),
            LieError::JacobiViolated => f.write_str("structure constants violate the Jacobi identity"),
            LieError::SingularChangeOfBasis => f.write_str("change of basis is singular"),
        }
    }
}

impl core::error::Error for LieError {}

fn zero3() -> Vec3 {
    core::array::from_fn(|_| Rational::zero())
}

/// `[eᵢ, eⱼ] = Σₖ c[i][j][k] eₖ`, stored fully (antisymmetric in `i, j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    c: [[Vec3; 3]; 3],
}

impl StructureConstants {
    /// Builds from the brackets `[eᵢ, eⱼ]` for `i < j`, given in the order
    /// `(0,1), (0,2), (1,2)`; checks the Jacobi identity.
    pub fn from_upper(upper: [Vec3; 3]) -> Result<Self, LieError> {
        let mut c: [[Vec3; 3]; 3] = core::array::from_fn(|_| core::array::from_fn(|_| zero3()));
        for ((i, j), v) in [(0, 1), (0, 2), (1, 2)].into_iter().zip(upper) {
            c[j][i] = core::array::from_fn(|k| -v[k].clone());
            c[i][j] = v;
        }
        let sc = StructureConstants { c };
        if !sc.satisfies_jacobi() {
            return Err(LieError::JacobiViolated);
        }
        Ok(sc)
    }

    /// Integer shorthand for [`StructureConstants::from_upper`].
    pub fn from_upper_int(upper: [[i64; 3]; 3]) -> Result<Self, LieError> {
        Self::from_upper(upper.map(|v| v.map(rat)))
    }

    pub fn abelian() -> Self {
        Self::from_upper(core::array::from_fn(|_| zero3())).expect("abelian algebra")
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    /// Bracket of two elements given by coordinates.
    pub fn bracket(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        let mut out = zero3();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() || i == j {
                    continue;
                }
                let s = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &s * &self.c[i][j][k];
                }
            }
        }
        out
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let e = |i: usize| -> Vec3 { core::array::from_fn(|k| if k == i { Rational::one() } else { Rational::zero() }) };
        let (a, b, c) = (e(0), e(1), e(2));
        let t1 = self.bracket(&self.bracket(&a, &b), &c);
        let t2 = self.bracket(&self.bracket(&b, &c), &a);
        let t3 = self.bracket(&self.bracket(&c, &a), &b);
        (0..3).all(|k| (&t1[k] + &t2[k] + &t3[k]).is_zero())
    }

    /// Constants in the basis `e'ᵢ = Σⱼ m[i][j] eⱼ`.
    pub fn change_basis(&self, m: &Mat3) -> Result<Self, LieError> {
        let inv = inv3(m).ok_or(LieError::SingularChangeOfBasis)?;
        let new = |i: usize, j: usize| -> Vec3 {
            let old = self.bracket(&m[i], &m[j]);
            // row vector of old coordinates times m⁻¹
            core::array::from_fn(|k| (0..3).fold(Rational::zero(), |acc, a| acc + &old[a] * &inv[a][k]))
        };
        Self::from_upper([new(0, 1), new(0, 2), new(1, 2)])
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(Zero::is_zero)
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[v{},v{}] = ", i + 1, j + 1)?;
            let mut wrote = false;
            for (k, c) in self.c[i][j].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                match (wrote, c.is_negative()) {
                    (false, true) => f.write_str("-")?,
                    (false, false) => {}
                    (true, true) => f.write_str(" - ")?,
                    (true, false) => f.write_str(" + ")?,
                }
                let abs = c.abs();
                if !abs.is_one() {
                    write!(f, "{abs}")?;
                }
                write!(f, "v{}", k + 1)?;
                wrote = true;
            }
            if !wrote {
                f.write_str("0")?;
            }
        }
        Ok(())
    }
}

/// Exact constants of a three-field symmetry basis.
pub fn structure_constants(b: &SymmetryBasis) -> Result<StructureConstants, LieError> {
    if b.dim() != 3 {
        return Err(LieError::NotThreeDimensional(b.dim()));
    }
    let table = bracket_table(b).ok_or(LieError::NotClosed)?;
    let get = |i, j| -> Vec3 {
        let v: &Vec<Rational> = &table[&(i, j)];
        core::array::from_fn(|k| v[k].clone())
    };
    StructureConstants::from_upper([get(0, 1), get(0, 2), get(1, 2)])
}

/// Basis (rows, in reduced echelon form) of a 2-dimensional abelian ideal.
pub type Ideal = [Vec3; 2];

/// The derived subalgebra `[L, L]` when it is a 2-dimensional abelian ideal.
pub fn abelian_ideal_2d(sc: &StructureConstants) -> Option<Ideal> {
    let brackets: Vec<Vec<Rational>> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| sc.c[i][j].to_vec())
        .collect();
    let derived = linalg::row_space(&brackets);
    if derived.len() != 2 {
        return None;
    }
    let d: Ideal = core::array::from_fn(|i| core::array::from_fn(|k| derived[i][k].clone()));
    if sc.bracket(&d[0], &d[1]).iter().any(|c| !c.is_zero()) {
        return None;
    }
    for k in 0..3 {
        let e: Vec3 = core::array::from_fn(|i| if i == k { Rational::one() } else { Rational::zero() });
        for di in &d {
            ideal_coordinates(&d, &sc.bracket(&e, di))?;
        }
    }
    Some(d)
}

/// Coordinates of `v` in the ideal basis, if `v` lies in it.
pub fn ideal_coordinates(ideal: &Ideal, v: &Vec3) -> Option<[Rational; 2]> {
    let eqs = (0..3).map(|k| {
        let row = sparse_from_dense(&[ideal[0][k].clone(), ideal[1][k].clone()]);
        (row, v[k].clone())
    });
    let x = linalg::solve(2, eqs)?;
    Some([x[0].clone(), x[1].clone()])
}

/// The last standard basis vector not in the ideal.
pub fn default_complement(ideal: &Ideal) -> Vec3 {
    (0..3)
        .rev()
        .map(|k| -> Vec3 { core::array::from_fn(|i| if i == k { Rational::one() } else { Rational::zero() }) })
        .find(|e| ideal_coordinates(ideal, e).is_none())
        .expect("a 2-dimensional subspace of R³ misses some basis vector")
}

/// Matrix of `ad_ℓ` restricted to the ideal; column `j` holds the
/// coordinates of `[ℓ, dⱼ]`.
pub fn ad_on_ideal(sc: &StructureConstants, ideal: &Ideal, ell: &Vec3) -> Option<[[Rational; 2]; 2]> {
    let c0 = ideal_coordinates(ideal, &sc.bracket(ell, &ideal[0]))?;
    let c1 = ideal_coordinates(ideal, &sc.bracket(ell, &ideal[1]))?;
    let [a, b] = c0;
    let [c, d] = c1;
    Some([[a, c], [b, d]])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraTag {
    /// Euclidean algebra e(2), Bianchi VII₀.
    EllipticE2,
    /// Poincaré algebra p(1,1), Bianchi VI₀.
    HyperbolicP11,
    /// Bianchi VI with eigenvalue ratio 2.
    ParabolicL322,
    Other,
}

impl AlgebraTag {
    pub fn label(self) -> &'static str {
        match self {
            AlgebraTag::EllipticE2 => "L_E = L(3,4,0), Bianchi VII_0",
            AlgebraTag::HyperbolicP11 => "L_H = L(3,2,-1), Bianchi VI_0",
            AlgebraTag::ParabolicL322 => "L_P = L(3,2,2), Bianchi VI",
            AlgebraTag::Other => "other",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraTag::EllipticE2 => "EllipticE2",
            AlgebraTag::HyperbolicP11 => "HyperbolicP11",
            AlgebraTag::ParabolicL322 => "ParabolicL322",
            AlgebraTag::Other => "Other",
        }
    }
}

/// Trace, determinant and discriminant of `ad_ℓ` on the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenData {
    pub trace: Rational,
    pub det: Rational,
    pub discriminant: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraClass {
    pub tag: AlgebraTag,
    pub eigen: Option<EigenData>,
    pub ideal: Option<Ideal>,
    pub complement: Option<Vec3>,
    pub ad_matrix: Option<[[Rational; 2]; 2]>,
}

impl AlgebraClass {
    fn other() -> Self {
        AlgebraClass {
            tag: AlgebraTag::Other,
            eigen: None,
            ideal: None,
            complement: None,
            ad_matrix: None,
        }
    }
}

fn tag_from_eigen(e: &EigenData) -> AlgebraTag {
    let tr_zero = e.trace.is_zero();
    if tr_zero && e.det.is_positive() {
        AlgebraTag::EllipticE2
    } else if tr_zero && e.det.is_negative() {
        AlgebraTag::HyperbolicP11
    } else if !tr_zero && e.det.is_positive() && &e.trace * &e.trace * rat(2) == &e.det * rat(9) {
        AlgebraTag::ParabolicL322
    } else {
        AlgebraTag::Other
    }
}

/// Classifies with an explicit complement element `ℓ`.
pub fn classify_with_complement(sc: &StructureConstants, ideal: &Ideal, ell: &Vec3) -> AlgebraClass {
    let Some(m) = ad_on_ideal(sc, ideal, ell) else {
        return AlgebraClass::other();
    };
    let trace = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let discriminant = &trace * &trace - &det * rat(4);
    let eigen = EigenData {
        trace,
        det,
        discriminant,
    };
    AlgebraClass {
        tag: tag_from_eigen(&eigen),
        eigen: Some(eigen),
        ideal: Some(ideal.clone()),
        complement: Some(ell.clone()),
        ad_matrix: Some(m),
    }
}

pub fn classify_algebra(sc: &StructureConstants) -> AlgebraClass {
    match abelian_ideal_2d(sc) {
        None => AlgebraClass::other(),
        Some(ideal) => {
            let ell = default_complement(&ideal);
            classify_with_complement(sc, &ideal, &ell)
        }
    }
}

/// Constants of the three null-form symmetry algebras in the generator
/// order `∂x, ∂y, v₃`.
pub mod known {
    use super::StructureConstants;

    pub fn elliptic() -> StructureConstants {
        // [v1,v3] = -v2, [v2,v3] = v1
        StructureConstants::from_upper_int([[0, 0, 0], [0, -1, 0], [1, 0, 0]]).expect("Jacobi")
    }

    pub fn hyperbolic() -> StructureConstants {
        // [v1,v3] = v2, [v2,v3] = v1
        StructureConstants::from_upper_int([[0, 0, 0], [0, 1, 0], [1, 0, 0]]).expect("Jacobi")
    }

    pub fn parabolic() -> StructureConstants {
        // [v1,v3] = 2v1, [v2,v3] = v2
        StructureConstants::from_upper_int([[0, 0, 0], [2, 0, 0], [0, 1, 0]]).expect("Jacobi")
    }

    pub fn heisenberg() -> StructureConstants {
        StructureConstants::from_upper_int([[0, 0, 1], [0, 0, 0], [0, 0, 0]]).expect("Jacobi")
    }
}
