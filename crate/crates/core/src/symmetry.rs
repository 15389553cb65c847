//! Infinitesimal symmetries of control-affine systems.
//!
//! A field `v` is a symmetry of `(f, g)` when `[v, g]` and `[v, f]` both lie
//! in `span{g}`, i.e. both wedges with `g` vanish. These conditions are linear
//! in `v`, so inside a finite [`Ansatz`] they become a homogeneous linear
//! system on the coefficients, solved exactly over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::expr::{Expr, Monomial, Rational, Trig};
use crate::linalg::{self, Echelon, SparseRow};
use crate::vectorfield::{lie_bracket, wedge, ControlSystem, VectorField};

/// Refuse to build linear systems with more unknowns than this.
pub const MAX_UNKNOWNS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryError {
    AnsatzTooLarge { unknowns: usize },
    /// The supplied fields are linearly dependent.
    Dependent,
}

impl fmt::Display for SymmetryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryError::AnsatzTooLarge { unknowns } => {
                write!(f, "ansatz has {unknowns} unknowns (limit {MAX_UNKNOWNS})")
            }
            SymmetryError::Dependent => f.write_str("symmetry fields are linearly dependent"),
        }
    }
}

impl core::error::Error for SymmetryError {}

/// Search space for symmetry components: polynomials of total degree
/// `≤ degree` in `x, y, w`, each optionally times one of `cos(m·w)`,
/// `sin(m·w)` (`1 ≤ m ≤ trig_max`) or `e^(n·w)` (`0 < |n| ≤ exp_range`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ansatz {
    pub degree: u32,
    pub trig_max: u32,
    pub exp_range: u32,
}

impl Default for Ansatz {
    fn default() -> Self {
        Ansatz {
            degree: 2,
            trig_max: 2,
            exp_range: 2,
        }
    }
}

impl fmt::Display for Ansatz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.degree, self.trig_max, self.exp_range)
    }
}

impl Ansatz {
    pub fn new(degree: u32, trig_max: u32, exp_range: u32) -> Self {
        Ansatz {
            degree,
            trig_max,
            exp_range,
        }
    }

    /// One step larger in every direction.
    pub fn escalate(&self) -> Ansatz {
        Ansatz::new(self.degree + 1, self.trig_max + 1, self.exp_range + 1)
    }

    fn transcendental_count(&self) -> usize {
        1 + 2 * self.trig_max as usize + 2 * self.exp_range as usize
    }

    fn polynomial_count(&self) -> usize {
        let d = self.degree as usize;
        (d + 1) * (d + 2) * (d + 3) / 6
    }

    pub fn unknowns(&self) -> usize {
        3 * self.polynomial_count() * self.transcendental_count()
    }

    /// Scalar monomials of the ansatz in canonical order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut factors: Vec<(Option<(Trig, u32)>, i32)> = Vec::new();
        factors.push((None, 0));
        for m in 1..=self.trig_max {
            factors.push((Some((Trig::Cos, m)), 0));
            factors.push((Some((Trig::Sin, m)), 0));
        }
        let range = self.exp_range as i32;
        for n in (-range..=range).filter(|n| *n != 0) {
            factors.push((None, n));
        }
        let mut out = Vec::new();
        for total in 0..=self.degree {
            for px in 0..=total {
                for py in 0..=total - px {
                    let pw = total - px - py;
                    for (trig, n) in &factors {
                        out.push(Monomial::new(px, py, pw, *trig, *n).expect("frequencies ≥ 1"));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Linearly independent symmetry fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryBasis {
    fields: Vec<VectorField>,
}

impl SymmetryBasis {
    pub fn new(fields: Vec<VectorField>) -> Result<Self, SymmetryError> {
        let (_, rows) = coefficient_rows(&fields);
        if linalg::rank(&rows) != fields.len() {
            return Err(SymmetryError::Dependent);
        }
        Ok(SymmetryBasis { fields })
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn dim(&self) -> usize {
        self.fields.len()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &VectorField) -> Option<Vec<Rational>> {
        span_coordinates(&self.fields, v)
    }

    pub fn contains(&self, v: &VectorField) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether both bases span the same space.
    pub fn same_span(&self, other: &[VectorField]) -> bool {
        linalg::rank(&coefficient_rows(other).1) == self.dim()
            && other.iter().all(|v| self.contains(v))
    }
}

type CoefKey = (usize, Monomial);

/// Flattens fields into dense coefficient rows over a shared key set.
fn coefficient_rows(fields: &[VectorField]) -> (BTreeMap<CoefKey, usize>, Vec<Vec<Rational>>) {
    let mut keys: BTreeMap<CoefKey, usize> = BTreeMap::new();
    for v in fields {
        for (i, c) in v.components().iter().enumerate() {
            for (m, _) in c.terms() {
                let n = keys.len();
                keys.entry((i, *m)).or_insert(n);
            }
        }
    }
    let rows = fields
        .iter()
        .map(|v| {
            let mut row = alloc::vec![Rational::zero(); keys.len()];
            for (i, c) in v.components().iter().enumerate() {
                for (m, q) in c.terms() {
                    row[keys[&(i, *m)]] = q.clone();
                }
            }
            row
        })
        .collect();
    (keys, rows)
}

/// Exact coordinates of `v` in `span(fields)` by coefficient matching.
pub fn span_coordinates(fields: &[VectorField], v: &VectorField) -> Option<Vec<Rational>> {
    let mut eqs: BTreeMap<CoefKey, SparseRow> = BTreeMap::new();
    for (j, b) in fields.iter().enumerate() {
        for (i, c) in b.components().iter().enumerate() {
            for (m, q) in c.terms() {
                eqs.entry((i, *m)).or_default().push((j, q.clone()));
            }
        }
    }
    for (i, c) in v.components().iter().enumerate() {
        for (m, _) in c.terms() {
            eqs.entry((i, *m)).or_default();
        }
    }
    let rhs = |key: &CoefKey| v.components()[key.0].coefficient(&key.1);
    linalg::solve(
        fields.len(),
        eqs.into_iter().map(|(k, row)| {
            let b = rhs(&k);
            (row, b)
        }),
    )
}

/// The six symmetry conditions: minors of `[v,g] ∧ g` then `[v,f] ∧ g`.
fn conditions(v: &VectorField, s: &ControlSystem) -> [Expr; 6] {
    let [a, b, c] = wedge(&lie_bracket(v, &s.g), &s.g);
    let [d, e, f] = wedge(&lie_bracket(v, &s.f), &s.g);
    [a, b, c, d, e, f]
}

/// Exact symbolic test that `v` is an infinitesimal symmetry of `s`.
pub fn is_symmetry(v: &VectorField, s: &ControlSystem) -> bool {
    conditions(v, s).iter().all(Expr::is_zero)
}

/// Basis of all symmetries of `s` inside the ansatz.
pub fn solve_symmetries(s: &ControlSystem, a: &Ansatz) -> Result<SymmetryBasis, SymmetryError> {
    let unknowns = a.unknowns();
    if unknowns > MAX_UNKNOWNS {
        return Err(SymmetryError::AnsatzTooLarge { unknowns });
    }
    let monomials = a.monomials();
    let generators: Vec<VectorField> = (0..3)
        .flat_map(|i| {
            monomials.iter().map(move |m| {
                let mut c: [Expr; 3] = Default::default();
                c[i] = Expr::term(*m, Rational::from_integer(1.into()));
                VectorField::from_components(c)
            })
        })
        .collect();
    debug_assert_eq!(generators.len(), unknowns);

    let mut equations: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
    for (j, e) in generators.iter().enumerate() {
        for (k, cond) in conditions(e, s).iter().enumerate() {
            for (m, q) in cond.terms() {
                equations.entry((k, *m)).or_default().push((j, q.clone()));
            }
        }
    }
    let mut ech = Echelon::new(unknowns);
    for row in equations.into_values() {
        ech.insert(row);
        if ech.rank() == unknowns {
            break;
        }
    }
    let fields = ech
        .into_rref()
        .nullspace()
        .into_iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(&generators)
                .filter(|(c, _)| !c.is_zero())
                .fold(VectorField::zero(), |acc, (c, e)| &acc + &e.scale(c))
        })
        .collect();
    Ok(SymmetryBasis { fields })
}

/// `c[i][j]` = coordinates of `[vᵢ, vⱼ]` in the basis, for `i < j`.
pub type BracketTable = BTreeMap<(usize, usize), Vec<Rational>>;

/// Decomposes every pairwise bracket in the basis; `None` if some bracket
/// leaves the span.
pub fn bracket_table(b: &SymmetryBasis) -> Option<BracketTable> {
    let mut table = BTreeMap::new();
    let n = b.dim();
    for i in 0..n {
        for j in i + 1..n {
            let br = lie_bracket(&b.fields[i], &b.fields[j]);
            table.insert((i, j), b.coordinates(&br)?);
        }
    }
    Some(table)
}

pub fn closed_under_bracket(b: &SymmetryBasis) -> bool {
    bracket_table(b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, rat};
    use crate::expr::Var;
    use crate::systems;

    fn field(cx: &str, cy: &str, cw: &str) -> VectorField {
        VectorField::new(parse(cx).unwrap(), parse(cy).unwrap(), parse(cw).unwrap())
    }

    #[test]
    fn null_form_generators_are_symmetries() {
        let e = systems::elliptic();
        assert!(is_symmetry(&VectorField::coordinate(Var::X), &e));
        assert!(is_symmetry(&field("y", "-x", "-1"), &e));
        assert!(!is_symmetry(&field("x", "0", "0"), &e));
        assert!(is_symmetry(&field("2*x", "y", "w"), &systems::parabolic()));
    }

    #[test]
    fn ansatz_sizes() {
        let a = Ansatz::new(1, 1, 0);
        assert_eq!(a.monomials().len(), 4 * 3);
        assert_eq!(a.unknowns(), 36);
        assert_eq!(Ansatz::default().unknowns(), 3 * 10 * 9);
        let huge = Ansatz::new(40, 10, 10);
        assert!(matches!(
            solve_symmetries(&systems::elliptic(), &huge),
            Err(SymmetryError::AnsatzTooLarge { .. })
        ));
    }

    #[test]
    fn elliptic_small_ansatz() {
        let b = solve_symmetries(&systems::elliptic(), &Ansatz::new(1, 1, 0)).unwrap();
        assert_eq!(b.dim(), 3);
        assert!(b.same_span(&systems::elliptic_symmetries()));
    }

    #[test]
    fn degenerate_drift_has_many_symmetries() {
        let s = ControlSystem::new(VectorField::zero(), VectorField::coordinate(Var::W)).unwrap();
        let b = solve_symmetries(&s, &Ansatz::new(1, 0, 0)).unwrap();
        assert!(b.dim() > 3);
    }

    #[test]
    fn closure() {
        let b = SymmetryBasis::new(systems::elliptic_symmetries()).unwrap();
        let t = bracket_table(&b).unwrap();
        assert_eq!(t[&(0, 2)], alloc::vec![rat(0), rat(-1), rat(0)]);
        assert_eq!(t[&(1, 2)], alloc::vec![rat(1), rat(0), rat(0)]);

        let open = SymmetryBasis::new(alloc::vec![VectorField::coordinate(Var::W), field("w^2", "0", "0")]).unwrap();
        assert!(!closed_under_bracket(&open));
    }

    #[test]
    fn dependent_fields_rejected() {
        let dx = VectorField::coordinate(Var::X);
        assert_eq!(
            SymmetryBasis::new(alloc::vec![dx.clone(), dx.scale(&rat(2))]),
            Err(SymmetryError::Dependent)
        );
    }
}
