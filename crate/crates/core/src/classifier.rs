//! Decides whether a system is locally feedback equivalent to one of the
//! conic null-forms at a point.
//!
//! The pipeline: solve for symmetries (twice, the second time in an enlarged
//! ansatz), require a 3-dimensional algebra closed under the bracket,
//! recognize it by the eigenvalue test of [`crate::liealg`], check that the
//! abelian ideal is transversal to `g` at the point and, in the parabolic
//! case, separate equilibria by the order `k` of the first nonvanishing
//! `g ∧ ad_g^k f`.

use alloc::vec::Vec;
use core::fmt;

use crate::expr::{ExprError, Point, Rational};
use crate::liealg::{classify_algebra, structure_constants, AlgebraClass, AlgebraTag, LieError, StructureConstants};
use crate::symmetry::{bracket_table, solve_symmetries, Ansatz, SymmetryBasis, SymmetryError};
use crate::vectorfield::{
    ad_power, cross, in_span_vectors, max_minor, norm, ControlSystem, VectorField, DEFAULT_TOL,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    DegenerateG,
    Expr(ExprError),
    Symmetry(SymmetryError),
    /// A supplied symmetry field fails the numeric symmetry test.
    NotASymmetry { index: usize },
}

impl From<ExprError> for ClassifyError {
    fn from(e: ExprError) -> Self {
        ClassifyError::Expr(e)
    }
}

impl From<SymmetryError> for ClassifyError {
    fn from(e: SymmetryError) -> Self {
        ClassifyError::Symmetry(e)
    }
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::DegenerateG => f.write_str("control field vanishes at the point"),
            ClassifyError::Expr(e) => e.fmt(f),
            ClassifyError::Symmetry(e) => e.fmt(f),
            ClassifyError::NotASymmetry { index } => {
                write!(f, "supplied field v{} is not a symmetry", index + 1)
            }
        }
    }
}

impl core::error::Error for ClassifyError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NotConicReason {
    SymmetryDimension,
    NotClosed,
    AlgebraNotLq,
    TransversalityFails,
}

impl NotConicReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NotConicReason::SymmetryDimension => "symmetry dimension ≠ 3",
            NotConicReason::NotClosed => "symmetries not closed under the bracket",
            NotConicReason::AlgebraNotLq => "algebra not in L_Q",
            NotConicReason::TransversalityFails => "I(ξ₀) ⊕ G(ξ₀) fails",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InconclusiveReason {
    AnsatzUnstable,
    KNotFound,
}

impl InconclusiveReason {
    pub fn as_str(self) -> &'static str {
        match self {
            InconclusiveReason::AnsatzUnstable => "ansatz unstable",
            InconclusiveReason::KNotFound => "k not found ≤ kmax",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictTag {
    Elliptic,
    Hyperbolic,
    ParabolicNonEq,
    ParabolicEq(u32),
    NotConic(NotConicReason),
    Inconclusive(InconclusiveReason),
}

impl VerdictTag {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictTag::Elliptic => "Elliptic",
            VerdictTag::Hyperbolic => "Hyperbolic",
            VerdictTag::ParabolicNonEq => "ParabolicNonEq",
            VerdictTag::ParabolicEq(_) => "ParabolicEq",
            VerdictTag::NotConic(_) => "NotConic",
            VerdictTag::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, VerdictTag::Inconclusive(_))
    }
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictTag::Elliptic => f.write_str("Elliptic (feedback equivalent to Σ_E)"),
            VerdictTag::Hyperbolic => f.write_str("Hyperbolic (feedback equivalent to Σ_H)"),
            VerdictTag::ParabolicNonEq => f.write_str("ParabolicNonEq (feedback equivalent to Σ_P^1)"),
            VerdictTag::ParabolicEq(k) => {
                write!(f, "ParabolicEq k={k} (feedback equivalent to Σ_P^{{0,{k}}})")
            }
            VerdictTag::NotConic(r) => write!(f, "NotConic: {}", r.as_str()),
            VerdictTag::Inconclusive(r) => write!(f, "Inconclusive: {}", r.as_str()),
        }
    }
}

/// One step of the search for the smallest `k` with `g ∧ ad_g^k f ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct KStep {
    pub k: u32,
    /// Largest 2×2 minor of `(g | ad_g^k f)` at the point.
    pub minor: f64,
    pub independent: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetrySource {
    Solved,
    Supplied,
}

/// Everything the classifier looked at, in pipeline order.
#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub source: SymmetrySource,
    pub ansatz: Option<Ansatz>,
    pub escalated: Option<Ansatz>,
    pub dim: Option<usize>,
    pub escalated_dim: Option<usize>,
    pub basis: Option<SymmetryBasis>,
    pub structure: Option<StructureConstants>,
    pub algebra: Option<AlgebraClass>,
    pub transversal: Option<bool>,
    pub transversal_det: Option<f64>,
    pub equilibrium: Option<bool>,
    pub k_trace: Vec<KStep>,
}

impl Evidence {
    fn new(source: SymmetrySource) -> Self {
        Evidence {
            source,
            ansatz: None,
            escalated: None,
            dim: None,
            escalated_dim: None,
            basis: None,
            structure: None,
            algebra: None,
            transversal: None,
            transversal_det: None,
            equilibrium: None,
            k_trace: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    pub ansatz: Ansatz,
    pub kmax: u32,
    pub tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            ansatz: Ansatz::default(),
            kmax: 8,
            tol: DEFAULT_TOL,
        }
    }
}

/// Numeric access to a system at points, which is all the pointwise part of
/// the decision needs.
pub trait PointwiseSystem {
    fn drift_at(&self, p: &Point) -> Result<[f64; 3], ClassifyError>;
    fn control_at(&self, p: &Point) -> Result<[f64; 3], ClassifyError>;
    /// `ad_g^k f` at `p`.
    fn ad_power_at(&self, k: u32, p: &Point) -> Result<[f64; 3], ClassifyError>;
    /// `[v, f]` and `[v, g]` at `p` for a symbolic field `v`.
    fn brackets_with_at(&self, v: &VectorField, p: &Point) -> Result<([f64; 3], [f64; 3]), ClassifyError>;
}

impl PointwiseSystem for ControlSystem {
    fn drift_at(&self, p: &Point) -> Result<[f64; 3], ClassifyError> {
        Ok(self.f.eval(p)?)
    }

    fn control_at(&self, p: &Point) -> Result<[f64; 3], ClassifyError> {
        Ok(self.g.eval(p)?)
    }

    fn ad_power_at(&self, k: u32, p: &Point) -> Result<[f64; 3], ClassifyError> {
        Ok(ad_power(&self.g, &self.f, k).eval(p)?)
    }

    fn brackets_with_at(&self, v: &VectorField, p: &Point) -> Result<([f64; 3], [f64; 3]), ClassifyError> {
        use crate::vectorfield::lie_bracket;
        Ok((lie_bracket(v, &self.f).eval(p)?, lie_bracket(v, &self.g).eval(p)?))
    }
}

/// Outcome of the `k` search, with the per-step trace.
#[derive(Clone, Debug, PartialEq)]
pub struct KSearch {
    pub k: Option<u32>,
    pub trace: Vec<KStep>,
}

/// Smallest `k ∈ [1, kmax]` with `g(p) ∧ ad_g^k f(p) ≠ 0`.
pub fn smallest_k_search(
    sys: &dyn PointwiseSystem,
    p: &Point,
    kmax: u32,
    tol: f64,
) -> Result<KSearch, ClassifyError> {
    let g = sys.control_at(p)?;
    if norm(&g) <= tol {
        return Err(ClassifyError::DegenerateG);
    }
    let mut trace = Vec::new();
    for k in 1..=kmax {
        let ad = sys.ad_power_at(k, p)?;
        let minor = max_minor(&g, &ad);
        let independent = minor > tol * (1.0 + norm(&g) * norm(&ad));
        trace.push(KStep { k, minor, independent });
        if independent {
            return Ok(KSearch { k: Some(k), trace });
        }
    }
    Ok(KSearch { k: None, trace })
}

pub fn smallest_k(s: &ControlSystem, p: &Point, kmax: u32, tol: f64) -> Result<Option<u32>, ClassifyError> {
    Ok(smallest_k_search(s, p, kmax, tol)?.k)
}

fn verdict(tag: VerdictTag, evidence: Evidence) -> Verdict {
    Verdict { tag, evidence }
}

/// Full decision for a symbolic system.
pub fn classify(s: &ControlSystem, p: &Point, opt: &ClassifyOptions) -> Result<Verdict, ClassifyError> {
    if norm(&s.g.eval(p)?) <= opt.tol {
        return Err(ClassifyError::DegenerateG);
    }
    let mut ev = Evidence::new(SymmetrySource::Solved);
    ev.ansatz = Some(opt.ansatz);
    let base = solve_symmetries(s, &opt.ansatz)?;
    ev.dim = Some(base.dim());
    // Solved fields are genuine symmetries, so more than three of them
    // already rules out every target algebra.
    if base.dim() > 3 {
        ev.basis = Some(base);
        return Ok(verdict(VerdictTag::NotConic(NotConicReason::SymmetryDimension), ev));
    }
    let escalated = opt.ansatz.escalate();
    ev.escalated = Some(escalated);
    let larger = solve_symmetries(s, &escalated)?;
    ev.escalated_dim = Some(larger.dim());
    ev.basis = Some(base.clone());
    if larger.dim() > 3 {
        return Ok(verdict(VerdictTag::NotConic(NotConicReason::SymmetryDimension), ev));
    }
    if larger.dim() != base.dim() {
        return Ok(verdict(VerdictTag::Inconclusive(InconclusiveReason::AnsatzUnstable), ev));
    }
    if base.dim() != 3 {
        return Ok(verdict(VerdictTag::NotConic(NotConicReason::SymmetryDimension), ev));
    }
    decide(s, base, p, opt, ev)
}

/// Decision for a system known only pointwise, with its symmetry algebra
/// supplied. Each supplied field is checked numerically at a few points
/// around `p` before it is trusted.
pub fn classify_with_symmetries(
    sys: &dyn PointwiseSystem,
    basis: SymmetryBasis,
    p: &Point,
    opt: &ClassifyOptions,
) -> Result<Verdict, ClassifyError> {
    if norm(&sys.control_at(p)?) <= opt.tol {
        return Err(ClassifyError::DegenerateG);
    }
    let probes = [
        Point::new(p.x + 0.1, p.y - 0.2, p.w + 0.5),
        Point::new(p.x - 0.3, p.y + 0.1, p.w - 0.6),
        Point::new(p.x + 0.2, p.y + 0.3, p.w + 0.8),
        Point::new(p.x, p.y, p.w - 1.2),
    ];
    for (index, v) in basis.fields().iter().enumerate() {
        for q in &probes {
            let g = sys.control_at(q)?;
            let (vf, vg) = sys.brackets_with_at(v, q)?;
            if !in_span_vectors(&vf, &g, 1e-7) || !in_span_vectors(&vg, &g, 1e-7) {
                return Err(ClassifyError::NotASymmetry { index });
            }
        }
    }
    let mut ev = Evidence::new(SymmetrySource::Supplied);
    ev.dim = Some(basis.dim());
    if basis.dim() != 3 {
        ev.basis = Some(basis);
        return Ok(verdict(VerdictTag::NotConic(NotConicReason::SymmetryDimension), ev));
    }
    decide(sys, basis, p, opt, ev)
}

fn decide(
    sys: &dyn PointwiseSystem,
    basis: SymmetryBasis,
    p: &Point,
    opt: &ClassifyOptions,
    mut ev: Evidence,
) -> Result<Verdict, ClassifyError> {
    let closed = bracket_table(&basis).is_some();
    let sc = match structure_constants(&basis) {
        Ok(sc) => sc,
        Err(LieError::NotClosed) | Err(_) if !closed => {
            ev.basis = Some(basis);
            return Ok(verdict(VerdictTag::NotConic(NotConicReason::NotClosed), ev));
        }
        Err(_) => {
            ev.basis = Some(basis);
            return Ok(verdict(VerdictTag::NotConic(NotConicReason::AlgebraNotLq), ev));
        }
    };
    let class = classify_algebra(&sc);
    ev.structure = Some(sc);
    let tag = class.tag;
    let ideal = class.ideal.clone();
    ev.algebra = Some(class);
    let Some(ideal) = ideal.filter(|_| tag != AlgebraTag::Other) else {
        ev.basis = Some(basis);
        return Ok(verdict(VerdictTag::NotConic(NotConicReason::AlgebraNotLq), ev));
    };

    let ideal_fields = ideal_fields(&basis, &ideal);
    let i1 = ideal_fields[0].eval(p)?;
    let i2 = ideal_fields[1].eval(p)?;
    let g = sys.control_at(p)?;
    let det = triple(&i1, &i2, &g);
    let transversal = det.abs() > opt.tol * (1.0 + norm(&i1) * norm(&i2) * norm(&g));
    ev.transversal = Some(transversal);
    ev.transversal_det = Some(det);
    ev.basis = Some(basis);
    if !transversal {
        return Ok(verdict(VerdictTag::NotConic(NotConicReason::TransversalityFails), ev));
    }

    let tag = match tag {
        AlgebraTag::EllipticE2 => VerdictTag::Elliptic,
        AlgebraTag::HyperbolicP11 => VerdictTag::Hyperbolic,
        AlgebraTag::ParabolicL322 => {
            let f = sys.drift_at(p)?;
            let equilibrium = in_span_vectors(&f, &g, opt.tol);
            ev.equilibrium = Some(equilibrium);
            if !equilibrium {
                VerdictTag::ParabolicNonEq
            } else {
                let search = smallest_k_search(sys, p, opt.kmax, opt.tol)?;
                ev.k_trace = search.trace;
                match search.k {
                    Some(k) => VerdictTag::ParabolicEq(k),
                    None => VerdictTag::Inconclusive(InconclusiveReason::KNotFound),
                }
            }
        }
        AlgebraTag::Other => unreachable!("filtered above"),
    };
    Ok(verdict(tag, ev))
}

/// The ideal basis as vector fields: `Σⱼ ideal[i][j]·vⱼ`.
pub fn ideal_fields(basis: &SymmetryBasis, ideal: &[[Rational; 3]; 2]) -> [VectorField; 2] {
    core::array::from_fn(|i| {
        basis
            .fields()
            .iter()
            .zip(&ideal[i])
            .fold(VectorField::zero(), |acc, (v, c)| &acc + &v.scale(c))
    })
}

fn triple(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let ab = cross(a, b);
    ab[0] * c[0] + ab[1] * c[1] + ab[2] * c[2]
}
