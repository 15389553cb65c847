//! Expressions flattened to `f64` terms for the integrators.

use alloc::vec::Vec;

use crate::expr::{powi, rational_to_f64, Expr, Point, Trig, Var};
use crate::vectorfield::VectorField;

#[derive(Clone, Copy, Debug)]
struct Term {
    coeff: f64,
    px: u32,
    py: u32,
    pw: u32,
    trig: Option<(Trig, f64)>,
    expk: f64,
}

#[derive(Clone, Debug, Default)]
pub struct CompiledExpr {
    terms: Vec<Term>,
}

impl CompiledExpr {
    pub fn new(e: &Expr) -> Self {
        let terms = e
            .terms()
            .map(|(m, c)| Term {
                coeff: rational_to_f64(c),
                px: m.power(Var::X),
                py: m.power(Var::Y),
                pw: m.power(Var::W),
                trig: m.trig().map(|(t, k)| (t, f64::from(k))),
                expk: f64::from(m.exp_frequency()),
            })
            .collect();
        CompiledExpr { terms }
    }

    pub fn eval(&self, p: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            let mut v = t.coeff * powi(p[0], t.px) * powi(p[1], t.py) * powi(p[2], t.pw);
            match t.trig {
                Some((Trig::Cos, k)) => v *= libm::cos(k * p[2]),
                Some((Trig::Sin, k)) => v *= libm::sin(k * p[2]),
                None => {}
            }
            if t.expk != 0.0 {
                v *= libm::exp(t.expk * p[2]);
            }
            acc += v;
        }
        acc
    }
}

/// A vector field together with its Jacobian, both ready for `f64` evaluation.
#[derive(Clone, Debug)]
pub struct CompiledField {
    components: [CompiledExpr; 3],
    jacobian: [[CompiledExpr; 3]; 3],
}

impl CompiledField {
    pub fn new(v: &VectorField) -> Self {
        let jac = v.jacobian();
        CompiledField {
            components: core::array::from_fn(|i| CompiledExpr::new(&v.components()[i])),
            jacobian: core::array::from_fn(|i| core::array::from_fn(|j| CompiledExpr::new(&jac[i][j]))),
        }
    }

    pub fn eval(&self, p: &[f64; 3]) -> [f64; 3] {
        core::array::from_fn(|i| self.components[i].eval(p))
    }

    pub fn eval_point(&self, p: &Point) -> [f64; 3] {
        self.eval(&p.to_array())
    }

    /// `J[i][j] = ∂vᵢ/∂ξⱼ`.
    pub fn jacobian(&self, p: &[f64; 3]) -> [[f64; 3]; 3] {
        core::array::from_fn(|i| core::array::from_fn(|j| self.jacobian[i][j].eval(p)))
    }
}
