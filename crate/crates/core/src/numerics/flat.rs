use alloc::vec;
use alloc::vec::Vec;

use crate::classifier::{ClassifyError, PointwiseSystem};
use crate::expr::{Expr, Point, Var};
use crate::symmetry::SymmetryBasis;
use crate::vectorfield::VectorField;

/// `d^k/dw^k exp(-a/w²)`, extended by 0 at `w = 0`.
///
/// The derivative is `P_k(1/w)·exp(-a/w²)` with `P_0 = 1` and
/// `P_{k+1}(u) = -u²P_k'(u) + 2a·u³P_k(u)`.
pub fn flat_drift_derivative(a: f64, k: u32, w: f64) -> f64 {
    let e = if w == 0.0 { 0.0 } else { libm::exp(-a / (w * w)) };
    if e == 0.0 {
        return 0.0;
    }
    let mut poly: Vec<f64> = vec![1.0];
    for _ in 0..k {
        let mut next = vec![0.0; poly.len() + 3];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] -= c * i as f64;
            next[i + 3] += 2.0 * a * c;
        }
        poly = next;
    }
    let u = 1.0 / w;
    let value = poly.iter().rev().fold(0.0, |acc, c| acc * u + c);
    value * e
}

/// `ẋ = exp(-2/w²), ẏ = exp(-1/w²), ẇ = u`: the parabolic null-form with
/// `w` replaced by a function flat at 0. The drift is not in the symbolic
/// class, so it is only available pointwise.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlatParabolic;

impl FlatParabolic {
    /// `∂x, ∂y, 2x∂x + y∂y + (w³/2)∂w`.
    pub fn symmetries(&self) -> SymmetryBasis {
        let half = crate::expr::ratio(1, 2);
        SymmetryBasis::new(vec![
            VectorField::coordinate(Var::X),
            VectorField::coordinate(Var::Y),
            VectorField::new(Expr::x().scale(&crate::expr::rat(2)), Expr::y(), Expr::w().pow(3).scale(&half)),
        ])
        .expect("independent generators")
    }

    fn drift_derivative(&self, k: u32, w: f64) -> [f64; 3] {
        [flat_drift_derivative(2.0, k, w), flat_drift_derivative(1.0, k, w), 0.0]
    }
}

impl PointwiseSystem for FlatParabolic {
    fn drift_at(&self, p: &Point) -> Result<[f64; 3], ClassifyError> {
        Ok(self.drift_derivative(0, p.w))
    }

    fn control_at(&self, _p: &Point) -> Result<[f64; 3], ClassifyError> {
        Ok([0.0, 0.0, 1.0])
    }

    fn ad_power_at(&self, k: u32, p: &Point) -> Result<[f64; 3], ClassifyError> {
        // With g = ∂w, ad_g f = ∂f/∂w.
        Ok(self.drift_derivative(k, p.w))
    }

    fn brackets_with_at(&self, v: &VectorField, p: &Point) -> Result<([f64; 3], [f64; 3]), ClassifyError> {
        let vp = v.eval(p)?;
        let jac = v.jacobian();
        let dv: [[f64; 3]; 3] = {
            let mut out = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = jac[i][j].eval(p)?;
                }
            }
            out
        };
        let f = self.drift_at(p)?;
        let df_dw = self.drift_derivative(1, p.w);
        // [v, f] = Df·v − Dv·f, where f depends on w only.
        let vf = core::array::from_fn(|i| df_dw[i] * vp[2] - (0..3).map(|j| dv[i][j] * f[j]).sum::<f64>());
        // [v, ∂w] = −∂v/∂w.
        let vg = core::array::from_fn(|i| -dv[i][2]);
        Ok((vf, vg))
    }
}
