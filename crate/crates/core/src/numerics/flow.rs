use super::{escaped, CompiledField, NumericsError};
use crate::expr::Point;
use crate::vectorfield::{cross, norm, ControlSystem, VectorField};

pub type Matrix3 = [[f64; 3]; 3];

pub const DEFAULT_STEP: f64 = 1e-3;

pub(crate) const IDENTITY: Matrix3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub(crate) fn mat_mul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    core::array::from_fn(|i| core::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub(crate) fn mat_vec(a: &Matrix3, v: &[f64; 3]) -> [f64; 3] {
    core::array::from_fn(|i| (0..3).map(|k| a[i][k] * v[k]).sum())
}

fn axpy(x: &[f64; 3], a: f64, k: &[f64; 3]) -> [f64; 3] {
    core::array::from_fn(|i| x[i] + a * k[i])
}

fn maxpy(x: &Matrix3, a: f64, k: &Matrix3) -> Matrix3 {
    core::array::from_fn(|i| core::array::from_fn(|j| x[i][j] + a * k[i][j]))
}

pub(crate) fn steps_for(t: f64, step: f64) -> Result<usize, NumericsError> {
    if !(step > 0.0 && step.is_finite() && t.is_finite()) {
        return Err(NumericsError::BadStep);
    }
    Ok(libm::ceil(t.abs() / step) as usize)
}

/// One RK4 step of `x' = v(x)` with the variational equation `J' = Dv(x) J`.
pub(crate) fn rk4_step(
    rhs: &dyn Fn(&[f64; 3]) -> [f64; 3],
    jac: &dyn Fn(&[f64; 3]) -> Matrix3,
    x: &[f64; 3],
    m: &Matrix3,
    h: f64,
) -> ([f64; 3], Matrix3) {
    let k1 = rhs(x);
    let l1 = mat_mul(&jac(x), m);
    let x2 = axpy(x, h / 2.0, &k1);
    let m2 = maxpy(m, h / 2.0, &l1);
    let k2 = rhs(&x2);
    let l2 = mat_mul(&jac(&x2), &m2);
    let x3 = axpy(x, h / 2.0, &k2);
    let m3 = maxpy(m, h / 2.0, &l2);
    let k3 = rhs(&x3);
    let l3 = mat_mul(&jac(&x3), &m3);
    let x4 = axpy(x, h, &k3);
    let m4 = maxpy(m, h, &l3);
    let k4 = rhs(&x4);
    let l4 = mat_mul(&jac(&x4), &m4);
    let xn = core::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    let mn = core::array::from_fn(|i| {
        core::array::from_fn(|j| m[i][j] + h / 6.0 * (l1[i][j] + 2.0 * l2[i][j] + 2.0 * l3[i][j] + l4[i][j]))
    });
    (xn, mn)
}

/// Time-`t` flow of a compiled field from `p0`, with its Jacobian.
pub fn integrate_flow_compiled(
    v: &CompiledField,
    p0: &Point,
    t: f64,
    step: f64,
) -> Result<(Point, Matrix3), NumericsError> {
    let n = steps_for(t, step)?;
    let mut x = p0.to_array();
    let mut m = IDENTITY;
    if n == 0 {
        return Ok((*p0, m));
    }
    let h = t / n as f64;
    let rhs = |p: &[f64; 3]| v.eval(p);
    let jac = |p: &[f64; 3]| v.jacobian(p);
    for i in 0..n {
        (x, m) = rk4_step(&rhs, &jac, &x, &m, h);
        if escaped(&x) {
            return Err(NumericsError::BlowUp { t: h * (i + 1) as f64 });
        }
    }
    Ok((Point::from_array(x), m))
}

/// `γ^v_t(p0)` and `Dγ^v_t(p0)` by classical RK4 with step at most `step`.
pub fn integrate_flow(v: &VectorField, p0: &Point, t: f64, step: f64) -> Result<(Point, Matrix3), NumericsError> {
    integrate_flow_compiled(&CompiledField::new(v), p0, t, step)
}

/// How far the flow of `v` is from preserving the affine line field
/// `f + span{g}` between `p` and `q = γ^v_t(p)`.
pub fn flow_pushforward_residual(v: &VectorField, s: &ControlSystem, p: &Point, t: f64) -> Result<f64, NumericsError> {
    flow_pushforward_residual_step(v, s, p, t, DEFAULT_STEP)
}

pub(crate) fn flow_pushforward_residual_step(
    v: &VectorField,
    s: &ControlSystem,
    p: &Point,
    t: f64,
    step: f64,
) -> Result<f64, NumericsError> {
    let (q, m) = integrate_flow(v, p, t, step)?;
    let f = CompiledField::new(&s.f);
    let g = CompiledField::new(&s.g);
    let mg = mat_vec(&m, &g.eval_point(p));
    let mf = mat_vec(&m, &f.eval_point(p));
    let gq = g.eval_point(&q);
    let fq = f.eval_point(&q);
    let dg = norm(&cross(&mg, &gq)) / (norm(&mg) * norm(&gq));
    let df_vec: [f64; 3] = core::array::from_fn(|i| mf[i] - fq[i]);
    let df = norm(&cross(&df_vec, &gq)) / ((1.0 + norm(&mf) + norm(&fq)) * norm(&gq));
    Ok(dg + df)
}
