use alloc::vec::Vec;

use super::flow::{integrate_flow_compiled, mat_mul, mat_vec, Matrix3};
use super::{CompiledField, NumericsError};
use crate::classifier::ideal_fields;
use crate::expr::{rational_to_f64, Point};
use crate::liealg::{classify_algebra, structure_constants, AlgebraTag};
use crate::symmetry::SymmetryBasis;
use crate::systems::ConicKind;
use crate::vectorfield::{lie_bracket, norm, ControlSystem, VectorField};

/// Half-width of the cube `[-h, h]³` in chart coordinates and the number
/// of grid points per axis used to validate it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartBox {
    pub half_width: f64,
    pub points: usize,
}

impl ChartBox {
    pub fn new(half_width: f64) -> Self {
        ChartBox { half_width, points: 5 }
    }

    fn axis(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points.max(2);
        (0..n).map(move |i| -self.half_width + 2.0 * self.half_width * i as f64 / (n - 1) as f64)
    }
}

/// Grid measurements taken when the chart was built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartReport {
    /// Largest deviation of the pulled-back `v₁` from `∂a`.
    pub v1_residual: f64,
    /// Largest deviation of the pulled-back `v₂` from `∂b`.
    pub v2_residual: f64,
    /// Largest spread over `(a, b)` of `g̃ᵃ/g̃ᶜ` and `g̃ᵇ/g̃ᶜ` at fixed `c`.
    pub g_ratio_spread: f64,
    pub min_abs_det: f64,
}

/// `(a, b, c) ↦ γ^{v₁}_a ∘ γ^{v₂}_b ∘ γ^g_c(center)`.
#[derive(Clone, Debug)]
pub struct Chart {
    pub center: Point,
    pub v1: VectorField,
    pub v2: VectorField,
    pub g: VectorField,
    pub step: f64,
    pub extent: ChartBox,
    pub tag: AlgebraTag,
    /// `ad_ℓ` on the ideal in the basis `(v₁, v₂)`.
    pub ad: [[f64; 2]; 2],
    pub report: ChartReport,
    cv1: CompiledField,
    cv2: CompiledField,
    cg: CompiledField,
}

fn det(m: &Matrix3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn solve3(m: &Matrix3, v: &[f64; 3]) -> [f64; 3] {
    let d = det(m);
    core::array::from_fn(|k| {
        let mut mk = *m;
        for (row, vi) in mk.iter_mut().zip(v) {
            row[k] = *vi;
        }
        det(&mk) / d
    })
}

impl Chart {
    /// The chart point and its Jacobian `∂(x,y,w)/∂(a,b,c)`.
    pub fn map(&self, a: f64, b: f64, c: f64) -> Result<(Point, Matrix3), NumericsError> {
        let (p1, _) = integrate_flow_compiled(&self.cg, &self.center, c, self.step)?;
        let (p2, j2) = integrate_flow_compiled(&self.cv2, &p1, b, self.step)?;
        let (q, j1) = integrate_flow_compiled(&self.cv1, &p2, a, self.step)?;
        let col_a = self.cv1.eval_point(&q);
        let col_b = mat_vec(&j1, &self.cv2.eval_point(&p2));
        let col_c = mat_vec(&mat_mul(&j1, &j2), &self.cg.eval_point(&p1));
        let df = core::array::from_fn(|i| [col_a[i], col_b[i], col_c[i]]);
        Ok((q, df))
    }

    /// Components of the field `v` in chart coordinates at `(a, b, c)`.
    pub fn pull_back(&self, v: &CompiledField, a: f64, b: f64, c: f64) -> Result<[f64; 3], NumericsError> {
        let (q, df) = self.map(a, b, c)?;
        Ok(solve3(&df, &v.eval_point(&q)))
    }
}

/// Builds the rectifying chart of the abelian ideal of `basis` and `g`
/// around `p`, and validates it on a grid over the box.
pub fn build_chart(
    s: &ControlSystem,
    basis: &SymmetryBasis,
    p: &Point,
    extent: ChartBox,
    step: f64,
) -> Result<Chart, NumericsError> {
    let sc = structure_constants(basis).map_err(|_| NumericsError::NotConicAlgebra)?;
    let class = classify_algebra(&sc);
    let (Some(ideal), Some(ad)) = (class.ideal.as_ref(), class.ad_matrix.as_ref()) else {
        return Err(NumericsError::NotConicAlgebra);
    };
    let [v1, v2] = ideal_fields(basis, ideal);
    if !lie_bracket(&v1, &v2).is_zero() {
        return Err(NumericsError::NotCommuting);
    }
    let mut chart = Chart {
        center: *p,
        cv1: CompiledField::new(&v1),
        cv2: CompiledField::new(&v2),
        cg: CompiledField::new(&s.g),
        v1,
        v2,
        g: s.g.clone(),
        step,
        extent,
        tag: class.tag,
        ad: core::array::from_fn(|i| core::array::from_fn(|j| rational_to_f64(&ad[i][j]))),
        report: ChartReport {
            v1_residual: 0.0,
            v2_residual: 0.0,
            g_ratio_spread: 0.0,
            min_abs_det: f64::INFINITY,
        },
    };
    let (_, df0) = chart.map(0.0, 0.0, 0.0)?;
    let cols: [[f64; 3]; 3] = core::array::from_fn(|j| core::array::from_fn(|i| df0[i][j]));
    if det(&df0).abs() <= 1e-9 * (1.0 + norm(&cols[0]) * norm(&cols[1]) * norm(&cols[2])) {
        return Err(NumericsError::NotIndependent);
    }

    let mut report = chart.report;
    let axis: Vec<f64> = extent.axis().collect();
    for &c in &axis {
        let mut ratios = Vec::with_capacity(axis.len() * axis.len());
        for &a in &axis {
            for &b in &axis {
                let (q, df) = chart.map(a, b, c)?;
                let d = det(&df);
                report.min_abs_det = report.min_abs_det.min(d.abs());
                if d.abs() < 1e-6 {
                    return Err(NumericsError::ChartSingular { det: d });
                }
                let e1 = solve3(&df, &chart.cv1.eval_point(&q));
                let e2 = solve3(&df, &chart.cv2.eval_point(&q));
                let gt = solve3(&df, &chart.cg.eval_point(&q));
                report.v1_residual = report.v1_residual.max(norm(&[e1[0] - 1.0, e1[1], e1[2]]));
                report.v2_residual = report.v2_residual.max(norm(&[e2[0], e2[1] - 1.0, e2[2]]));
                ratios.push([gt[0] / gt[2], gt[1] / gt[2]]);
            }
        }
        let n = ratios.len() as f64;
        let mean = [
            ratios.iter().map(|r| r[0]).sum::<f64>() / n,
            ratios.iter().map(|r| r[1]).sum::<f64>() / n,
        ];
        for r in &ratios {
            let dev = (r[0] - mean[0]).abs().max((r[1] - mean[1]).abs());
            report.g_ratio_spread = report.g_ratio_spread.max(dev);
        }
    }
    chart.report = report;
    Ok(chart)
}

/// The conserved quantity read off along the chart's `c`-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReading {
    pub value: f64,
    /// Largest deviation of a sample from `value`.
    pub spread: f64,
    pub samples: Vec<(f64, f64)>,
}

fn eigenvector(m: &[[f64; 2]; 2], mu: f64) -> [f64; 2] {
    let u = [m[0][1], mu - m[0][0]];
    let v = [mu - m[1][1], m[1][0]];
    let pick = if libm::hypot(u[0], u[1]) >= libm::hypot(v[0], v[1]) { u } else { v };
    let len = libm::hypot(pick[0], pick[1]);
    let s = if pick[0].abs() >= pick[1].abs() { pick[0].signum() } else { pick[1].signum() };
    [s * pick[0] / len, s * pick[1] / len]
}

/// Evaluates the class invariant of the feedback-reduced drift along the
/// `c`-axis: a quadratic form preserved by `ad_ℓ` for E and H, and
/// `z₁/z₂²` in eigen-coordinates of `ad_ℓ` for P.
pub fn chart_invariant(s: &ControlSystem, ch: &Chart, kind: ConicKind) -> Result<InvariantReading, NumericsError> {
    let cf = CompiledField::new(&s.f);
    let m = ch.ad;
    let tr = m[0][0] + m[1][1];
    let dm = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let n = 21;
    let h = ch.extent.half_width;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let c = -h + 2.0 * h * i as f64 / (n - 1) as f64;
        let (q, df) = ch.map(0.0, 0.0, c)?;
        let ft = solve3(&df, &cf.eval_point(&q));
        let gt = solve3(&df, &ch.cg.eval_point(&q));
        let r = ft[2] / gt[2];
        let f = [ft[0] - r * gt[0], ft[1] - r * gt[1]];
        let value = match kind {
            ConicKind::Elliptic | ConicKind::Hyperbolic => {
                if dm == 0.0 {
                    return Err(NumericsError::NotConicAlgebra);
                }
                // J·ad_ℓ with J the rotation by -π/2; symmetric when tr = 0.
                let q = [[m[1][0], m[1][1]], [-m[0][0], -m[0][1]]];
                let quad = q[0][0] * f[0] * f[0] + (q[0][1] + q[1][0]) * f[0] * f[1] + q[1][1] * f[1] * f[1];
                quad / libm::sqrt(dm.abs())
            }
            ConicKind::Parabolic => {
                let mu2 = tr / 3.0;
                if mu2 == 0.0 {
                    return Err(NumericsError::NotConicAlgebra);
                }
                let e1 = eigenvector(&m, 2.0 * mu2);
                let e2 = eigenvector(&m, mu2);
                let d = e1[0] * e2[1] - e1[1] * e2[0];
                let z1 = (f[0] * e2[1] - f[1] * e2[0]) / d;
                let z2 = (e1[0] * f[1] - e1[1] * f[0]) / d;
                if z2.abs() < 1e-8 {
                    return Err(NumericsError::DivisionNearZero { c });
                }
                z1 / (z2 * z2)
            }
        };
        samples.push((c, value));
    }
    let mut mean = samples.iter().map(|s| s.1).sum::<f64>() / n as f64;
    if kind != ConicKind::Parabolic && mean < 0.0 {
        for s in &mut samples {
            s.1 = -s.1;
        }
        mean = -mean;
    }
    let spread = samples.iter().fold(0.0f64, |acc, s| acc.max((s.1 - mean).abs()));
    Ok(InvariantReading {
        value: mean,
        spread,
        samples,
    })
}
