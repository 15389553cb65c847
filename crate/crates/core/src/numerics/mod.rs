//! Flows, trajectories and normalizing charts in `f64`.

mod chart;
mod compiled;
mod flat;
mod flow;
mod simulate;

use core::fmt;

pub use chart::{build_chart, chart_invariant, Chart, ChartBox, ChartReport, InvariantReading};
pub use compiled::{CompiledExpr, CompiledField};
pub use flat::{flat_drift_derivative, FlatParabolic};
pub use flow::{flow_pushforward_residual, integrate_flow, integrate_flow_compiled, Matrix3, DEFAULT_STEP};
pub use simulate::{constraint_residual, constraint_value, simulate, ControlSchedule, Trajectory};

/// Norm beyond which an integration is declared to have escaped.
pub const BLOW_UP: f64 = 1e9;

pub(crate) fn escaped(x: &[f64; 3]) -> bool {
    let n = crate::vectorfield::norm(x);
    n.is_nan() || n > BLOW_UP
}

#[derive(Clone, Debug, PartialEq)]
pub enum NumericsError {
    BadStep,
    BlowUp { t: f64 },
    TooShort,
    EmptySchedule,
    NotCommuting,
    NotIndependent,
    ChartSingular { det: f64 },
    DivisionNearZero { c: f64 },
    NotConicAlgebra,
}

impl fmt::Display for NumericsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericsError::BadStep => f.write_str("step must be positive and finite"),
            NumericsError::BlowUp { t } => write!(f, "solution blew up near t = {t}"),
            NumericsError::TooShort => f.write_str("trajectory has fewer than 3 samples"),
            NumericsError::EmptySchedule => f.write_str("control schedule is empty or does not start at 0"),
            NumericsError::NotCommuting => f.write_str("ideal generators do not commute"),
            NumericsError::NotIndependent => f.write_str("v1, v2, g are dependent at the center"),
            NumericsError::ChartSingular { det } => write!(f, "chart Jacobian determinant {det:e} too small"),
            NumericsError::DivisionNearZero { c } => write!(f, "second drift component vanishes near c = {c}"),
            NumericsError::NotConicAlgebra => f.write_str("symmetry algebra has no 2-dimensional abelian ideal of conic type"),
        }
    }
}

impl core::error::Error for NumericsError {}
