use alloc::vec::Vec;

use super::flow::{rk4_step, steps_for, IDENTITY};
use super::{escaped, CompiledField, NumericsError};
use crate::expr::Point;
use crate::systems::ConicKind;
use crate::vectorfield::ControlSystem;

/// A piecewise-constant control: `u(t) = values[i]` on `[starts[i], starts[i+1])`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSchedule {
    pieces: Vec<(f64, f64)>,
}

impl ControlSchedule {
    pub fn constant(u: f64) -> Self {
        ControlSchedule { pieces: alloc::vec![(0.0, u)] }
    }

    /// Pieces as `(start, value)`. The first start must be 0 and the starts
    /// strictly increasing.
    pub fn new(pieces: Vec<(f64, f64)>) -> Result<Self, NumericsError> {
        let ordered = pieces.windows(2).all(|w| w[0].0 < w[1].0);
        match pieces.first() {
            Some(&(t0, _)) if t0 == 0.0 && ordered && pieces.iter().all(|(t, u)| t.is_finite() && u.is_finite()) => {
                Ok(ControlSchedule { pieces })
            }
            _ => Err(NumericsError::EmptySchedule),
        }
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .take_while(|(start, _)| *start <= t)
            .last()
            .map_or(self.pieces[0].1, |&(_, u)| u)
    }
}

/// Samples of a solution; `controls[i]` is the control acting on
/// `[times[i], times[i+1])`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Point>,
    pub controls: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn endpoint(&self) -> Option<Point> {
        self.states.last().copied()
    }
}

/// RK4 solution of `ξ̇ = f(ξ) + g(ξ)u(t)` on `[0, t_end]`. Steps never
/// straddle a switching time of the schedule.
pub fn simulate(
    s: &ControlSystem,
    u: &ControlSchedule,
    p0: &Point,
    t_end: f64,
    step: f64,
) -> Result<Trajectory, NumericsError> {
    steps_for(t_end, step)?;
    let f = CompiledField::new(&s.f);
    let g = CompiledField::new(&s.g);
    let mut tr = Trajectory::default();
    let mut x = p0.to_array();
    let pieces = u.pieces();
    for (i, &(start, value)) in pieces.iter().enumerate() {
        if start >= t_end {
            break;
        }
        let stop = pieces.get(i + 1).map_or(t_end, |&(next, _)| next.min(t_end));
        let n = steps_for(stop - start, step)?.max(1);
        let h = (stop - start) / n as f64;
        let rhs = |p: &[f64; 3]| {
            let (a, b) = (f.eval(p), g.eval(p));
            core::array::from_fn(|k| a[k] + value * b[k])
        };
        let zero_jac = |_: &[f64; 3]| [[0.0; 3]; 3];
        for j in 0..n {
            tr.times.push(start + h * j as f64);
            tr.states.push(Point::from_array(x));
            tr.controls.push(value);
            (x, _) = rk4_step(&rhs, &zero_jac, &x, &IDENTITY, h);
            if escaped(&x) {
                return Err(NumericsError::BlowUp { t: start + h * (j + 1) as f64 });
            }
        }
    }
    tr.times.push(t_end);
    tr.states.push(Point::from_array(x));
    tr.controls.push(u.value_at(t_end));
    Ok(tr)
}

/// `S(ẋ, ẏ)` for the constraint of the given conic.
pub fn constraint_value(kind: ConicKind, dx: f64, dy: f64) -> f64 {
    match kind {
        ConicKind::Elliptic => dx * dx + dy * dy - 1.0,
        ConicKind::Hyperbolic => dx * dx - dy * dy - 1.0,
        ConicKind::Parabolic => dy * dy - dx,
    }
}

/// Largest `|S(ẋ, ẏ)|` over interior samples, with velocities from
/// three-point differences. Samples whose stencil spans a control switch are
/// skipped since the velocity is not differentiable there.
pub fn constraint_residual(tr: &Trajectory, kind: ConicKind) -> Result<f64, NumericsError> {
    if tr.len() < 3 {
        return Err(NumericsError::TooShort);
    }
    let mut worst: f64 = 0.0;
    for i in 1..tr.len() - 1 {
        if tr.controls[i - 1] != tr.controls[i] {
            continue;
        }
        let (t0, t1, t2) = (tr.times[i - 1], tr.times[i], tr.times[i + 1]);
        let (h1, h2) = (t1 - t0, t2 - t1);
        let c0 = -h2 / (h1 * (h1 + h2));
        let c1 = (h2 - h1) / (h1 * h2);
        let c2 = h1 / (h2 * (h1 + h2));
        let (a, b, c) = (&tr.states[i - 1], &tr.states[i], &tr.states[i + 1]);
        let dx = c0 * a.x + c1 * b.x + c2 * c.x;
        let dy = c0 * a.y + c1 * b.y + c2 * c.y;
        worst = worst.max(constraint_value(kind, dx, dy).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems;

    #[test]
    fn straight_line() {
        let tr = simulate(&systems::elliptic(), &ControlSchedule::constant(0.0), &Point::ORIGIN, 1.0, 1e-3).unwrap();
        let q = tr.endpoint().unwrap();
        assert!((q.x - 1.0).abs() < 1e-12 && q.y.abs() < 1e-12);
        assert_eq!(tr.len(), 1001);
    }

    #[test]
    fn parabolic_constant_velocity() {
        let tr = simulate(&systems::parabolic(), &ControlSchedule::constant(0.0), &Point::new(0.0, 0.0, 2.0), 1.0, 1e-3)
            .unwrap();
        let q = tr.endpoint().unwrap();
        assert!((q.x - 4.0).abs() < 1e-10 && (q.y - 2.0).abs() < 1e-10 && q.w == 2.0);
    }

    #[test]
    fn schedule_lookup() {
        let u = ControlSchedule::new(alloc::vec![(0.0, 1.0), (0.5, -1.0)]).unwrap();
        assert_eq!(u.value_at(0.2), 1.0);
        assert_eq!(u.value_at(0.5), -1.0);
        assert!(ControlSchedule::new(alloc::vec![(0.1, 1.0)]).is_err());
        assert!(ControlSchedule::new(alloc::vec![]).is_err());
    }

    #[test]
    fn too_short() {
        let tr = Trajectory {
            times: alloc::vec![0.0, 1.0],
            states: alloc::vec![Point::ORIGIN; 2],
            controls: alloc::vec![0.0; 2],
        };
        assert_eq!(constraint_residual(&tr, ConicKind::Elliptic), Err(NumericsError::TooShort));
    }
}
