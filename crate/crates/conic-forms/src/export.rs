//! Trajectory export as CSV or JSON.

use conic_core::numerics::Trajectory;
use serde_json::{json, Value};

pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = String::from("t,x,y,w,u\n");
    for ((t, p), u) in tr.times.iter().zip(&tr.states).zip(&tr.controls) {
        out.push_str(&format!("{t:?},{:?},{:?},{:?},{u:?}\n", p.x, p.y, p.w));
    }
    out
}

/// An array of `{"t", "x", "y", "w", "u"}` objects.
pub fn trajectory_json(tr: &Trajectory) -> Value {
    Value::Array(
        tr.times
            .iter()
            .zip(&tr.states)
            .zip(&tr.controls)
            .map(|((t, p), u)| json!({"t": t, "x": p.x, "y": p.y, "w": p.w, "u": u}))
            .collect(),
    )
}
