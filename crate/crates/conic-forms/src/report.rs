//! Human-readable and JSON reports.

use conic_core::classifier::{Evidence, SymmetrySource, VerdictTag};
use conic_core::liealg::AlgebraClass;
use conic_core::numerics::{Chart, InvariantReading};
use conic_core::{SymmetryBasis, Verdict};
use serde_json::{json, Value};

fn algebra_json(a: &AlgebraClass) -> Value {
    let mut v = json!({ "tag": a.tag.name(), "label": a.tag.label() });
    if let Some(e) = &a.eigen {
        v["trace"] = json!(e.trace.to_string());
        v["det"] = json!(e.det.to_string());
        v["discriminant"] = json!(e.discriminant.to_string());
    }
    if let Some(m) = &a.ad_matrix {
        v["ad_matrix"] = json!(m.iter().map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    v
}

fn basis_json(b: &SymmetryBasis) -> Value {
    json!(b.fields().iter().map(|f| f.to_string()).collect::<Vec<_>>())
}

pub fn evidence_json(e: &Evidence) -> Value {
    json!({
        "symmetry_source": match e.source {
            SymmetrySource::Solved => "solved",
            SymmetrySource::Supplied => "supplied",
        },
        "ansatz": e.ansatz.map(|a| a.to_string()),
        "escalated_ansatz": e.escalated.map(|a| a.to_string()),
        "dim": e.dim,
        "escalated_dim": e.escalated_dim,
        // Large degenerate spaces are summarized by their dimension.
        "basis": e.basis.as_ref().filter(|b| b.dim() <= 3).map(basis_json),
        "structure_constants": e.structure.as_ref().map(|s| s.to_string()),
        "algebra": e.algebra.as_ref().map(algebra_json),
        "transversal": e.transversal,
        "transversal_det": e.transversal_det,
        "equilibrium": e.equilibrium,
        "k_search": e.k_trace.iter().map(|s| json!({"k": s.k, "minor": s.minor, "independent": s.independent})).collect::<Vec<_>>(),
    })
}

pub fn verdict_json(v: &Verdict) -> Value {
    let (k, reason) = match v.tag {
        VerdictTag::ParabolicEq(k) => (Some(k), None),
        VerdictTag::NotConic(r) => (None, Some(r.as_str())),
        VerdictTag::Inconclusive(r) => (None, Some(r.as_str())),
        _ => (None, None),
    };
    json!({
        "verdict": v.tag.name(),
        "k": k,
        "reason": reason,
        "summary": v.tag.to_string(),
        "evidence": evidence_json(&v.evidence),
    })
}

/// Plain-text listing of a basis and, when closed, its bracket table.
pub fn symmetries_text(b: &SymmetryBasis, structure: Option<&conic_core::StructureConstants>) -> String {
    let mut out = format!("dimension {}\n", b.dim());
    for (i, f) in b.fields().iter().enumerate() {
        out.push_str(&format!("v{} = ({f})\n", i + 1));
    }
    if let Some(sc) = structure {
        out.push_str(&format!("{sc}\n"));
    }
    out
}

pub fn chart_json(ch: &Chart, reading: Option<&InvariantReading>) -> Value {
    let p = ch.center;
    let mut v = json!({
        "center": [p.x, p.y, p.w],
        "v1": ch.v1.to_string(),
        "v2": ch.v2.to_string(),
        "g": ch.g.to_string(),
        "box": ch.extent.half_width,
        "grid_points": ch.extent.points,
        "step": ch.step,
        "algebra": ch.tag.name(),
        "ad_matrix": ch.ad,
        "v1_residual": ch.report.v1_residual,
        "v2_residual": ch.report.v2_residual,
        "g_ratio_spread": ch.report.g_ratio_spread,
        "min_abs_det": ch.report.min_abs_det,
    });
    if let Some(r) = reading {
        v["invariant"] = json!({
            "value": r.value,
            "spread": r.spread,
            "samples": r.samples.iter().map(|(c, x)| json!({"c": c, "value": x})).collect::<Vec<_>>(),
        });
    }
    v
}
