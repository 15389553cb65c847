//! The JSON system document read and written by the command line tool.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use conic_core::expr::ParseError;
use conic_core::systems::ConicKind;
use conic_core::{parse, ControlSystem, Point, VectorField};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("cannot read {path}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid document")]
    Json(#[from] serde_json::Error),
    #[error("cannot parse {field}[{index}]")]
    Expr {
        field: String,
        index: usize,
        source: ParseError,
    },
    #[error("unknown kind {0:?} (expected E, H or P)")]
    Kind(String),
    #[error("no field named {0:?}")]
    MissingField(String),
    #[error("base point must be finite")]
    BadBase,
    #[error("control field g is zero")]
    ZeroControl,
    #[error("control field g vanishes at the base point")]
    DegenerateAtBase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub name: String,
    pub f: [String; 3],
    pub g: [String; 3],
    pub base: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Extra named fields, addressable next to `f` and `g`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fields: BTreeMap<String, [String; 3]>,
}

fn parse_field(name: &str, comps: &[String; 3]) -> Result<VectorField, DocError> {
    let mut out = Vec::with_capacity(3);
    for (index, c) in comps.iter().enumerate() {
        out.push(parse(c).map_err(|source| DocError::Expr {
            field: name.to_string(),
            index,
            source,
        })?);
    }
    let [a, b, c]: [_; 3] = out.try_into().expect("three components");
    Ok(VectorField::new(a, b, c))
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, DocError> {
        let text = fs::read_to_string(path).map_err(|source| DocError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_system(name: &str, s: &ControlSystem, kind: Option<ConicKind>) -> Self {
        let comps = |v: &VectorField| v.components().clone().map(|e| e.to_string());
        let base = s.base.unwrap_or_default();
        SystemDocument {
            name: name.to_string(),
            f: comps(&s.f),
            g: comps(&s.g),
            base: [base.x, base.y, base.w],
            kind: kind.map(|k| k.letter().to_string()),
            fields: BTreeMap::new(),
        }
    }

    pub fn base_point(&self) -> Result<Point, DocError> {
        let p = Point::from_array(self.base);
        if p.is_finite() {
            Ok(p)
        } else {
            Err(DocError::BadBase)
        }
    }

    pub fn kind(&self) -> Result<Option<ConicKind>, DocError> {
        self.kind
            .as_deref()
            .map(|k| k.parse().map_err(|_| DocError::Kind(k.to_string())))
            .transpose()
    }

    /// The system with its base point. `g` must not vanish there.
    pub fn system(&self) -> Result<ControlSystem, DocError> {
        let f = parse_field("f", &self.f)?;
        let g = parse_field("g", &self.g)?;
        let base = self.base_point()?;
        let s = ControlSystem::new(f, g).map_err(|_| DocError::ZeroControl)?;
        let gp = s.g.eval(&base).map_err(|_| DocError::DegenerateAtBase)?;
        if gp.iter().all(|c| *c == 0.0) {
            return Err(DocError::DegenerateAtBase);
        }
        Ok(s.with_base(base))
    }

    /// `f`, `g` or one of the extra fields.
    pub fn field(&self, name: &str) -> Result<VectorField, DocError> {
        match name {
            "f" => parse_field("f", &self.f),
            "g" => parse_field("g", &self.g),
            other => self
                .fields
                .get(other)
                .ok_or_else(|| DocError::MissingField(other.to_string()))
                .and_then(|c| parse_field(other, c)),
        }
    }
}
