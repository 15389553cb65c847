//! File formats, reports and seeded scrambles around `conic_core`.

pub mod document;
pub mod export;
pub mod report;
pub mod scramble;

pub use document::{DocError, SystemDocument};
