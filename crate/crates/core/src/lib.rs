//! Numerical toolkit for logharmonic mappings on the unit disk.
//!
//! The crate builds logharmonic maps `f = e^h · conj(e^g)` (and their
//! origin-fixed relatives `z e^h conj(e^g)`), computes dilatations,
//! Jacobians, pre-Schwarzian derivatives and their disk-supremum norms,
//! cross-checks growth bounds against an independent quadrature oracle,
//! evaluates a coefficient criterion for full starlikeness, and renders
//! image domains to SVG/CSV.

pub mod cli;
pub mod error;
pub mod extremal;
pub mod maps;
pub mod par;
pub mod quad;
pub mod render;
pub mod schwarz;
pub mod series;
pub mod starlike;
pub mod suite;

pub use error::{Error, Result};
pub use maps::{AnalyticMap, LogharmonicMap, RationalFn, Variant};
pub use schwarz::{GridSpec, SupremumReport};
pub use series::ComplexSeries;
