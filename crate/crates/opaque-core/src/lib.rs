//! Computing with opaque sets (barriers) of the unit square: verifying and
//! refuting candidate segment barriers via witness lines, integral-geometry
//! line measures, the anchored sweep procedure, region audits, and an
//! exact-rational LP lower bound with an independently checkable certificate.

pub mod advance;
pub mod audit;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod line_measure;
pub mod lp_bound;
pub mod opacity;

pub use error::{Error, Result};
