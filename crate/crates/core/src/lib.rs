//! Geometry and multiscale analysis of curves in finite-dimensional ℓ_p spaces.
//!
//! The crate computes Jones β-numbers over multiresolution ball families,
//! builds (J,c)-cores and their tree, classifies arcs of polyline curves and
//! runs the geometric martingale weight construction over core trees.

pub mod banach;
pub mod beta;
pub mod cores;
pub mod curve;
mod error;
pub mod martingale;
pub mod net;
pub mod region;
mod search;
pub mod tol;

pub use error::{GeomError, Result};

/// A point of ℝ^d.
pub type Point = Vec<f64>;
