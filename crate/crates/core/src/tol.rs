//! Numerical tolerances shared by the implementation and the test suites.

/// Relative tolerance for identities that hold exactly in real arithmetic
/// (duality pairings, Lipschitz and sandwich bounds of projections).
pub const REL_TOL: f64 = 1e-9;

/// Tolerance for distances to lines and for gap comparisons between balls.
pub const LINE_TOL: f64 = 1e-10;

/// Absolute accuracy promised for β-numbers in the plane.
pub const ABS_TOL: f64 = 1e-8;

/// β values at or below this are treated as numerically zero.
pub const BETA_FLOOR: f64 = 1e-12;

/// Accuracy of curve-parameter boundaries found by bisection.
pub const PARAM_TOL: f64 = 1e-12;

/// Number of angles in the seed grid of the planar line fit.
pub const ANGLE_SEEDS: usize = 256;
