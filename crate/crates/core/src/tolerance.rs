//! Default numerical tolerances. Every matrix comparison in the crate uses the
//! max-norm of the entrywise difference.

/// Matrix identity checks (products of a handful of factors).
pub const MATRIX: f64 = 1e-10;

/// Orthogonality and determinant checks on user supplied rotations.
pub const ROTATION: f64 = 1e-9;

/// Unit-vector check on boost directions.
pub const UNIT: f64 = 1e-12;

/// Relative distance to an interval endpoint below which a velocity is rejected.
pub const ENDPOINT: f64 = 1e-12;

/// Parameters below this magnitude count as zero in numeric classification mode.
pub const NUMERIC_ZERO: f64 = 1e-12;

/// Final residual under which a two-way decomposition counts as a membership proof.
pub const MEMBERSHIP: f64 = 1e-8;
