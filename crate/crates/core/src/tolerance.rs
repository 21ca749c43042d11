//! Numerical tolerances shared by checks and tests.
//!
//! Each constant names the contract it enforces so that tests and runtime
//! validation compare against the same numbers.

/// Entrywise residual for unitarity and Hermiticity predicates.
pub const OPERATOR: f64 = 1e-10;

/// Minimum eigenvalue allowed for a matrix to count as positive semidefinite.
pub const POSITIVITY: f64 = 1e-10;

/// Positivity and trace-preservation slack for Choi operators.
pub const CHOI: f64 = 1e-9;

/// Slack on the trace-preservation constraints of covariant Choi parameters.
pub const TP_CONSTRAINT: f64 = 1e-9;

/// Normalization slack for probability distributions over the memory basis.
pub const DISTRIBUTION: f64 = 1e-10;

/// Imaginary-part threshold when testing reality in the Bell basis.
pub const BELL_REALITY: f64 = 1e-9;

/// Width of the Monte-Carlo acceptance band, in standard errors.
pub const MC_SIGMAS: f64 = 4.0;

/// Bisection tolerance on angles for regime thresholds.
pub const THRESHOLD_BISECTION: f64 = 1e-10;
