//! Numerical toolkit for geodesic orbit analysis on homogeneous spaces.
//!
//! A homogeneous space `G/K` is described here entirely by finite data: the
//! structure constants of the Lie algebra `g` of `G` in a basis aligned with a
//! reductive splitting `g = k + m`, together with an invariant energy form on
//! `m*` (a quadratic metric Hamiltonian or a higher-degree polynomial). From
//! that data the crate computes:
//!
//! * relative equilibrium vectors of the geodesic flow at a covector `p`,
//!   returned as an affine solution set (minimum-norm particular solution plus
//!   an orthonormal nullspace basis),
//! * sampling-based geodesic orbit verdicts (`go` / `not_go` / `inconclusive`)
//!   with stored counterexamples,
//! * geodesic graphs: the canonical minimum-norm graph, and graphs built from
//!   invariant polynomials on the dual `g*`,
//! * natural reductivity diagnostics via linear graph fitting, and
//! * reduced Lie-Poisson dynamics on `g*` with Casimir drift measurement.
//!
//! The compact example `SU(3)/SU(2)` with its one-parameter family of
//! invariant metrics ships as a built-in model ([`homspace::su3_su2`]) and is
//! used throughout the test suite as a closed-form reference.
//!
//! # Quick start
//!
//! ```
//! use geodorb::homspace::su3_su2;
//! use geodorb::equilibria::{default_tol, solve_equilibria_at};
//! use geodorb::types::CovectorAtOrigin;
//!
//! // SU(3)/SU(2) with metric parameters alpha = 1, beta = 2.
//! let (model, form) = su3_su2(1.0, 2.0).unwrap();
//! // Momentum covector p = E1 + Z in the orthonormal m*-basis (E1..E4, Z).
//! let p = CovectorAtOrigin::from(vec![1.0, 0.0, 0.0, 0.0, 1.0]);
//! let set = solve_equilibria_at(&model, &form, &p, default_tol(&form, &p)).unwrap();
//! assert!(set.solvable);
//! // The geodesic through p is the orbit of a one-parameter subgroup whose
//! // generator has a nonzero k-component (the space is not naturally
//! // reductive for alpha != beta).
//! assert!(set.particular[0].abs() > 1.0);
//! ```

pub mod equilibria;
pub mod error;
pub mod goanalysis;
pub mod homspace;
pub mod jsonio;
pub mod liealg;
pub mod liepoisson;
pub mod poly;
pub mod sampling;
pub mod types;

pub(crate) mod linalg;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
