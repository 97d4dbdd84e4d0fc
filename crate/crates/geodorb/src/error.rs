//! Error type shared by every module of the crate.

use crate::types::{AlgebraVector, MomentumState};

/// All failure modes of the toolkit.
///
/// Recoverable outcomes that carry analytic meaning (an unsolvable momentum,
/// a `not_go` verdict) are *not* errors; they are encoded in the report types.
/// `Error` is reserved for inputs that violate preconditions and for numerical
/// processes that failed to produce a usable answer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent caller-supplied data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two objects that must live over the same space do not.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    /// A quadratic Lagrangian whose matrix is singular at the working
    /// tolerance; the Legendre transform is undefined.
    #[error("degenerate Lagrangian: smallest singular value {min_singular:.3e} below cutoff {cutoff:.3e}")]
    DegenerateLagrangian { min_singular: f64, cutoff: f64 },

    /// A geodesic graph was requested at a momentum where the equilibrium
    /// system has no solution.
    #[error("no relative equilibrium at the requested momentum (least-squares residual {residual:.3e} exceeds tolerance {tol:.3e})")]
    NoEquilibrium { residual: f64, tol: f64 },

    /// An iterative search exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations (best residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        /// Best iterate found; callers may inspect or resume from it.
        best: Box<AlgebraVector>,
    },

    /// The Lie-Poisson integrator produced a non-finite state.
    #[error("trajectory diverged at t = {t:.6}: non-finite state encountered")]
    Diverged {
        t: f64,
        /// Last state with all components finite.
        last_good: Box<MomentumState>,
    },

    /// An internal cross-check failed; indicates a bug or an inconsistent
    /// model rather than bad user data.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// Convenience constructor for [`Error::InvalidInput`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
