//! Reduced dynamics on the dual of the Lie algebra.
//!
//! For a Hamiltonian `h` on `g*` the reduced equation of motion is, in the
//! sign convention used throughout this crate,
//!
//! ```text
//! d/dt (mu | x) = (mu | [dh(mu), x])      for all x in g,
//! ```
//!
//! which in coordinates reads `mu' = ad_matrix(dh(mu))^T mu`. Stationary
//! points of this field at *every* momentum characterize the `ad*`-invariant
//! Hamiltonians, and invariant functions (Casimirs) are conserved along any
//! trajectory — two facts the diagnostics here measure numerically.
//!
//! Integration is plain fixed-step RK4 on purpose: Casimir drift is itself
//! a reported diagnostic, and a structure-preserving integrator would hide
//! it.

use nalgebra::DVector;

use crate::error::Error;
use crate::homspace::InvariantPolynomial;
use crate::liealg::StructureTensor;
use crate::poly::Polynomial;
use crate::types::{AlgebraVector, MomentumState};

/// Right-hand side of the reduced equation: `ad_matrix(dh(mu))^T mu`.
///
/// `h` may be any polynomial on `g*`; for `ad*`-invariant `h` the field
/// vanishes identically.
pub fn lp_vector_field(
    st: &StructureTensor,
    h: &Polynomial,
    mu: &AlgebraVector,
) -> Result<AlgebraVector, Error> {
    let n = st.dim();
    if h.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.nvars(),
            context: "Hamiltonian variables",
        });
    }
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: mu.len(),
            context: "momentum",
        });
    }
    let dh = AlgebraVector(DVector::from_vec(h.gradient(mu.as_slice())));
    let ad = st.ad_matrix(&dh)?;
    Ok(AlgebraVector(ad.transpose() * &mu.0))
}

/// Integrate the reduced equation with fixed-step RK4.
///
/// The trajectory has `ceil(t_end/dt) + 1` states, starting at `t = 0` and
/// ending exactly at `t = t_end` (the final step is clamped). A non-finite
/// state aborts the run with [`Error::Diverged`] carrying the last good
/// state.
pub fn lp_integrate(
    st: &StructureTensor,
    h: &Polynomial,
    mu0: &AlgebraVector,
    dt: f64,
    t_end: f64,
) -> Result<Vec<MomentumState>, Error> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::invalid("dt must be positive and finite"));
    }
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::invalid("t_end must be positive and finite"));
    }
    if mu0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial momentum must be finite"));
    }

    let field = |mu: &DVector<f64>| -> Result<DVector<f64>, Error> {
        Ok(lp_vector_field(st, h, &AlgebraVector(mu.clone()))?.0)
    };

    let n_steps = (t_end / dt).ceil().max(1.0) as usize;
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(MomentumState {
        t: 0.0,
        mu: mu0.clone(),
    });

    let mut mu = mu0.0.clone();
    let mut t = 0.0;
    for i in 1..=n_steps {
        let t_next = if i == n_steps {
            t_end
        } else {
            (i as f64 * dt).min(t_end)
        };
        let h_step = t_next - t;
        if h_step > 0.0 {
            let k1 = field(&mu)?;
            let k2 = field(&(&mu + (h_step / 2.0) * &k1))?;
            let k3 = field(&(&mu + (h_step / 2.0) * &k2))?;
            let k4 = field(&(&mu + h_step * &k3))?;
            mu += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if mu.iter().any(|v| !v.is_finite()) {
            let last_good = states
                .last()
                .cloned()
                .expect("trajectory starts with the initial state");
            return Err(Error::Diverged {
                t: t_next,
                last_good: Box::new(last_good),
            });
        }
        t = t_next;
        states.push(MomentumState {
            t,
            mu: AlgebraVector(mu.clone()),
        });
    }
    Ok(states)
}

/// Per-Casimir maximal relative drift along a trajectory:
/// `max_t |C(mu(t)) - C(mu(0))| / max(1, |C(mu(0))|)`.
pub fn casimir_drift(
    trajectory: &[MomentumState],
    casimirs: &[InvariantPolynomial],
) -> Vec<f64> {
    let Some(first) = trajectory.first() else {
        return vec![0.0; casimirs.len()];
    };
    casimirs
        .iter()
        .map(|c| {
            let c0 = c.value(&first.mu.0);
            let scale = c0.abs().max(1.0);
            trajectory
                .iter()
                .map(|s| (c.value(&s.mu.0) - c0).abs() / scale)
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Relative drift of the Hamiltonian itself along a trajectory (RK4 on an
/// autonomous field conserves it to the order of the scheme).
pub fn energy_drift(trajectory: &[MomentumState], h: &Polynomial) -> f64 {
    let Some(first) = trajectory.first() else {
        return 0.0;
    };
    let h0 = h.value(first.mu.as_slice());
    let scale = h0.abs().max(1.0);
    trajectory
        .iter()
        .map(|s| (h.value(s.mu.as_slice()) - h0).abs() / scale)
        .fold(0.0, f64::max)
}

/// Render a trajectory as CSV with header `t,mu_0,...,mu_{n-1}` and
/// round-trip-exact decimal values.
pub fn trajectory_csv(trajectory: &[MomentumState]) -> String {
    let n = trajectory.first().map_or(0, |s| s.mu.len());
    let mut out = String::from("t");
    for i in 0..n {
        out.push_str(&format!(",mu_{i}"));
    }
    out.push('\n');
    for s in trajectory {
        out.push_str(&format!("{}", s.t));
        for v in s.mu.iter() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}
