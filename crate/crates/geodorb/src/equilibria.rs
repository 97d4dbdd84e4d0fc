//! Relative equilibrium vectors of the geodesic flow.
//!
//! On the Hamiltonian side, `a` in `g` generates the geodesic through the
//! origin with momentum `p` exactly when
//!
//! 1. velocity match: `f(a) = dH_o(p)` (`d` rows of a linear system), and
//! 2. stationarity: `(f*(p) | [a, b]) = 0` for every `b` in `g`
//!    (`n` more rows, one per basis direction).
//!
//! Both conditions are linear in `a`, so the solution set is affine: a
//! minimum-norm particular solution plus the nullspace
//! `{a : f(a) = 0 and coad(a) f*(p) = 0}`. This module builds and solves the
//! stacked `(d + n) x n` system with a rank-revealing SVD.
//!
//! On the Lagrangian side the single condition
//! `(dL_o(f(a)) | f([a, b])) = 0` for all `b` characterizes geodesic
//! generators; [`lagrangian_equilibrium_residual`] measures it and
//! [`orbit_extremum_search`] drives it to zero along an adjoint orbit.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::Error;
use crate::homspace::{EnergyForm, HomogeneousModel};
use crate::linalg;
use crate::types::{AlgebraVector, CovectorAtOrigin, SubspaceBasis};

/// Affine set of relative equilibrium vectors at one momentum.
#[derive(Debug, Clone, Serialize)]
pub struct AffineSolutionSet {
    /// Whether the stacked system is consistent at the tolerance used.
    pub solvable: bool,
    /// Minimum-norm least-squares solution (orthogonal to the nullspace).
    pub particular: AlgebraVector,
    /// Orthonormal basis of the homogeneous solution space.
    pub nullspace: SubspaceBasis,
    /// Euclidean least-squares residual of the stacked system.
    pub residual: f64,
}

impl AffineSolutionSet {
    /// Dimension of the nullspace: 0 means the equilibrium vector at this
    /// momentum is unique.
    pub fn uniqueness_rank(&self) -> usize {
        self.nullspace.rank()
    }

    /// The element `particular + nullspace * coeffs`.
    pub fn element(&self, coeffs: &DVector<f64>) -> AlgebraVector {
        AlgebraVector(&self.particular.0 + self.nullspace.matrix() * coeffs)
    }
}

/// Default solve tolerance at `(form, p)`:
/// `1e-9 * (1 + |p| + scale)`, where `scale` is the Frobenius norm of the
/// quadratic Hessian or the gradient norm at `p` for polynomial forms.
pub fn default_tol(form: &EnergyForm, p: &CovectorAtOrigin) -> f64 {
    let scale = match form {
        EnergyForm::Quadratic { s } => s.norm(),
        EnergyForm::Polynomial { .. } => form.gradient_at(&p.0).norm(),
    };
    1e-9 * (1.0 + p.norm() + scale)
}

/// Stacked `(d + n) x n` system whose solutions are the relative equilibrium
/// vectors at `p`: velocity-match rows on top, stationarity rows below.
pub(crate) fn build_system(
    model: &HomogeneousModel,
    form: &EnergyForm,
    p: &CovectorAtOrigin,
) -> Result<(DMatrix<f64>, DVector<f64>), Error> {
    let n = model.dim_g();
    let d = model.dim_m();
    if p.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.len(),
            context: "momentum covector",
        });
    }
    if form.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: form.dim(),
            context: "energy form on m*",
        });
    }

    let grad = form.gradient(p);
    let mu = model.f_star(p)?;

    let mut a = DMatrix::zeros(d + n, n);
    let mut b = DVector::zeros(d + n);
    // Velocity match: the m-components of the unknown equal dH_o(p).
    for (t, &mi) in model.m_indices().iter().enumerate() {
        a[(t, mi)] = 1.0;
        b[t] = grad[t];
    }
    // Stationarity: (f*(p) | [a, e_j]) = 0. Row j is coad(e_j) f*(p), since
    // (coad(e_j) mu | a) = (mu | [a, e_j]).
    for j in 0..n {
        let row = model
            .algebra()
            .coad_matrix(&AlgebraVector::basis(n, j))?
            * &mu.0;
        for k in 0..n {
            a[(d + j, k)] = row[k];
        }
    }
    Ok((a, b))
}

/// Largest componentwise violation of the equilibrium system by a candidate
/// vector: `max(|f(a) - dH_o(p)|, |(f*(p) | [a, e_j])|)` over all rows.
pub fn equilibrium_residual(
    model: &HomogeneousModel,
    form: &EnergyForm,
    p: &CovectorAtOrigin,
    a: &AlgebraVector,
) -> Result<f64, Error> {
    if a.len() != model.dim_g() {
        return Err(Error::DimensionMismatch {
            expected: model.dim_g(),
            got: a.len(),
            context: "candidate equilibrium vector",
        });
    }
    let (m, b) = build_system(model, form, p)?;
    Ok((m * &a.0 - b).abs().max())
}

/// Solve the equilibrium system at `(p, form)` and return the affine
/// solution set.
///
/// Consistency is decided by the least-squares residual: the system is
/// solvable exactly when `|A x - b| <= tol` at the minimum-norm solution,
/// which is the tolerance-aware version of the rank test
/// `rank(A) = rank([A | b])`. The nullspace basis comes from the singular
/// directions below the rank cutoff
/// `max(rows, cols) * machine_eps * sigma_max`.
pub fn solve_equilibria_at(
    model: &HomogeneousModel,
    form: &EnergyForm,
    p: &CovectorAtOrigin,
    tol: f64,
) -> Result<AffineSolutionSet, Error> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive and finite"));
    }
    let (a, b) = build_system(model, form, p)?;
    let sol = linalg::min_norm_least_squares(&a, &b, None);
    let nullspace = SubspaceBasis::from_orthonormal_columns(sol.nullspace)
        .expect("SVD right-singular vectors are orthonormal");
    Ok(AffineSolutionSet {
        solvable: sol.residual <= tol,
        particular: AlgebraVector(sol.x),
        nullspace,
        residual: sol.residual,
    })
}

/// Residual of the Lagrangian geodesic condition for a candidate generator:
/// `max_j |(dL_o(f(a)) | f([a, e_j]))|`.
///
/// Zero means the one-parameter subgroup of `a` projects to a geodesic of
/// the Lagrangian energy `L_o`.
pub fn lagrangian_equilibrium_residual(
    model: &HomogeneousModel,
    form_l: &EnergyForm,
    a: &AlgebraVector,
) -> Result<f64, Error> {
    let n = model.dim_g();
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.len(),
            context: "candidate generator",
        });
    }
    let v = model.f_apply(a)?;
    let g = form_l.gradient_at(&v.0);
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let br = model.algebra().bracket(a, &AlgebraVector::basis(n, j))?;
        let w = model.f_apply(&br)?;
        worst = worst.max(g.dot(&w.0).abs());
    }
    Ok(worst)
}

/// Legendre transform of a regular quadratic energy form: the dual form with
/// inverted Hessian. Applying it twice returns the original form; it maps
/// Lagrangians on `m` to Hamiltonians on `m*` and back.
///
/// Polynomial forms have no closed-form Legendre dual here and are rejected;
/// singular Hessians produce [`Error::DegenerateLagrangian`].
pub fn legendre_to_hamiltonian(form_l: &EnergyForm) -> Result<EnergyForm, Error> {
    match form_l {
        EnergyForm::Quadratic { s } => {
            let inv = linalg::symmetric_inverse(s)?;
            EnergyForm::quadratic(inv)
        }
        EnergyForm::Polynomial { .. } => Err(Error::invalid(
            "Legendre transform is only available for quadratic forms",
        )),
    }
}

/// Outcome of [`orbit_extremum_search`].
#[derive(Debug, Clone, Serialize)]
pub struct OrbitSearchResult {
    /// Converged generator.
    pub point: AlgebraVector,
    /// Final Lagrangian equilibrium residual.
    pub residual: f64,
    /// Iterations consumed.
    pub iterations: usize,
}

/// Find a geodesic generator on the adjoint orbit of `a0` by extremizing the
/// restricted energy `phi(a) = L_o(f(a))` along the orbit.
///
/// Moves stay exactly on the orbit: each iteration applies
/// `a <- exp(eps ad(b)) a` with generator `b = -ad(a)^T grad phi`, which is
/// the steepest-ascent direction in the orbit's tangent space (ascent, not
/// descent: for definite forms descent collapses onto trivial generators in
/// `k`). The step is halved on non-increase and grown gently on success, so
/// on compact orbits — where `phi` is bounded — the iteration settles into a
/// critical point. Convergence is declared when
/// [`lagrangian_equilibrium_residual`] drops below `tol`; exhausting
/// `max_iter` returns [`Error::NoConvergence`] carrying the best iterate.
///
/// Critical points of `phi` restricted to the orbit are exactly the zeros of
/// the residual, so any converged point is a geodesic generator; a stationary
/// `a0` (for example `a0` in `k`, or any point of an abelian algebra) returns
/// immediately.
pub fn orbit_extremum_search(
    model: &HomogeneousModel,
    form_l: &EnergyForm,
    a0: &AlgebraVector,
    max_iter: usize,
    step: f64,
    tol: f64,
) -> Result<OrbitSearchResult, Error> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::invalid("step must be positive and finite"));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive and finite"));
    }
    let n = model.dim_g();
    if a0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a0.len(),
            context: "orbit search start",
        });
    }

    let phi = |a: &AlgebraVector| -> Result<f64, Error> {
        Ok(form_l.value_at(&model.f_apply(a)?.0))
    };

    let mut a = a0.clone();
    let mut eps = step;
    let mut best = a.clone();
    let mut best_residual = f64::INFINITY;

    for iter in 0..max_iter {
        // w_j = (dL_o(f(a)) | f([a, e_j])): simultaneously the residual
        // vector and the negative of the ascent generator.
        let g = form_l.gradient_at(&model.f_apply(&a)?.0);
        let grad_phi = model.f_star(&CovectorAtOrigin(g))?;
        let ad_a = model.algebra().ad_matrix(&a)?;
        let w = ad_a.transpose() * &grad_phi.0;
        let r = w.abs().max();
        if r < best_residual {
            best_residual = r;
            best = a.clone();
        }
        if r <= tol {
            return Ok(OrbitSearchResult {
                point: a,
                residual: r,
                iterations: iter,
            });
        }

        // First-order move is d/d eps [exp(eps ad(b)) a] = ad(a) ad(a)^T
        // grad phi, the tangent-space projection of the gradient.
        let ad_b = model.algebra().ad_matrix(&AlgebraVector(-&w))?;
        let dn = (&ad_b * &a.0).norm();
        if dn == 0.0 {
            // The gradient is orthogonal to the orbit yet the residual is
            // not below tol: no further progress is possible on this orbit.
            break;
        }

        // Backtracking ascent step on phi along the orbit.
        let phi_a = phi(&a)?;
        let mut advanced = false;
        while eps * dn > 1e-18 {
            let trial = AlgebraVector((&ad_b * eps).exp() * &a.0);
            if phi(&trial)? > phi_a {
                a = trial;
                eps = (eps * 1.25).min(step * 100.0);
                advanced = true;
                break;
            }
            eps *= 0.5;
        }
        if !advanced {
            break;
        }
    }

    let final_r = lagrangian_equilibrium_residual(model, form_l, &a)?;
    if final_r <= tol {
        return Ok(OrbitSearchResult {
            point: a,
            residual: final_r,
            iterations: max_iter,
        });
    }
    if final_r < best_residual {
        best_residual = final_r;
        best = a;
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: best_residual,
        best: Box::new(best),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homspace::su3_su2;
    use crate::sampling::SampleStream;

    fn p_from(v: &[f64]) -> CovectorAtOrigin {
        CovectorAtOrigin::from(v.to_vec())
    }

    #[test]
    fn degenerate_momentum_zz_has_isotropy_nullspace() {
        // At p = z Z every 2 beta z Z + k (k in the isotropy algebra) is an
        // equilibrium vector; the minimum-norm particular is 4 Z for
        // alpha = 1, beta = 2, z = 1.
        let (model, form) = su3_su2(1.0, 2.0).unwrap();
        let p = p_from(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        let set = solve_equilibria_at(&model, &form, &p, default_tol(&form, &p)).unwrap();
        assert!(set.solvable);
        assert_eq!(set.uniqueness_rank(), 3);
        let want = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0];
        for (got, want) in set.particular.iter().zip(&want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let k = SubspaceBasis::coordinate_subspace(8, &[0, 1, 2]);
        assert!(set.nullspace.principal_angle_to(&k) < 1e-10);
    }

    #[test]
    fn generic_momentum_has_unique_solution() {
        let (model, form) = su3_su2(1.0, 2.0).unwrap();
        let p = p_from(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        let set = solve_equilibria_at(&model, &form, &p, default_tol(&form, &p)).unwrap();
        assert!(set.solvable);
        assert_eq!(set.uniqueness_rank(), 0);
        // xi = 2 E1 + 4 Z + 2 sqrt(3) A'.
        let s3 = 3.0_f64.sqrt();
        let want = [2.0 * s3, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 4.0];
        for (got, want) in set.particular.iter().zip(&want) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn every_affine_element_resolves_the_system() {
        let (model, form) = su3_su2(1.0, 2.0).unwrap();
        let mut stream = SampleStream::new(4);
        let p = p_from(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        let tol = default_tol(&form, &p);
        let set = solve_equilibria_at(&model, &form, &p, tol).unwrap();
        for _ in 0..10 {
            let coeffs = stream.gaussian_vector(set.uniqueness_rank());
            let a = set.element(&coeffs);
            let r = equilibrium_residual(&model, &form, &p, &a).unwrap();
            assert!(r <= 10.0 * tol, "residual {r} vs tol {tol}");
        }
    }

    #[test]
    fn broken_form_is_unsolvable_at_a_mixed_axis_pair() {
        // e1^2 + 2 e2^2 + e3^2 + e4^2 + z^2 at p = E1* + E2*: the b = Z
        // stationarity row is forced to 2 regardless of the free k-part.
        let (model, _) = su3_su2(1.0, 1.0).unwrap();
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 4.0, 2.0, 2.0, 2.0]));
        let broken = EnergyForm::quadratic(s).unwrap();
        let p = p_from(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let tol = default_tol(&broken, &p);
        let set = solve_equilibria_at(&model, &broken, &p, tol).unwrap();
        assert!(!set.solvable);
        assert!(set.residual > 0.1, "residual {}", set.residual);
    }

    #[test]
    fn solution_scales_linearly_with_momentum() {
        // For quadratic forms the equilibrium set at lambda p is lambda times
        // the set at p.
        let (model, form) = su3_su2(1.3, 0.6).unwrap();
        let mut stream = SampleStream::new(8);
        for _ in 0..10 {
            let p = CovectorAtOrigin(stream.gaussian_vector(5));
            let tol = default_tol(&form, &p);
            let set = solve_equilibria_at(&model, &form, &p, tol).unwrap();
            assert!(set.solvable);
            for lambda in [-1.0, 0.5, 3.0] {
                let lp = CovectorAtOrigin(&p.0 * lambda);
                let la = AlgebraVector(&set.particular.0 * lambda);
                let r = equilibrium_residual(&model, &form, &lp, &la).unwrap();
                assert!(r <= 10.0 * default_tol(&form, &lp), "lambda {lambda}: {r}");
            }
        }
    }

    #[test]
    fn lagrangian_residual_vanishes_on_m_for_the_round_metric()
    {
        // alpha = beta: every m-vector generates a geodesic.
        let (model, form) = su3_su2(1.0, 1.0).unwrap();
        let mut stream = SampleStream::new(6);
        for _ in 0..20 {
            let mut a = DVector::zeros(8);
            for &mi in model.m_indices() {
                a[mi] = stream.standard_normal();
            }
            let r = lagrangian_equilibrium_residual(&model, &form, &AlgebraVector(a)).unwrap();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn lagrangian_residual_flags_non_equilibrium() {
        let (model, form) = su3_su2(1.0, 2.0).unwrap();
        let a = AlgebraVector::from(vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let r = lagrangian_equilibrium_residual(&model, &form, &a).unwrap();
        assert!(r > 0.1, "residual {r}");
    }

    #[test]
    fn legendre_round_trip_and_degeneracy() {
        let (_, form) = su3_su2(1.0, 2.0).unwrap();
        let dual = legendre_to_hamiltonian(&form).unwrap();
        let back = legendre_to_hamiltonian(&dual).unwrap();
        let s0 = form.quadratic_matrix().unwrap();
        let s2 = back.quadratic_matrix().unwrap();
        assert!((s0 - s2).abs().max() < 1e-10);

        let singular = EnergyForm::quadratic(DMatrix::from_diagonal(
            &DVector::from_vec(vec![1.0, 0.0]),
        ))
        .unwrap();
        assert!(matches!(
            legendre_to_hamiltonian(&singular),
            Err(Error::DegenerateLagrangian { .. })
        ));
    }

    #[test]
    fn orbit_search_returns_stationary_start_immediately() {
        let (model, form) = su3_su2(1.0, 2.0).unwrap();
        // a0 in k: f(a0) = 0, so the residual vanishes identically.
        let a0 = AlgebraVector::from(vec![1.0, -0.5, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let res = orbit_extremum_search(&model, &form, &a0, 100, 0.05, 1e-9).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.point.as_slice(), a0.as_slice());
    }

    #[test]
    fn orbit_search_on_abelian_algebra_is_trivial() {
        let st = crate::liealg::StructureTensor::abelian(4);
        let model = HomogeneousModel::new(st, vec![], vec![0, 1, 2, 3]).unwrap();
        let form = EnergyForm::quadratic(DMatrix::identity(4, 4)).unwrap();
        let a0 = AlgebraVector::from(vec![1.0, 2.0, 3.0, 4.0]);
        let res = orbit_extremum_search(&model, &form, &a0, 10, 0.1, 1e-12).unwrap();
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn orbit_search_finds_generator_from_e1_plus_z() {
        let (model, form) = su3_su2(1.0, 2.0).unwrap();
        let a0 = AlgebraVector::from(vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let res = orbit_extremum_search(&model, &form, &a0, 10_000, 0.05, 1e-6).unwrap();
        assert!(res.residual < 1e-6);
        // Cross-check: the converged generator is a member of the affine set
        // at its own Legendre momentum p = dL_o(f(a)).
        let v = model.f_apply(&res.point).unwrap();
        let p = CovectorAtOrigin(form.gradient_at(&v.0));
        let ham = legendre_to_hamiltonian(&form).unwrap();
        let r = equilibrium_residual(&model, &ham, &p, &res.point).unwrap();
        assert!(r < 1e-5, "membership residual {r}");
    }
}
