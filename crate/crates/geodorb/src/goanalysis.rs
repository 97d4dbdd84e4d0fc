//! Geodesic-orbit analysis.
//!
//! A homogeneous model is geodesic-orbit (g.o.) for an energy form when the
//! equilibrium system is solvable at *every* momentum. This module provides
//! the sampled verdict ([`go_test`]), canonical minimum-norm geodesic graphs
//! and graphs built from invariant functions, the momentum-space necessary
//! condition ([`co_condition_residual`]), and the natural-reductivity
//! diagnosis that looks for a linear, equivariant geodesic graph.
//!
//! All verdicts produced here are evidence-grade: finitely many samples can
//! refute a universal claim but never prove it, so positive verdicts carry
//! their sample counts and seeds for reproduction.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::equilibria::{default_tol, equilibrium_residual, solve_equilibria_at};
use crate::error::Error;
use crate::homspace::{EnergyForm, HomogeneousModel, InvariantPolynomial};
use crate::linalg;
use crate::sampling::SampleStream;
use crate::types::{AlgebraVector, CovectorAtOrigin};

/// Fixed disclaimer carried by sampled reports.
const EVIDENCE_NOTE: &str =
    "evidence-grade verdict: finite sampling cannot prove the universal claim";

/// Verdict of a sampled geodesic-orbit test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoVerdict {
    /// Every sample was solvable at tolerance.
    Go,
    /// Some sample was unsolvable even at ten times its tolerance.
    NotGo,
    /// The worst sample landed in the gray band between the two.
    Inconclusive,
}

/// Aggregated result of [`go_test`].
#[derive(Debug, Clone, Serialize)]
pub struct GoReport {
    /// Sampled verdict; see the field-level guarantees on [`GoVerdict`].
    pub verdict: GoVerdict,
    /// Total number of momenta examined (axes, axis pairs, random
    /// directions, and pinned points).
    pub samples_tested: usize,
    /// Worst-offending momentum when the verdict is not `go`.
    pub counterexample: Option<CovectorAtOrigin>,
    /// Largest least-squares residual seen across all samples.
    pub max_residual: f64,
    /// Seed that reproduces the random part of the sample list.
    pub seed: u64,
    /// Reminder that the verdict is sampling evidence, not a proof.
    pub note: &'static str,
}

/// Sampled geodesic-orbit test.
///
/// The sample list is deterministic given `seed`: every coordinate axis of
/// `m*`, every pairwise axis sum, `n_samples` unit-sphere Gaussian
/// directions, and finally the user-pinned momenta. Each sample is solved
/// with [`solve_equilibria_at`]; `tol` overrides the per-sample default
/// tolerance when given.
///
/// Verdicts: `go` when every sample is solvable at tolerance, `not_go` when
/// some sample stays unsolvable at ten times its tolerance (that sample is
/// reported as the counterexample), `inconclusive` in between.
pub fn go_test(
    model: &HomogeneousModel,
    form: &EnergyForm,
    n_samples: usize,
    seed: u64,
    tol: Option<f64>,
    pinned: &[CovectorAtOrigin],
) -> Result<GoReport, Error> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be at least 1"));
    }
    if let Some(t) = tol {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::invalid("tolerance must be positive and finite"));
        }
    }
    let d = model.dim_m();
    if form.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: form.dim(),
            context: "energy form on m*",
        });
    }

    let mut samples: Vec<CovectorAtOrigin> = Vec::new();
    for i in 0..d {
        samples.push(CovectorAtOrigin::basis(d, i));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = DVector::zeros(d);
            v[i] = 1.0;
            v[j] = 1.0;
            samples.push(CovectorAtOrigin(v));
        }
    }
    let mut stream = SampleStream::new(seed);
    for _ in 0..n_samples {
        samples.push(CovectorAtOrigin(stream.unit_direction(d)));
    }
    for p in pinned {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
                context: "pinned momentum",
            });
        }
        samples.push(p.clone());
    }

    let mut max_residual = 0.0_f64;
    let mut worst_ratio = 0.0_f64;
    let mut worst: Option<CovectorAtOrigin> = None;
    for p in &samples {
        let tol_p = tol.unwrap_or_else(|| default_tol(form, p));
        let set = solve_equilibria_at(model, form, p, tol_p)?;
        max_residual = max_residual.max(set.residual);
        let ratio = set.residual / tol_p;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst = Some(p.clone());
        }
    }

    let verdict = if worst_ratio > 10.0 {
        GoVerdict::NotGo
    } else if worst_ratio > 1.0 {
        GoVerdict::Inconclusive
    } else {
        GoVerdict::Go
    };
    Ok(GoReport {
        counterexample: if verdict == GoVerdict::Go { None } else { worst },
        verdict,
        samples_tested: samples.len(),
        max_residual,
        seed,
        note: EVIDENCE_NOTE,
    })
}

/// One point of a geodesic graph: the selected equilibrium vector at `p`.
#[derive(Debug, Clone, Serialize)]
pub struct GraphSample {
    /// Momentum the graph was evaluated at.
    pub p: CovectorAtOrigin,
    /// Selected equilibrium vector.
    pub xi: AlgebraVector,
    /// Norm of `xi` in the selection form `Q` (Euclidean by default).
    pub q_norm: f64,
    /// Nullspace rank of the affine set at `p`; 0 means the graph value was
    /// forced, not selected.
    pub uniqueness_rank: usize,
}

/// Canonical geodesic graph: the `Q`-minimal member of the affine solution
/// set at `p`.
///
/// `q` defaults to the identity form on the model basis, which is
/// `Ad(K)`-invariant whenever the basis is orthonormal for an invariant
/// inner product; pass an explicit symmetric positive-definite `Q` to use a
/// different invariant norm (its invariance can be checked separately with
/// [`crate::liealg::StructureTensor::infinitesimal_invariance_residual`]).
/// Unsolvable momenta produce [`Error::NoEquilibrium`].
pub fn min_norm_graph(
    model: &HomogeneousModel,
    form: &EnergyForm,
    p: &CovectorAtOrigin,
    q: Option<&DMatrix<f64>>,
    tol: Option<f64>,
) -> Result<GraphSample, Error> {
    let n = model.dim_g();
    if let Some(qm) = q {
        if qm.nrows() != n || qm.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: qm.nrows(),
                context: "selection form Q",
            });
        }
        if (qm - qm.transpose()).abs().max() > 1e-12 {
            return Err(Error::invalid("selection form Q must be symmetric"));
        }
        if qm.clone().cholesky().is_none() {
            return Err(Error::invalid(
                "selection form Q must be positive definite",
            ));
        }
    }
    let tol_eff = match tol {
        Some(t) if !t.is_finite() || t <= 0.0 => {
            return Err(Error::invalid("tolerance must be positive and finite"));
        }
        Some(t) => t,
        None => default_tol(form, p),
    };
    let set = solve_equilibria_at(model, form, p, tol_eff)?;
    if !set.solvable {
        return Err(Error::NoEquilibrium {
            residual: set.residual,
            tol: tol_eff,
        });
    }
    let xi = match (q, set.uniqueness_rank()) {
        // The particular solution is already the Euclidean-minimal member.
        (None, _) | (Some(_), 0) => set.particular.clone(),
        (Some(qm), _) => {
            let nmat = set.nullspace.matrix();
            let qn = qm * nmat;
            let gram = nmat.transpose() * &qn;
            let rhs = -(qn.transpose() * &set.particular.0);
            let chol = gram.cholesky().ok_or_else(|| {
                Error::InternalConsistency(
                    "selection Gram matrix on the nullspace lost definiteness".into(),
                )
            })?;
            AlgebraVector(&set.particular.0 + nmat * chol.solve(&rhs))
        }
    };
    let q_norm = match q {
        None => xi.norm(),
        Some(qm) => xi.0.dot(&(qm * &xi.0)).max(0.0).sqrt(),
    };
    Ok(GraphSample {
        p: p.clone(),
        xi,
        q_norm,
        uniqueness_rank: set.uniqueness_rank(),
    })
}

/// Geodesic graph induced by an `ad*`-invariant function: `xi = dh(f*(p))`.
///
/// The candidate is checked against the equilibrium system of the restricted
/// energy `h_o = h compose f*`; a failure beyond ten times the tolerance is
/// reported as [`Error::InternalConsistency`] and usually means `h` is not
/// actually invariant.
pub fn graph_from_invariant(
    model: &HomogeneousModel,
    h: &InvariantPolynomial,
    p: &CovectorAtOrigin,
    tol: Option<f64>,
) -> Result<GraphSample, Error> {
    let mu = model.f_star(p)?;
    if h.poly().nvars() != model.dim_g() {
        return Err(Error::DimensionMismatch {
            expected: model.dim_g(),
            got: h.poly().nvars(),
            context: "invariant polynomial variables",
        });
    }
    let xi = h.gradient(&mu.0);
    let h_o = h.restrict(model)?;
    let tol_eff = match tol {
        Some(t) if !t.is_finite() || t <= 0.0 => {
            return Err(Error::invalid("tolerance must be positive and finite"));
        }
        Some(t) => t,
        None => default_tol(&h_o, p),
    };
    let set = solve_equilibria_at(model, &h_o, p, tol_eff)?;
    let membership = equilibrium_residual(model, &h_o, p, &xi)?;
    if membership > 10.0 * tol_eff {
        return Err(Error::InternalConsistency(format!(
            "candidate from the invariant function violates the equilibrium \
             system at p (residual {membership:.3e}, allowed {:.3e}); the \
             function is likely not ad*-invariant",
            10.0 * tol_eff
        )));
    }
    let q_norm = xi.norm();
    Ok(GraphSample {
        p: p.clone(),
        xi,
        q_norm,
        uniqueness_rank: set.uniqueness_rank(),
    })
}

/// Momentum-space necessary condition for the g.o. property at one `p`.
///
/// With `mu = f*(p)`, the admissible directions are
/// `{coad(a) mu : a in g, k*-components of coad(a) mu vanish}`; their
/// `m*`-components span a subspace `W` of `m*`, and the condition demands
/// `dh_o(p)` be orthogonal to `W`. The return value is
/// `max |(dh_o(p) | w)|` over an orthonormal basis of `W` — zero whenever
/// the equilibrium system at `p` is solvable.
pub fn co_condition_residual(
    model: &HomogeneousModel,
    form: &EnergyForm,
    p: &CovectorAtOrigin,
) -> Result<f64, Error> {
    let n = model.dim_g();
    let d = model.dim_m();
    if form.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: form.dim(),
            context: "energy form on m*",
        });
    }
    let mu = model.f_star(p)?;
    // Column j is coad(e_j) mu, so C a = coad(a) mu.
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        cols.push(model.algebra().coad_matrix(&AlgebraVector::basis(n, j))? * &mu.0);
    }
    let cmat = DMatrix::from_columns(&cols);
    let k = model.k_indices();
    let v = if k.is_empty() {
        DMatrix::identity(n, n)
    } else {
        let krows = DMatrix::from_fn(k.len(), n, |r, c| cmat[(k[r], c)]);
        linalg::nullspace_basis(&krows, None)
    };
    if v.ncols() == 0 {
        return Ok(0.0);
    }
    let m = model.m_indices();
    let mrows = DMatrix::from_fn(m.len(), n, |r, c| cmat[(m[r], c)]);
    let w = linalg::orthonormal_column_span(&(mrows * v), None);
    let grad = form.gradient(p);
    let mut worst = 0.0_f64;
    for i in 0..w.ncols() {
        worst = worst.max(grad.0.dot(&w.column(i)).abs());
    }
    Ok(worst)
}

/// Verdict of [`natural_reductivity_analysis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NatRedVerdict {
    /// A linear equivariant geodesic graph fits all samples.
    NaturallyReductiveEvidence,
    /// The best linear candidate fails the equilibrium system on fresh
    /// samples by a wide margin.
    NotNaturallyReductive,
    /// Precondition failed or the measurements were in between.
    Inconclusive,
}

/// Result of the linear-graph diagnosis.
///
/// The measurement fields are `None` exactly when the analysis stopped at
/// the geodesic-orbit precondition.
#[derive(Debug, Clone, Serialize)]
pub struct NatRedReport {
    /// Overall verdict.
    pub verdict: NatRedVerdict,
    /// Fitted linear map `m* -> g`, as an `n x d` matrix.
    #[serde(serialize_with = "serialize_opt_matrix")]
    pub linear_candidate: Option<DMatrix<f64>>,
    /// Worst componentwise misfit of the linear map on the fit samples.
    pub fit_residual: Option<f64>,
    /// Worst violation of `xi(p+q) = xi(p) + xi(q)` by the canonical
    /// minimum-norm graph on fresh pairs.
    pub additivity_violation: Option<f64>,
    /// Worst violation of the intertwining identity
    /// `ad(a) L = L coad(a)|m*` over the isotropy basis.
    pub equivariance_violation: Option<f64>,
    /// Worst equilibrium-system residual of `L p` on fresh samples.
    pub max_fresh_membership_residual: Option<f64>,
    /// Fit samples that produced a usable graph value.
    pub fit_samples_used: usize,
    /// Fresh verification samples requested.
    pub verify_samples_used: usize,
    /// Seed behind the whole sample schedule.
    pub seed: u64,
    /// Reminder that the verdict is sampling evidence, not a proof.
    pub note: &'static str,
}

fn serialize_opt_matrix<S>(
    m: &Option<DMatrix<f64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    match m {
        None => s.serialize_none(),
        Some(mat) => {
            let rows: Vec<Vec<f64>> = (0..mat.nrows())
                .map(|i| mat.row(i).iter().copied().collect())
                .collect();
            s.serialize_some(&rows)
        }
    }
}

/// Diagnose natural reductivity by hunting for a linear geodesic graph.
///
/// The pipeline: verify the g.o. precondition on 200 seeded samples (else
/// the verdict is `inconclusive`); evaluate the canonical minimum-norm graph
/// on `n_fit` Gaussian momenta; least-squares fit a linear map
/// `L: m* -> g`; then, on `n_verify` fresh momenta, measure the equilibrium
/// residual of `L p`, the additivity defect of the canonical graph, and the
/// isotropy-intertwining defect of `L`.
///
/// Verdict `naturally_reductive_evidence` requires fit and equivariance
/// residuals below `tol` (default `1e-8`); `not_naturally_reductive` is
/// declared when a fresh membership residual exceeds `1e3 * tol`, i.e. the
/// best linear candidate demonstrably fails to be a geodesic graph.
pub fn natural_reductivity_analysis(
    model: &HomogeneousModel,
    form: &EnergyForm,
    n_fit: usize,
    n_verify: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<NatRedReport, Error> {
    let n = model.dim_g();
    let d = model.dim_m();
    if n_fit < d {
        return Err(Error::invalid(
            "n_fit must be at least dim m for a determined linear fit",
        ));
    }
    if n_verify == 0 {
        return Err(Error::invalid("n_verify must be at least 1"));
    }
    let tol_eff = match tol {
        Some(t) if !t.is_finite() || t <= 0.0 => {
            return Err(Error::invalid("tolerance must be positive and finite"));
        }
        Some(t) => t,
        None => 1e-8,
    };

    let inconclusive = |fit_used: usize| NatRedReport {
        verdict: NatRedVerdict::Inconclusive,
        linear_candidate: None,
        fit_residual: None,
        additivity_violation: None,
        equivariance_violation: None,
        max_fresh_membership_residual: None,
        fit_samples_used: fit_used,
        verify_samples_used: 0,
        seed,
        note: EVIDENCE_NOTE,
    };

    // Being g.o. is necessary for natural reductivity; without it the
    // min-norm graph is not even defined everywhere.
    let go = go_test(model, form, 200, seed, None, &[])?;
    if go.verdict != GoVerdict::Go {
        return Ok(inconclusive(0));
    }

    let try_graph = |p: &CovectorAtOrigin| -> Result<Option<AlgebraVector>, Error> {
        match min_norm_graph(model, form, p, None, None) {
            Ok(g) => Ok(Some(g.xi)),
            Err(Error::NoEquilibrium { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };

    // Fit phase.
    let mut stream = SampleStream::new(seed.wrapping_add(1));
    let mut ps: Vec<CovectorAtOrigin> = Vec::new();
    let mut xis: Vec<AlgebraVector> = Vec::new();
    for _ in 0..n_fit {
        let p = CovectorAtOrigin(stream.gaussian_vector(d));
        if let Some(xi) = try_graph(&p)? {
            xis.push(xi);
            ps.push(p);
        }
    }
    if ps.len() < d {
        return Ok(inconclusive(ps.len()));
    }

    // Least squares for L: stack P (samples x d) and solve P L^T = X
    // column by column.
    let pmat = DMatrix::from_fn(ps.len(), d, |i, c| ps[i][c]);
    let mut lt = DMatrix::zeros(d, n);
    for (col, mut lt_col) in lt.column_iter_mut().enumerate() {
        let b = DVector::from_fn(ps.len(), |i, _| xis[i][col]);
        let sol = linalg::min_norm_least_squares(&pmat, &b, None);
        lt_col.copy_from(&sol.x);
    }
    let l = lt.transpose();

    let mut fit_residual = 0.0_f64;
    for (p, xi) in ps.iter().zip(&xis) {
        fit_residual = fit_residual.max((&l * &p.0 - &xi.0).abs().max());
    }

    // Intertwining defect of L over the isotropy basis.
    let mut equivariance = 0.0_f64;
    for &ki in model.k_indices() {
        let a = AlgebraVector::basis(n, ki);
        let ad_a = model.algebra().ad_matrix(&a)?;
        let d_a = model.k_action_on_mstar(&a)?;
        equivariance = equivariance.max((&ad_a * &l - &l * &d_a).abs().max());
    }

    // Verification phase on fresh samples.
    let mut vstream = SampleStream::new(seed.wrapping_add(2));
    let mut membership = 0.0_f64;
    let mut additivity = 0.0_f64;
    for _ in 0..n_verify {
        let p = CovectorAtOrigin(vstream.gaussian_vector(d));
        let q = CovectorAtOrigin(vstream.gaussian_vector(d));
        let cand = AlgebraVector(&l * &p.0);
        membership = membership.max(equilibrium_residual(model, form, &p, &cand)?);
        if let (Some(gp), Some(gq), Some(gpq)) = (
            try_graph(&p)?,
            try_graph(&q)?,
            try_graph(&CovectorAtOrigin(&p.0 + &q.0))?,
        ) {
            additivity = additivity.max((&gpq.0 - &gp.0 - &gq.0).abs().max());
        }
    }

    let verdict = if membership > 1e3 * tol_eff {
        NatRedVerdict::NotNaturallyReductive
    } else if fit_residual < tol_eff && equivariance < tol_eff {
        NatRedVerdict::NaturallyReductiveEvidence
    } else {
        NatRedVerdict::Inconclusive
    };
    Ok(NatRedReport {
        verdict,
        linear_candidate: Some(l),
        fit_residual: Some(fit_residual),
        additivity_violation: Some(additivity),
        equivariance_violation: Some(equivariance),
        max_fresh_membership_residual: Some(membership),
        fit_samples_used: ps.len(),
        verify_samples_used: n_verify,
        seed,
        note: EVIDENCE_NOTE,
    })
}

/// First-order homogeneity check of the canonical graph:
/// `max over lambda of |min_norm_graph(lambda p) - lambda min_norm_graph(p)|`.
///
/// Riemannian energy forms give exactly homogeneous graphs away from
/// degenerate loci, so large deviations flag either a degenerate `p` or a
/// non-Riemannian form.
pub fn graph_homogeneity_check(
    model: &HomogeneousModel,
    form: &EnergyForm,
    p: &CovectorAtOrigin,
    lambdas: &[f64],
    tol: Option<f64>,
) -> Result<f64, Error> {
    let base = min_norm_graph(model, form, p, None, tol)?;
    let mut worst = 0.0_f64;
    for &lam in lambdas {
        if !lam.is_finite() {
            return Err(Error::invalid("scaling factors must be finite"));
        }
        let g = min_norm_graph(model, form, &CovectorAtOrigin(&p.0 * lam), None, tol)?;
        worst = worst.max((&g.xi.0 - &base.xi.0 * lam).abs().max());
    }
    Ok(worst)
}
