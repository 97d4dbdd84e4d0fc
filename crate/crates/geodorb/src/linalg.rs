//! Internal rank-revealing linear algebra built on `nalgebra`'s SVD.
//!
//! Rank decisions throughout the crate use the cutoff
//! `max(rows, cols) * machine_eps * sigma_max`, overridable per call.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;

/// Default singular-value cutoff for rank decisions.
pub(crate) fn rank_cutoff(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Result of a rank-revealing minimum-norm least-squares solve.
pub(crate) struct MinNormSolution {
    /// Minimum-norm least-squares solution (orthogonal to the nullspace).
    pub x: DVector<f64>,
    /// Orthonormal basis of the nullspace of `A`, as matrix columns.
    pub nullspace: DMatrix<f64>,
    /// Euclidean residual `|A x - b|`.
    pub residual: f64,
}

/// Solve `A x = b` in the minimum-norm least-squares sense and extract an
/// orthonormal nullspace basis, all from one SVD.
///
/// `cutoff` overrides the default rank cutoff when given.
pub(crate) fn min_norm_least_squares(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    cutoff: Option<f64>,
) -> MinNormSolution {
    let (rows, cols) = a.shape();
    // Pad with zero rows when the system is wide so the thin SVD still
    // carries a complete set of right-singular vectors.
    let padded;
    let work = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded = p;
        &padded
    } else {
        a
    };
    let b_padded;
    let rhs = if rows < cols {
        let mut p = DVector::zeros(cols);
        p.rows_mut(0, rows).copy_from(b);
        b_padded = p;
        &b_padded
    } else {
        b
    };

    let svd = work.clone().svd(true, true);
    let u = svd.u.as_ref().expect("SVD with u requested");
    let v_t = svd.v_t.as_ref().expect("SVD with v_t requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let tau = cutoff.unwrap_or_else(|| rank_cutoff(rows, cols, sigma_max));

    let mut x = DVector::zeros(cols);
    let mut null_cols: Vec<DVector<f64>> = Vec::new();
    for i in 0..sigma.len() {
        if sigma[i] > tau {
            let coeff = u.column(i).dot(rhs) / sigma[i];
            x.axpy(coeff, &v_t.row(i).transpose(), 1.0);
        } else {
            null_cols.push(v_t.row(i).transpose());
        }
    }
    let nullspace = if null_cols.is_empty() {
        DMatrix::zeros(cols, 0)
    } else {
        DMatrix::from_columns(&null_cols)
    };
    let residual = (a * &x - b).norm();
    MinNormSolution {
        x,
        nullspace,
        residual,
    }
}

/// Orthonormal basis of the column space of `m`, via SVD.
pub(crate) fn orthonormal_column_span(m: &DMatrix<f64>, cutoff: Option<f64>) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("SVD with u requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let tau = cutoff.unwrap_or_else(|| rank_cutoff(rows, cols, sigma_max));
    let keep: Vec<DVector<f64>> = (0..sigma.len())
        .filter(|&i| sigma[i] > tau)
        .map(|i| u.column(i).into_owned())
        .collect();
    if keep.is_empty() {
        DMatrix::zeros(rows, 0)
    } else {
        DMatrix::from_columns(&keep)
    }
}

/// Orthonormal basis of the nullspace of `m`, via SVD.
pub(crate) fn nullspace_basis(m: &DMatrix<f64>, cutoff: Option<f64>) -> DMatrix<f64> {
    let zero = DVector::zeros(m.nrows());
    min_norm_least_squares(m, &zero, cutoff).nullspace
}

/// Inverse of a symmetric matrix through its eigendecomposition, with the
/// result symmetrized exactly.
///
/// Fails when the smallest eigenvalue magnitude falls below
/// `dim * machine_eps * max |eigenvalue|`.
pub(crate) fn symmetric_inverse(s: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    let n = s.nrows();
    let eig = s.clone().symmetric_eigen();
    let max_abs = eig.eigenvalues.iter().fold(0.0_f64, |m, &l| m.max(l.abs()));
    let cutoff = n as f64 * f64::EPSILON * max_abs;
    let min_abs = eig
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, &l| m.min(l.abs()));
    if min_abs <= cutoff || max_abs == 0.0 {
        return Err(Error::DegenerateLagrangian {
            min_singular: min_abs,
            cutoff,
        });
    }
    let q = &eig.eigenvectors;
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l));
    let inv = q * inv_diag * q.transpose();
    // Symmetrize so downstream exact-symmetry checks hold.
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = inv[(i, i)];
        for j in 0..i {
            let v = 0.5 * (inv[(i, j)] + inv[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}
