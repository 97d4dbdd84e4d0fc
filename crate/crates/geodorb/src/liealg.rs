//! Lie algebras as structure-constant tensors, with bracket evaluation,
//! adjoint/coadjoint matrices, Jacobi diagnostics, derived series, and
//! invariance residuals.
//!
//! Convention: the tensor entry `c(i, j, k)` is the `e_k`-coefficient of
//! `[e_i, e_j]`, so `[e_i, e_j] = sum_k c(i, j, k) e_k`. Antisymmetry in
//! `(i, j)` holds exactly by construction; the Jacobi identity is a numerical
//! property reported by [`StructureTensor::jacobi_residual`].

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::types::{AlgebraVector, SubspaceBasis};

/// Default tolerance for accepting a user-supplied tensor as a Lie algebra.
pub const JACOBI_TOL: f64 = 1e-10;

/// Structure constants of a finite-dimensional real Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensor {
    dim: usize,
    labels: Vec<String>,
    /// Flat `n^3` array indexed `[i*n*n + j*n + k]`.
    c: Vec<f64>,
}

impl StructureTensor {
    /// Build a tensor from bracket triplets `(i, j, k, value)` meaning
    /// "`[e_i, e_j]` has `e_k`-coefficient `value`".
    ///
    /// The antisymmetric closure is applied automatically, so only `i < j`
    /// entries are required; supplying both orientations is allowed when they
    /// are consistent. Conflicting duplicates and diagonal entries
    /// (`i == j` with a nonzero value) are rejected.
    ///
    /// The Jacobi identity is *not* enforced here — query
    /// [`jacobi_residual`](Self::jacobi_residual) or call
    /// [`validate`](Self::validate) to check it.
    pub fn from_brackets(
        dim: usize,
        labels: Option<Vec<String>>,
        triplets: &[(usize, usize, usize, f64)],
    ) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::invalid("algebra dimension must be at least 1"));
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != dim {
                    return Err(Error::invalid(format!(
                        "{} basis labels supplied for dimension {dim}",
                        l.len()
                    )));
                }
                l
            }
            None => (0..dim).map(|i| format!("e{i}")).collect(),
        };
        let mut c = vec![0.0; dim * dim * dim];
        let mut set = vec![false; dim * dim * dim];
        for &(i, j, k, v) in triplets {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::invalid(format!(
                    "bracket index ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::invalid(format!(
                    "non-finite bracket value at ({i}, {j}, {k})"
                )));
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::invalid(format!(
                        "[e_{i}, e_{i}] must vanish; got coefficient {v}"
                    )));
                }
                continue;
            }
            let fwd = i * dim * dim + j * dim + k;
            let bwd = j * dim * dim + i * dim + k;
            if set[fwd] && c[fwd] != v {
                return Err(Error::invalid(format!(
                    "conflicting bracket entries for ({i}, {j}, {k}): {} vs {v}",
                    c[fwd]
                )));
            }
            c[fwd] = v;
            c[bwd] = -v;
            set[fwd] = true;
            set[bwd] = true;
        }
        Ok(Self { dim, labels, c })
    }

    /// Abelian algebra of the given dimension (all brackets zero).
    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets(dim, None, &[]).expect("abelian construction cannot fail")
    }

    /// Three-dimensional Heisenberg algebra: `[X, Y] = Z`.
    pub fn heisenberg3() -> Self {
        Self::from_brackets(
            3,
            Some(vec!["X".into(), "Y".into(), "Z".into()]),
            &[(0, 1, 2, 1.0)],
        )
        .expect("heisenberg construction cannot fail")
    }

    /// `su(3)` in the orthonormal basis `A', B', C', E1, E2, E3, E4, Z`,
    /// where `A' = A/sqrt(3)` (similarly `B'`, `C'`) rescales the `su(2)`
    /// block so the negative of the Killing-type form becomes the identity.
    ///
    /// The first three vectors span the isotropy subalgebra `k ~ su(2)` of
    /// the built-in `SU(3)/SU(2)` model; `E1..E4, Z` span its reductive
    /// complement `m`.
    pub fn su3() -> Self {
        let s = 3.0_f64.sqrt();
        let labels = vec![
            "A'".into(),
            "B'".into(),
            "C'".into(),
            "E1".into(),
            "E2".into(),
            "E3".into(),
            "E4".into(),
            "Z".into(),
        ];
        #[rustfmt::skip]
        let triplets = [
            // su(2) block: [A', B'] = (2/sqrt(3)) C' and cyclic.
            (0, 1, 2,  2.0 / s),
            (1, 2, 0,  2.0 / s),
            (0, 2, 1, -2.0 / s),
            // A' on the E-block.
            (0, 3, 4, -1.0 / s),
            (0, 4, 3,  1.0 / s),
            (0, 5, 6,  1.0 / s),
            (0, 6, 5, -1.0 / s),
            // B' on the E-block.
            (1, 3, 5,  1.0 / s),
            (1, 4, 6,  1.0 / s),
            (1, 5, 3, -1.0 / s),
            (1, 6, 4, -1.0 / s),
            // C' on the E-block.
            (2, 3, 6,  1.0 / s),
            (2, 4, 5, -1.0 / s),
            (2, 5, 4,  1.0 / s),
            (2, 6, 3, -1.0 / s),
            // Z on the E-block ([E_i, Z] orientation).
            (3, 7, 4, -1.0),
            (4, 7, 3,  1.0),
            (5, 7, 6, -1.0),
            (6, 7, 5,  1.0),
            // E-block brackets back into k + z.
            (3, 4, 7,  1.0),
            (3, 4, 0, -1.0 / s),
            (3, 5, 1,  1.0 / s),
            (3, 6, 2,  1.0 / s),
            (4, 5, 2, -1.0 / s),
            (4, 6, 1,  1.0 / s),
            (5, 6, 7,  1.0),
            (5, 6, 0,  1.0 / s),
        ];
        Self::from_brackets(8, Some(labels), &triplets).expect("su3 table is consistent")
    }

    /// Algebra dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis labels, used in reports and emitted model files.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Structure constant `c(i, j, k)`: the `e_k`-coefficient of `[e_i, e_j]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i * self.dim * self.dim + j * self.dim + k]
    }

    /// Nonzero bracket entries with `i < j`, sorted lexicographically.
    /// Together with the antisymmetric closure they reproduce the tensor.
    pub fn bracket_triplets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = self.constant(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    fn check_dim(&self, v: &DVector<f64>, context: &'static str) -> Result<(), Error> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
                context,
            });
        }
        Ok(())
    }

    /// Lie bracket `[x, y]`, bilinear in both arguments.
    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector, Error> {
        self.check_dim(x, "bracket left argument")?;
        self.check_dim(y, "bracket right argument")?;
        let n = self.dim;
        let mut z = DVector::zeros(n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let yj = y[j];
                if yj == 0.0 {
                    continue;
                }
                let w = xi * yj;
                let base = i * n * n + j * n;
                for k in 0..n {
                    z[k] += w * self.c[base + k];
                }
            }
        }
        Ok(AlgebraVector(z))
    }

    /// Matrix of `ad(x) = [x, .]`; column `j` is `bracket(x, e_j)`.
    pub fn ad_matrix(&self, x: &AlgebraVector) -> Result<DMatrix<f64>, Error> {
        self.check_dim(x, "ad argument")?;
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let base = i * n * n + j * n;
                for k in 0..n {
                    m[(k, j)] += xi * self.c[base + k];
                }
            }
        }
        Ok(m)
    }

    /// Matrix of the coadjoint action `ad*(x) = -ad(x)^T`, satisfying the
    /// pairing identity `(coad(x) mu | y) = -(mu | [x, y])` exactly.
    pub fn coad_matrix(&self, x: &AlgebraVector) -> Result<DMatrix<f64>, Error> {
        Ok(-self.ad_matrix(x)?.transpose())
    }

    /// Largest violation of antisymmetry, `max |c(i,j,k) + c(j,i,k)|`.
    /// Always exactly zero for tensors built through this API; exposed so
    /// validation reports can state it.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    r = r.max((self.constant(i, j, k) + self.constant(j, i, k)).abs());
                }
            }
        }
        r
    }

    /// Largest violation of the Jacobi identity over basis triples:
    /// `max |[[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]|`
    /// measured componentwise.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        // The Jacobi expression is alternating in (i, j, k), so sorted
        // triples suffice.
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for l in 0..n {
                        let mut sum = 0.0;
                        for m in 0..n {
                            sum += self.constant(i, j, m) * self.constant(m, k, l)
                                + self.constant(j, k, m) * self.constant(m, i, l)
                                + self.constant(k, i, m) * self.constant(m, j, l);
                        }
                        worst = worst.max(sum.abs());
                    }
                }
            }
        }
        worst
    }

    /// Accept or reject the tensor as a Lie algebra at tolerance `tol`
    /// (default [`JACOBI_TOL`] when `None`).
    pub fn validate(&self, tol: Option<f64>) -> Result<(), Error> {
        let tol = tol.unwrap_or(JACOBI_TOL);
        let r = self.jacobi_residual();
        if r > tol {
            return Err(Error::invalid(format!(
                "jacobi_residual {r:.6e} exceeds tolerance {tol:.1e}"
            )));
        }
        Ok(())
    }

    /// Derived series `g >= [g, g] >= [[g, g], [g, g]] >= ...` as orthonormal
    /// subspace bases. The series ends with the zero subspace (solvable case)
    /// or with the first repeated rank (perfect tail, e.g. semisimple).
    pub fn derived_series(&self) -> Vec<SubspaceBasis> {
        let n = self.dim;
        let full = SubspaceBasis::coordinate_subspace(n, &(0..n).collect::<Vec<_>>());
        let mut series = vec![full];
        loop {
            let prev = series.last().expect("series is nonempty");
            let cols = prev.vectors();
            let mut spans: Vec<DVector<f64>> = Vec::new();
            for a in 0..cols.len() {
                for b in (a + 1)..cols.len() {
                    let z = self
                        .bracket(
                            &AlgebraVector(cols[a].clone()),
                            &AlgebraVector(cols[b].clone()),
                        )
                        .expect("series vectors have ambient dimension");
                    spans.push(z.0);
                }
            }
            let next = SubspaceBasis::from_spanning_set(&spans, n, None);
            let stop = next.rank() == 0 || next.rank() >= prev.rank();
            series.push(next);
            if stop {
                return series;
            }
        }
    }

    /// Whether the derived series terminates at the zero subspace.
    pub fn is_solvable(&self) -> bool {
        self.derived_series()
            .last()
            .map(|s| s.rank() == 0)
            .unwrap_or(false)
    }

    /// Residual of infinitesimal invariance of a bilinear form `Q` on `g`
    /// under the listed subalgebra directions:
    /// `max |Q([k, x], y) + Q(x, [k, y])|` over basis vectors `k` of the
    /// subspace and coordinate probes `x, y`. Zero means `Q` is infinitesimally
    /// invariant under the subalgebra action.
    pub fn infinitesimal_invariance_residual(
        &self,
        q: &DMatrix<f64>,
        k_basis: &SubspaceBasis,
    ) -> Result<f64, Error> {
        let n = self.dim;
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: q.nrows(),
                context: "invariance form",
            });
        }
        if k_basis.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: k_basis.ambient_dim(),
                context: "invariance subalgebra basis",
            });
        }
        let mut worst: f64 = 0.0;
        for k in k_basis.vectors() {
            let ad_k = self.ad_matrix(&AlgebraVector(k))?;
            let m = ad_k.transpose() * q + q * &ad_k;
            worst = worst.max(m.abs().max());
        }
        Ok(worst)
    }

    /// Re-express the tensor in the basis whose `j`-th vector is the `j`-th
    /// column of `t` (written in the current basis). Fails when `t` is
    /// singular at the default rank cutoff.
    pub fn change_basis(
        &self,
        t: &DMatrix<f64>,
        labels: Option<Vec<String>>,
    ) -> Result<StructureTensor, Error> {
        let n = self.dim;
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.nrows(),
                context: "change-of-basis matrix",
            });
        }
        let lu = t.clone().lu();
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::invalid(format!(
                        "{} labels supplied for dimension {n}",
                        l.len()
                    )));
                }
                l
            }
            None => (0..n).map(|i| format!("f{i}")).collect(),
        };
        let mut c = vec![0.0; n * n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let ta = AlgebraVector(t.column(a).into_owned());
                let tb = AlgebraVector(t.column(b).into_owned());
                let w = self.bracket(&ta, &tb)?;
                let coeffs = lu.solve(&w.0).ok_or_else(|| {
                    Error::invalid("change-of-basis matrix is singular")
                })?;
                for k in 0..n {
                    c[a * n * n + b * n + k] = coeffs[k];
                    c[b * n * n + a * n + k] = -coeffs[k];
                }
            }
        }
        Ok(StructureTensor {
            dim: n,
            labels,
            c,
        })
    }
}
