//! Shared domain types: vectors in the algebra, (co)vectors at the origin of
//! `G/K`, momentum states on `g*`, and orthonormal subspace bases.
//!
//! The three vector newtypes exist to keep the spaces apart in signatures:
//! an [`AlgebraVector`] lives in the full algebra `g` (dimension `n`), while
//! [`VectorAtOrigin`] and [`CovectorAtOrigin`] live in `m ~ T_o(G/K)` and
//! `m* ~ T_o*(G/K)` (dimension `d`). All three deref to [`DVector<f64>`], so
//! read access, norms and iteration come from `nalgebra`.

use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::linalg;

macro_rules! vector_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(pub DVector<f64>);

        impl $name {
            /// Zero vector of the given dimension.
            pub fn zeros(dim: usize) -> Self {
                Self(DVector::zeros(dim))
            }

            /// `i`-th coordinate basis vector in ambient dimension `dim`.
            pub fn basis(dim: usize, i: usize) -> Self {
                let mut v = DVector::zeros(dim);
                v[i] = 1.0;
                Self(v)
            }

            /// Components as a slice, in basis order.
            pub fn as_slice(&self) -> &[f64] {
                self.0.as_slice()
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(DVector::from_vec(v))
            }
        }

        impl From<DVector<f64>> for $name {
            fn from(v: DVector<f64>) -> Self {
                Self(v)
            }
        }

        impl std::ops::Deref for $name {
            type Target = DVector<f64>;
            fn deref(&self) -> &DVector<f64> {
                &self.0
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for x in self.0.iter() {
                    seq.serialize_element(x)?;
                }
                seq.end()
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                Ok(Self(DVector::from_vec(Vec::<f64>::deserialize(d)?)))
            }
        }
    };
}

vector_newtype!(
    /// Element of the Lie algebra `g`, expressed in the ambient basis
    /// (`n` components).
    AlgebraVector
);

vector_newtype!(
    /// Tangent vector at the origin of `G/K`, i.e. an element of `m`
    /// in the `m`-basis order of the model (`d` components).
    VectorAtOrigin
);

vector_newtype!(
    /// Cotangent vector at the origin of `G/K`, i.e. an element of `m*`
    /// in the dual `m`-basis order of the model (`d` components).
    CovectorAtOrigin
);

/// One point of a reduced Lie-Poisson trajectory on `g*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumState {
    /// Time coordinate.
    pub t: f64,
    /// Momentum in the dual basis of the ambient algebra basis.
    pub mu: AlgebraVector,
}

/// Orthonormal basis of a linear subspace of `R^n`.
///
/// The columns of the stored matrix are orthonormal, so the numerical rank of
/// the stacked basis always equals [`SubspaceBasis::rank`]. An empty basis
/// (rank 0) represents the zero subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    /// `n x r` matrix with orthonormal columns.
    basis: DMatrix<f64>,
}

impl SubspaceBasis {
    /// The zero subspace of `R^dim`.
    pub fn zero(dim: usize) -> Self {
        Self {
            basis: DMatrix::zeros(dim, 0),
        }
    }

    /// Orthonormalize a spanning set (columns need not be independent).
    ///
    /// Directions whose singular value falls below the rank cutoff
    /// (`max(rows, cols) * machine_eps * sigma_max`, or `cutoff` if given)
    /// are discarded.
    pub fn from_spanning_set(vectors: &[DVector<f64>], dim: usize, cutoff: Option<f64>) -> Self {
        if vectors.is_empty() {
            return Self::zero(dim);
        }
        let m = DMatrix::from_columns(vectors);
        Self {
            basis: linalg::orthonormal_column_span(&m, cutoff),
        }
    }

    /// Wrap a matrix whose columns are already orthonormal.
    ///
    /// Returns `InvalidInput` if the columns fail the orthonormality check at
    /// `1e-10`.
    pub fn from_orthonormal_columns(basis: DMatrix<f64>) -> Result<Self, Error> {
        let gram = basis.transpose() * &basis;
        let r = gram.ncols();
        let dev = (gram - DMatrix::identity(r, r)).abs().max();
        if dev > 1e-10 {
            return Err(Error::invalid(format!(
                "columns are not orthonormal (max Gram deviation {dev:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Subspace spanned by the listed coordinate axes of `R^dim`.
    pub fn coordinate_subspace(dim: usize, indices: &[usize]) -> Self {
        let cols: Vec<DVector<f64>> = indices
            .iter()
            .map(|&i| {
                let mut v = DVector::zeros(dim);
                v[i] = 1.0;
                v
            })
            .collect();
        if cols.is_empty() {
            return Self::zero(dim);
        }
        Self {
            basis: DMatrix::from_columns(&cols),
        }
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Dimension of the subspace.
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// The orthonormal basis as matrix columns.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Basis vectors as owned columns.
    pub fn vectors(&self) -> Vec<DVector<f64>> {
        (0..self.basis.ncols())
            .map(|j| self.basis.column(j).into_owned())
            .collect()
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.rank() == 0 {
            return DVector::zeros(v.len());
        }
        &self.basis * (self.basis.transpose() * v)
    }

    /// Distance from `v` to the subspace, `|v - proj(v)|`.
    pub fn distance(&self, v: &DVector<f64>) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Largest principal angle (radians) between two subspaces of equal rank.
    ///
    /// Returns `pi/2` when the ranks differ (the subspaces cannot coincide).
    pub fn principal_angle_to(&self, other: &SubspaceBasis) -> f64 {
        use std::f64::consts::FRAC_PI_2;
        if self.rank() != other.rank() {
            return FRAC_PI_2;
        }
        if self.rank() == 0 {
            return 0.0;
        }
        let overlap = self.basis.transpose() * &other.basis;
        let svd = overlap.svd(false, false);
        // Cosines of the principal angles; the smallest singular value gives
        // the largest angle.
        let min_cos = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
            .clamp(-1.0, 1.0);
        min_cos.acos()
    }
}

impl Serialize for SubspaceBasis {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rank()))?;
        for col in self.vectors() {
            let v: Vec<f64> = col.iter().cloned().collect();
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}
