//! JSON serialization of algebras and homogeneous models.
//!
//! Two document shapes share one vocabulary:
//!
//! * an algebra file —
//!   `{"dim": n, "basis": [labels], "brackets": [[i, j, k, value], ...]}`
//!   with zero-based indices, where only `i < j` entries are required
//!   (antisymmetric closure is applied on load);
//! * a model file — the same algebra block plus `"k"`, `"m"`, and a tagged
//!   `"form"` (`{"kind": "quadratic", "matrix": [[...]]}` or
//!   `{"kind": "polynomial", "terms": [[[multi-index], coeff], ...]}`).
//!
//! The presence of a `"k"` or `"form"` key is what distinguishes the two on
//! read. Loaded algebras are validated (Jacobi within tolerance) and loaded
//! models must have a genuine subalgebra `k`, so a successful parse is a
//! usable object; reductivity of the splitting is recorded on the model
//! rather than enforced.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::homspace::{EnergyForm, HomogeneousModel};
use crate::liealg::StructureTensor;
use crate::poly::Polynomial;

/// Serialized Lie algebra: triplet brackets over a labeled basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    /// Algebra dimension.
    pub dim: usize,
    /// Basis labels (defaults to `e0..` when absent).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    /// Structure constants as `[i, j, k, value]` with `[e_i, e_j]`
    /// containing `value * e_k`; `i < j` entries suffice.
    pub brackets: Vec<(usize, usize, usize, f64)>,
}

/// Serialized energy form on `m*`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FormSpec {
    /// `value(p) = p^T matrix p / 2`.
    Quadratic {
        /// Symmetric Hessian, row-major.
        matrix: Vec<Vec<f64>>,
    },
    /// Sparse polynomial: list of `[[multi-index], coefficient]`.
    Polynomial {
        /// One entry per monomial.
        terms: Vec<(Vec<u32>, f64)>,
    },
}

/// Serialized homogeneous model: algebra block plus splitting and form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    /// The underlying algebra, flattened into the same object.
    #[serde(flatten)]
    pub algebra: AlgebraSpec,
    /// Isotropy indices.
    pub k: Vec<usize>,
    /// Complement indices.
    pub m: Vec<usize>,
    /// Energy form on `m*`.
    pub form: FormSpec,
}

fn json_error(e: &serde_json::Error) -> Error {
    Error::invalid(format!(
        "malformed JSON at line {}, column {}: {e}",
        e.line(),
        e.column()
    ))
}

impl AlgebraSpec {
    /// Capture an existing structure tensor (only `i < j` triplets are
    /// stored).
    pub fn from_tensor(st: &StructureTensor) -> Self {
        AlgebraSpec {
            dim: st.dim(),
            basis: Some(st.labels().to_vec()),
            brackets: st.bracket_triplets(),
        }
    }

    /// Build and validate the structure tensor described by this spec.
    pub fn build(&self) -> Result<StructureTensor, Error> {
        let st = StructureTensor::from_brackets(
            self.dim,
            self.basis.clone(),
            &self.brackets,
        )?;
        st.validate(None)?;
        Ok(st)
    }
}

impl FormSpec {
    /// Capture an existing energy form.
    pub fn from_form(form: &EnergyForm) -> Self {
        match form {
            EnergyForm::Quadratic { s } => FormSpec::Quadratic {
                matrix: (0..s.nrows())
                    .map(|i| s.row(i).iter().copied().collect())
                    .collect(),
            },
            EnergyForm::Polynomial { poly } => FormSpec::Polynomial {
                terms: poly
                    .terms()
                    .map(|(exps, coeff)| (exps.to_vec(), coeff))
                    .collect(),
            },
        }
    }

    /// Build the energy form, checking shape against the expected `m*`
    /// dimension.
    pub fn build(&self, dim_m: usize) -> Result<EnergyForm, Error> {
        match self {
            FormSpec::Quadratic { matrix } => {
                if matrix.len() != dim_m {
                    return Err(Error::DimensionMismatch {
                        expected: dim_m,
                        got: matrix.len(),
                        context: "quadratic form rows",
                    });
                }
                for row in matrix {
                    if row.len() != dim_m {
                        return Err(Error::DimensionMismatch {
                            expected: dim_m,
                            got: row.len(),
                            context: "quadratic form columns",
                        });
                    }
                }
                let s = DMatrix::from_fn(dim_m, dim_m, |i, j| matrix[i][j]);
                EnergyForm::quadratic(s)
            }
            FormSpec::Polynomial { terms } => {
                let poly = Polynomial::from_terms(dim_m, terms.clone())?;
                Ok(EnergyForm::polynomial(poly))
            }
        }
    }
}

impl ModelSpec {
    /// Capture an existing model/form pair.
    pub fn from_model(model: &HomogeneousModel, form: &EnergyForm) -> Self {
        ModelSpec {
            algebra: AlgebraSpec::from_tensor(model.algebra()),
            k: model.k_indices().to_vec(),
            m: model.m_indices().to_vec(),
            form: FormSpec::from_form(form),
        }
    }

    /// Build and validate the model and its energy form.
    pub fn build(&self) -> Result<(HomogeneousModel, EnergyForm), Error> {
        let st = self.algebra.build()?;
        let model = HomogeneousModel::new(st, self.k.clone(), self.m.clone())?;
        let form = self.form.build(model.dim_m())?;
        Ok((model, form))
    }
}

/// Parse an algebra document from JSON text.
pub fn algebra_from_json(text: &str) -> Result<StructureTensor, Error> {
    let spec: AlgebraSpec = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    spec.build()
}

/// Parse a model document from JSON text.
pub fn model_from_json(text: &str) -> Result<(HomogeneousModel, EnergyForm), Error> {
    let spec: ModelSpec = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    spec.build()
}

/// Render an algebra as pretty-printed JSON.
pub fn algebra_to_json(st: &StructureTensor) -> String {
    serde_json::to_string_pretty(&AlgebraSpec::from_tensor(st))
        .expect("algebra specs always serialize")
}

/// Render a model/form pair as pretty-printed JSON.
pub fn model_to_json(model: &HomogeneousModel, form: &EnergyForm) -> String {
    serde_json::to_string_pretty(&ModelSpec::from_model(model, form))
        .expect("model specs always serialize")
}

/// True when the JSON text looks like a model document (has `"k"` or
/// `"form"`) rather than a bare algebra.
pub fn looks_like_model(text: &str) -> bool {
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(serde_json::Value::Object(map)) => {
            map.contains_key("k") || map.contains_key("form")
        }
        _ => false,
    }
}

/// Read a model file from disk.
pub fn model_from_path(path: &Path) -> Result<(HomogeneousModel, EnergyForm), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::invalid(format!("cannot read {}: {e}", path.display()))
    })?;
    model_from_json(&text)
}
