//! Homogeneous models `G/K`: a structure tensor with a basis-aligned
//! reductive splitting `g = k + m`, plus invariant energy forms on `m*` and
//! invariant polynomials on `g*`.
//!
//! The splitting is given by index sets, so the projection `f: g -> m` is a
//! coordinate projection and its dual `f*: m* -> g*` is zero-padding. The
//! transpose pairing `(f*(p) | a) = (p | f(a))` then holds exactly: both
//! sides sum the identical products, the embedded side merely adding exact
//! zeros.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::liealg::StructureTensor;
use crate::poly::Polynomial;
use crate::sampling::SampleStream;
use crate::types::{AlgebraVector, CovectorAtOrigin, SubspaceBasis, VectorAtOrigin};

/// Tolerance for accepting `k` as a subalgebra and `[k, m] <= m` as reductive.
pub const SPLITTING_TOL: f64 = 1e-10;

/// A reductive homogeneous model: algebra, splitting, and the bookkeeping
/// needed to move between `g`, `m` and their duals.
#[derive(Debug, Clone)]
pub struct HomogeneousModel {
    algebra: StructureTensor,
    k_indices: Vec<usize>,
    m_indices: Vec<usize>,
    reductive_verified: bool,
}

impl HomogeneousModel {
    /// Assemble a model from a tensor and index sets for `k` and `m`.
    ///
    /// Requirements checked here:
    /// * the index sets are strictly increasing, disjoint and cover the basis
    ///   (so `m`-coordinates are unambiguous),
    /// * `k` is a subalgebra: `m`-components of `[k, k]` vanish within
    ///   [`SPLITTING_TOL`] (hard error otherwise),
    /// * `[k, m] <= m` is tested and recorded in `reductive_verified`
    ///   (a warning-level property; non-reductive splittings still load).
    pub fn new(
        algebra: StructureTensor,
        k_indices: Vec<usize>,
        m_indices: Vec<usize>,
    ) -> Result<Self, Error> {
        let n = algebra.dim();
        for (name, set) in [("k", &k_indices), ("m", &m_indices)] {
            if !set.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::invalid(format!(
                    "{name} index set must be strictly increasing"
                )));
            }
            if set.iter().any(|&i| i >= n) {
                return Err(Error::invalid(format!(
                    "{name} index set contains an index outside 0..{n}"
                )));
            }
        }
        let mut cover: Vec<usize> = k_indices.iter().chain(&m_indices).cloned().collect();
        cover.sort_unstable();
        if cover != (0..n).collect::<Vec<_>>() {
            return Err(Error::invalid(
                "k and m index sets must disjointly cover the basis",
            ));
        }
        if m_indices.is_empty() {
            return Err(Error::invalid("m index set must be nonempty"));
        }

        // Subalgebra check: [k, k] must have no m-components.
        let mut closure: f64 = 0.0;
        for &i in &k_indices {
            for &j in &k_indices {
                for &t in &m_indices {
                    closure = closure.max(algebra.constant(i, j, t).abs());
                }
            }
        }
        if closure > SPLITTING_TOL {
            return Err(Error::invalid(format!(
                "k is not a subalgebra: [k, k] has m-component {closure:.3e}"
            )));
        }

        // Reductive check: [k, m] must have no k-components.
        let mut mixed: f64 = 0.0;
        for &i in &k_indices {
            for &j in &m_indices {
                for &t in &k_indices {
                    mixed = mixed.max(algebra.constant(i, j, t).abs());
                }
            }
        }

        Ok(Self {
            algebra,
            k_indices,
            m_indices,
            reductive_verified: mixed <= SPLITTING_TOL,
        })
    }

    /// The underlying structure tensor.
    pub fn algebra(&self) -> &StructureTensor {
        &self.algebra
    }

    /// Ambient algebra dimension `n`.
    pub fn dim_g(&self) -> usize {
        self.algebra.dim()
    }

    /// Dimension `d` of `m` (the tangent space at the origin).
    pub fn dim_m(&self) -> usize {
        self.m_indices.len()
    }

    /// Indices of the `k`-block in the ambient basis.
    pub fn k_indices(&self) -> &[usize] {
        &self.k_indices
    }

    /// Indices of the `m`-block in the ambient basis.
    pub fn m_indices(&self) -> &[usize] {
        &self.m_indices
    }

    /// Whether `[k, m] <= m` held within [`SPLITTING_TOL`].
    pub fn reductive_verified(&self) -> bool {
        self.reductive_verified
    }

    /// Projection `f: g -> m` (coordinate selection in `m`-index order).
    pub fn f_apply(&self, a: &AlgebraVector) -> Result<VectorAtOrigin, Error> {
        if a.len() != self.dim_g() {
            return Err(Error::DimensionMismatch {
                expected: self.dim_g(),
                got: a.len(),
                context: "f argument",
            });
        }
        Ok(VectorAtOrigin(DVector::from_iterator(
            self.dim_m(),
            self.m_indices.iter().map(|&i| a[i]),
        )))
    }

    /// Dual embedding `f*: m* -> g*` (zero padding on the `k`-positions).
    pub fn f_star(&self, p: &CovectorAtOrigin) -> Result<AlgebraVector, Error> {
        if p.len() != self.dim_m() {
            return Err(Error::DimensionMismatch {
                expected: self.dim_m(),
                got: p.len(),
                context: "f* argument",
            });
        }
        let mut mu = DVector::zeros(self.dim_g());
        for (t, &i) in self.m_indices.iter().enumerate() {
            mu[i] = p[t];
        }
        Ok(AlgebraVector(mu))
    }

    /// Orthonormal coordinate basis of `k` inside `g`.
    pub fn k_basis(&self) -> SubspaceBasis {
        SubspaceBasis::coordinate_subspace(self.dim_g(), &self.k_indices)
    }

    /// Matrix of the infinitesimal `k`-action on `m*` for `k_vec` in `k`:
    /// the restriction of `coad(k_vec)` to the `m*`-coordinates.
    ///
    /// Well-defined because `[k, k] <= k` makes `coad(k)` preserve the
    /// annihilator of `k`, which is `m*` in the aligned basis.
    pub fn k_action_on_mstar(&self, k_vec: &AlgebraVector) -> Result<DMatrix<f64>, Error> {
        let coad = self.algebra.coad_matrix(k_vec)?;
        let d = self.dim_m();
        let mut out = DMatrix::zeros(d, d);
        for (r, &i) in self.m_indices.iter().enumerate() {
            for (c, &j) in self.m_indices.iter().enumerate() {
                out[(r, c)] = coad[(i, j)];
            }
        }
        Ok(out)
    }
}

/// Invariant energy form on `m*` (Hamiltonian side) or on `m` (Lagrangian
/// side) — the two cases share representation and calculus.
///
/// * `Quadratic { s }` is the form `p -> (1/2) p^T S p` with exact gradient
///   `S p`. `S` is the Hessian, stored exactly symmetric.
/// * `Polynomial { poly }` is an arbitrary polynomial with exact analytic
///   gradient.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyForm {
    /// `p -> (1/2) p^T S p`.
    Quadratic { s: DMatrix<f64> },
    /// Arbitrary polynomial energy.
    Polynomial { poly: Polynomial },
}

impl EnergyForm {
    /// Quadratic form from its (exactly symmetric) Hessian matrix.
    pub fn quadratic(s: DMatrix<f64>) -> Result<Self, Error> {
        if s.nrows() != s.ncols() {
            return Err(Error::invalid("quadratic form matrix must be square"));
        }
        if s != s.transpose() {
            return Err(Error::invalid(
                "quadratic form matrix must be exactly symmetric",
            ));
        }
        if s.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("quadratic form matrix has non-finite entries"));
        }
        Ok(EnergyForm::Quadratic { s })
    }

    /// Polynomial form.
    pub fn polynomial(poly: Polynomial) -> Self {
        EnergyForm::Polynomial { poly }
    }

    /// Number of variables the form acts on.
    pub fn dim(&self) -> usize {
        match self {
            EnergyForm::Quadratic { s } => s.nrows(),
            EnergyForm::Polynomial { poly } => poly.nvars(),
        }
    }

    /// Whether this is the quadratic case.
    pub fn is_quadratic(&self) -> bool {
        matches!(self, EnergyForm::Quadratic { .. })
    }

    /// The Hessian matrix of a quadratic form.
    pub fn quadratic_matrix(&self) -> Option<&DMatrix<f64>> {
        match self {
            EnergyForm::Quadratic { s } => Some(s),
            EnergyForm::Polynomial { .. } => None,
        }
    }

    /// Positive definiteness of the quadratic case (None for polynomials,
    /// where definiteness is not a single matrix property).
    pub fn positive_definite(&self) -> Option<bool> {
        match self {
            EnergyForm::Quadratic { s } => {
                let eig = s.clone().symmetric_eigen();
                Some(eig.eigenvalues.iter().all(|&l| l > 0.0))
            }
            EnergyForm::Polynomial { .. } => None,
        }
    }

    /// Evaluate on raw coordinates.
    pub fn value_at(&self, x: &DVector<f64>) -> f64 {
        match self {
            EnergyForm::Quadratic { s } => 0.5 * x.dot(&(s * x)),
            EnergyForm::Polynomial { poly } => poly.value(x.as_slice()),
        }
    }

    /// Exact gradient on raw coordinates (`S x` for the quadratic case).
    pub fn gradient_at(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            EnergyForm::Quadratic { s } => s * x,
            EnergyForm::Polynomial { poly } => {
                DVector::from_vec(poly.gradient(x.as_slice()))
            }
        }
    }

    /// Hamiltonian value at a covector.
    pub fn value(&self, p: &CovectorAtOrigin) -> f64 {
        self.value_at(&p.0)
    }

    /// Hamiltonian gradient `dH_o(p)`, a tangent vector at the origin.
    pub fn gradient(&self, p: &CovectorAtOrigin) -> VectorAtOrigin {
        VectorAtOrigin(self.gradient_at(&p.0))
    }
}

/// Residual of infinitesimal `K`-invariance of an energy form on `m*`:
/// the derivative of the form along the `k`-action must vanish.
///
/// Quadratic forms are checked exactly through
/// `max |D_k^T S + S D_k|` over the `k`-basis; polynomial forms are probed at
/// `n_samples` seeded Gaussian points.
pub fn form_k_invariance_residual(
    model: &HomogeneousModel,
    form: &EnergyForm,
    n_samples: usize,
    seed: u64,
) -> Result<f64, Error> {
    let d = model.dim_m();
    if form.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: form.dim(),
            context: "form on m*",
        });
    }
    let n = model.dim_g();
    let mut worst: f64 = 0.0;
    match form {
        EnergyForm::Quadratic { s } => {
            for &ki in model.k_indices() {
                let dk = model.k_action_on_mstar(&AlgebraVector::basis(n, ki))?;
                let m = dk.transpose() * s + s * &dk;
                worst = worst.max(m.abs().max());
            }
        }
        EnergyForm::Polynomial { .. } => {
            let mut stream = SampleStream::new(seed);
            for _ in 0..n_samples {
                let p = stream.gaussian_vector(d);
                let g = form.gradient_at(&p);
                for &ki in model.k_indices() {
                    let dk = model.k_action_on_mstar(&AlgebraVector::basis(n, ki))?;
                    worst = worst.max(g.dot(&(dk * &p)).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Polynomial on the full dual `g*`, typically an `Ad*`-invariant such as a
/// Casimir function.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantPolynomial {
    poly: Polynomial,
}

impl InvariantPolynomial {
    /// Wrap a polynomial on `g*`. Invariance is the caller's claim; measure
    /// it with [`ad_star_invariance_residual`](Self::ad_star_invariance_residual).
    pub fn new(poly: Polynomial) -> Self {
        Self { poly }
    }

    /// Underlying polynomial.
    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Sum of squares of all dual coordinates - the quadratic Casimir-type
    /// invariant of a compact algebra in an orthonormal basis.
    pub fn sum_of_squares(dim: usize) -> Self {
        let terms = (0..dim).map(|i| {
            let mut idx = vec![0u32; dim];
            idx[i] = 2;
            (idx, 1.0)
        });
        Self::new(Polynomial::from_terms(dim, terms).expect("valid terms"))
    }

    /// The quadratic `su(3)` invariant `Y1` in the primed orthonormal basis:
    /// the sum of squares of all eight dual coordinates.
    pub fn su3_y1() -> Self {
        Self::sum_of_squares(8)
    }

    /// The cubic `su(3)` invariant `Y2` in the primed orthonormal basis
    /// `(a', b', c', e1..e4, z)`:
    ///
    /// `Y2 = sqrt(3) s3 + z (s2 - 2 s1) + (2/3) z^3`, where
    /// `s1 = a'^2 + b'^2 + c'^2`, `s2 = e1^2 + .. + e4^2`, and
    /// `s3 = a'(e1^2 + e2^2 - e3^2 - e4^2) + 2 b'(e1 e4 - e2 e3)
    ///      - 2 c'(e1 e3 + e2 e4)`.
    pub fn su3_y2() -> Self {
        let r3 = 3.0_f64.sqrt();
        #[rustfmt::skip]
        let terms: Vec<(Vec<u32>, f64)> = vec![
            // sqrt(3) * s3
            (vec![1, 0, 0, 2, 0, 0, 0, 0],  r3),
            (vec![1, 0, 0, 0, 2, 0, 0, 0],  r3),
            (vec![1, 0, 0, 0, 0, 2, 0, 0], -r3),
            (vec![1, 0, 0, 0, 0, 0, 2, 0], -r3),
            (vec![0, 1, 0, 1, 0, 0, 1, 0],  2.0 * r3),
            (vec![0, 1, 0, 0, 1, 1, 0, 0], -2.0 * r3),
            (vec![0, 0, 1, 1, 0, 1, 0, 0], -2.0 * r3),
            (vec![0, 0, 1, 0, 1, 0, 1, 0], -2.0 * r3),
            // z * s2
            (vec![0, 0, 0, 2, 0, 0, 0, 1],  1.0),
            (vec![0, 0, 0, 0, 2, 0, 0, 1],  1.0),
            (vec![0, 0, 0, 0, 0, 2, 0, 1],  1.0),
            (vec![0, 0, 0, 0, 0, 0, 2, 1],  1.0),
            // -2 z * s1
            (vec![2, 0, 0, 0, 0, 0, 0, 1], -2.0),
            (vec![0, 2, 0, 0, 0, 0, 0, 1], -2.0),
            (vec![0, 0, 2, 0, 0, 0, 0, 1], -2.0),
            // (2/3) z^3
            (vec![0, 0, 0, 0, 0, 0, 0, 3],  2.0 / 3.0),
        ];
        Self::new(Polynomial::from_terms(8, terms).expect("valid terms"))
    }

    /// Evaluate at a dual point.
    pub fn value(&self, mu: &DVector<f64>) -> f64 {
        self.poly.value(mu.as_slice())
    }

    /// Exact gradient at a dual point, as an algebra vector (the
    /// differential of a function on `g*` lives in `g`).
    pub fn gradient(&self, mu: &DVector<f64>) -> AlgebraVector {
        AlgebraVector(DVector::from_vec(self.poly.gradient(mu.as_slice())))
    }

    /// Measured `Ad*`-invariance: the largest directional derivative of the
    /// polynomial along coadjoint directions `coad(a) mu` over seeded Gaussian
    /// samples of `mu` and `a`. Exactly invariant polynomials give rounding
    /// noise; non-invariant ones give order-one values.
    pub fn ad_star_invariance_residual(
        &self,
        st: &StructureTensor,
        n_samples: usize,
        seed: u64,
    ) -> Result<f64, Error> {
        let n = st.dim();
        if self.poly.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.poly.nvars(),
                context: "invariant polynomial variables",
            });
        }
        let mut stream = SampleStream::new(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..n_samples {
            let mu = stream.gaussian_vector(n);
            let a = AlgebraVector(stream.gaussian_vector(n));
            let dir = st.coad_matrix(&a)? * &mu;
            let g = self.gradient(&mu);
            worst = worst.max(g.dot(&dir).abs());
        }
        Ok(worst)
    }

    /// Restrict along `f*`: substitute zero for the `k`-coordinates and view
    /// the result as an energy form `h_o = h . f*` on `m*`.
    pub fn restrict(&self, model: &HomogeneousModel) -> Result<EnergyForm, Error> {
        if self.poly.nvars() != model.dim_g() {
            return Err(Error::DimensionMismatch {
                expected: model.dim_g(),
                got: self.poly.nvars(),
                context: "invariant polynomial variables",
            });
        }
        let restricted = self
            .poly
            .restrict(model.k_indices(), model.m_indices())?;
        Ok(EnergyForm::polynomial(restricted))
    }
}

/// The built-in `SU(3)/SU(2)` model with the one-parameter family of
/// invariant metrics `alpha (e1^2 + .. + e4^2) + beta z^2` on `m*`.
///
/// The returned quadratic form has Hessian
/// `S = diag(2 alpha, 2 alpha, 2 alpha, 2 alpha, 2 beta)`, so its value
/// `(1/2) p^T S p` is exactly the family above and its gradient at
/// `p = (e, z)` is `(2 alpha e, 2 beta z)`.
///
/// `alpha, beta > 0` is the Riemannian regime; nonzero negative values are
/// accepted (pseudo-Riemannian) and flagged through
/// [`EnergyForm::positive_definite`].
pub fn su3_su2(alpha: f64, beta: f64) -> Result<(HomogeneousModel, EnergyForm), Error> {
    if !alpha.is_finite() || !beta.is_finite() || alpha == 0.0 || beta == 0.0 {
        return Err(Error::invalid(
            "metric parameters alpha, beta must be finite and nonzero",
        ));
    }
    let model = HomogeneousModel::new(
        StructureTensor::su3(),
        vec![0, 1, 2],
        vec![3, 4, 5, 6, 7],
    )?;
    let s = DMatrix::from_diagonal(&DVector::from_vec(vec![
        2.0 * alpha,
        2.0 * alpha,
        2.0 * alpha,
        2.0 * alpha,
        2.0 * beta,
    ]));
    let form = EnergyForm::quadratic(s)?;
    Ok((model, form))
}
