//! Sparse multivariate polynomials with exact analytic gradients.
//!
//! A polynomial is a map from exponent multi-indices to coefficients; the
//! multi-index `[2, 0, 1]` with coefficient `c` denotes the monomial
//! `c * x0^2 * x2`. Terms are stored in a sorted map so iteration order, and
//! therefore serialization, is deterministic.

use std::collections::BTreeMap;

use crate::error::Error;

/// Sparse polynomial in `nvars` real variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    /// The zero polynomial.
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// Build from `(multi-index, coefficient)` pairs.
    ///
    /// Multi-indices shorter than `nvars` are padded with zero exponents;
    /// longer ones are rejected. Duplicate multi-indices accumulate.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, f64)>,
    ) -> Result<Self, Error> {
        let mut p = Self::zero(nvars);
        for (mut idx, coeff) in terms {
            if idx.len() > nvars {
                return Err(Error::invalid(format!(
                    "multi-index of length {} exceeds variable count {}",
                    idx.len(),
                    nvars
                )));
            }
            if !coeff.is_finite() {
                return Err(Error::invalid("non-finite polynomial coefficient"));
            }
            idx.resize(nvars, 0);
            *p.terms.entry(idx).or_insert(0.0) += coeff;
        }
        p.prune();
        Ok(p)
    }

    /// Monomial `coeff * x_var^exp`.
    pub fn monomial(nvars: usize, var: usize, exp: u32, coeff: f64) -> Self {
        let mut idx = vec![0u32; nvars];
        idx[var] = exp;
        let mut terms = BTreeMap::new();
        terms.insert(idx, coeff);
        let mut p = Self { nvars, terms };
        p.prune();
        p
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0.0);
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|idx| idx.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Iterate `(multi-index, coefficient)` pairs in sorted order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(i, &c)| (i.as_slice(), c))
    }

    /// Evaluate at a point.
    pub fn value(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        self.terms
            .iter()
            .map(|(idx, c)| {
                c * idx
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// Exact partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (idx, &c) in &self.terms {
            let e = idx[var];
            if e == 0 {
                continue;
            }
            let mut didx = idx.clone();
            didx[var] = e - 1;
            *out.terms.entry(didx).or_insert(0.0) += c * e as f64;
        }
        out.prune();
        out
    }

    /// Exact gradient at a point.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        let mut g = vec![0.0; self.nvars];
        for (idx, &c) in &self.terms {
            for (var, &e) in idx.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut m = c * e as f64 * x[var].powi(e as i32 - 1);
                for (w, &ew) in idx.iter().enumerate() {
                    if w != var && ew != 0 {
                        m *= x[w].powi(ew as i32);
                    }
                }
                g[var] += m;
            }
        }
        g
    }

    /// Sum of two polynomials over the same variables.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (idx, &c) in &other.terms {
            *out.terms.entry(idx.clone()).or_insert(0.0) += c;
        }
        out.prune();
        out
    }

    /// Scale by a constant.
    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    /// Product of two polynomials over the same variables.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        for (ia, &ca) in &self.terms {
            for (ib, &cb) in &other.terms {
                let idx: Vec<u32> = ia.iter().zip(ib).map(|(&a, &b)| a + b).collect();
                *out.terms.entry(idx).or_insert(0.0) += ca * cb;
            }
        }
        out.prune();
        out
    }

    /// Substitute zero for the variables listed in `zeroed` and renumber the
    /// survivors by `kept` (old index order becomes the new coordinate
    /// order). Terms containing a zeroed variable vanish.
    pub fn restrict(&self, zeroed: &[usize], kept: &[usize]) -> Result<Self, Error> {
        if zeroed.len() + kept.len() != self.nvars {
            return Err(Error::invalid(
                "restriction index sets must partition the variables",
            ));
        }
        let mut out = Self::zero(kept.len());
        'term: for (idx, &c) in &self.terms {
            for &z in zeroed {
                if idx[z] > 0 {
                    continue 'term;
                }
            }
            let new_idx: Vec<u32> = kept.iter().map(|&k| idx[k]).collect();
            *out.terms.entry(new_idx).or_insert(0.0) += c;
        }
        out.prune();
        Ok(out)
    }
}
