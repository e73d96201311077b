//! Small dense vectors and covariance matrices (dimension 1–3 in practice).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of `R^d`: shift vectors, frequencies, jump directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<T>(pub Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Validation("vector must have dimension >= 1".into()));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("vector has non-finite component".into()));
        }
        Ok(Self(components))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![T::zero(); dim])
    }

    pub fn scalar(x: T) -> Self {
        Self(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn norm(&self) -> T {
        norm(&self.0)
    }

    pub fn scaled(&self, c: T) -> Self {
        Self(self.0.iter().map(|&x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&x, &y)| x + y).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

pub fn norm<T: Scalar>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

/// Symmetric positive semi-definite `d × d` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Scalar> CovMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Validation("covariance must be a non-empty square matrix".into()));
        }
        let entries: Vec<T> = rows.into_iter().flatten().collect();
        Self::from_row_major(dim, entries)
    }

    pub fn from_row_major(dim: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Validation("covariance has wrong number of entries".into()));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("covariance has non-finite entry".into()));
        }
        let m = Self { dim, entries };
        let scale = m.entries.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
        for i in 0..dim {
            for j in 0..i {
                if (m.get(i, j) - m.get(j, i)).abs() > T::of(1e-12) * (T::one() + scale) {
                    return Err(Error::Validation(format!("covariance not symmetric at ({i},{j})")));
                }
            }
        }
        let (min_eig, trace) = m.min_eigenvalue_and_trace();
        if min_eig < -1e-12 * trace.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::Validation(format!(
                "covariance not positive semi-definite (eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    pub fn diagonal(diag: &[T]) -> Result<Self> {
        let dim = diag.len();
        let mut entries = vec![T::zero(); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = d;
        }
        Self::from_row_major(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// `⟨y, S y⟩`
    pub fn quad_form(&self, y: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc = acc + y[i] * self.get(i, j) * y[j];
            }
        }
        acc
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(&x, &y)| x + y).collect(),
        }
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).as_f64())
    }

    fn min_eigenvalue_and_trace(&self) -> (f64, f64) {
        let m = self.to_nalgebra();
        let trace = m.trace();
        let eig = SymmetricEigen::new(m);
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        (min, trace)
    }

    /// Symmetric square root `S^{1/2}` in `f64`, row-major. Negative
    /// round-off eigenvalues are clamped to zero.
    pub fn sqrt_f64(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.to_nalgebra());
        let q = &eig.eigenvectors;
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
        let root = q * d * q.transpose();
        let mut out = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.push(root[(i, j)]);
            }
        }
        out
    }
}
