//! Dense symmetric matrices and the handful of factorizations the solvers need.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// A dense real symmetric matrix.
///
/// Entries are symmetrized on construction, so `get(i, j) == get(j, i)`
/// holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: DMatrix<f64>,
}

impl SymMatrix {
    pub fn new(mut m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Ok(Self { inner: m })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self { inner: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self { inner: DMatrix::identity(dim, dim) }
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.inner.row(i).iter().copied().collect()).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.iter().all(|&v| v == 0.0)
    }

    /// `self + c * other`, dimensions must agree.
    pub fn add_scaled(&self, c: f64, other: &SymMatrix) -> Result<SymMatrix> {
        check_dims(self, other)?;
        Ok(SymMatrix { inner: &self.inner + &other.inner * c })
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix { inner: &self.inner * c }
    }

    /// Quadratic form `uᵀ S u`.
    pub fn quad_form(&self, u: &DVector<f64>) -> f64 {
        u.dot(&(&self.inner * u))
    }

    /// Block-diagonal concatenation `diag(self, other)`.
    pub fn block_diag(&self, other: &SymMatrix) -> SymMatrix {
        let (a, b) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.inner);
        m.view_mut((a, a), (b, b)).copy_from(&other.inner);
        SymMatrix { inner: m }
    }
}

fn check_dims(a: &SymMatrix, b: &SymMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// PSD acceptance tolerance `1e-8 * (1 + ‖S‖_F)`.
pub fn psd_tolerance(s: &SymMatrix) -> f64 {
    1e-8 * (1.0 + s.frobenius_norm())
}

/// Full eigen-decomposition with eigenvalues in ascending order.
///
/// Each eigenvector is signed so that its first component with magnitude
/// above `1e-12` is positive.
pub fn eigen(s: &SymMatrix) -> (Vec<f64>, Vec<DVector<f64>>) {
    let eig = SymmetricEigen::new(s.inner.clone());
    let mut order: Vec<usize> = (0..s.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut v: DVector<f64> = eig.eigenvectors.column(k).into_owned();
            let nrm = v.norm();
            if nrm > 0.0 {
                v /= nrm;
            }
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v.neg_mut();
                }
            }
            v
        })
        .collect();
    (values, vectors)
}

/// Smallest eigenvalue of `s` together with a unit eigenvector.
pub fn min_eigenpair(s: &SymMatrix) -> Result<(f64, DVector<f64>)> {
    let (mut values, mut vectors) = eigen(s);
    Ok((values.swap_remove(0), vectors.swap_remove(0)))
}

/// Smallest eigenvalue only.
pub fn min_eigenvalue(s: &SymMatrix) -> f64 {
    let eig = SymmetricEigen::new(s.inner.clone());
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Trace inner product `trace(S T) = Σ S_ij T_ij`.
pub fn trace_inner(s: &SymMatrix, t: &SymMatrix) -> Result<f64> {
    check_dims(s, t)?;
    Ok(s.inner.dot(&t.inner))
}

/// Solves `S x = b` for positive definite `S` via Cholesky.
pub fn solve_spd(s: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: b.len() });
    }
    let chol = s.inner.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let x = chol.solve(&DVector::from_column_slice(b));
    Ok(x.iter().copied().collect())
}
