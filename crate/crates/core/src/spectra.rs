//! Spectrahedra `C = {x : A0 + Σ x_i A_i ⪰ 0}` and the set operations the
//! approximation driver performs on them.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, psd_tolerance, SymMatrix};

/// Outcome of a membership test; `margin` is the smallest eigenvalue of `A(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrahedron {
    a0: SymMatrix,
    coeffs: Vec<SymMatrix>,
    /// Index sets of the diagonal blocks shared by every matrix of the pencil.
    blocks: Vec<Vec<usize>>,
}

impl Spectrahedron {
    pub fn new(a0: SymMatrix, coeffs: Vec<SymMatrix>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a pencil needs at least one variable".into()));
        }
        let m = a0.dim();
        if let Some(bad) = coeffs.iter().find(|a| a.dim() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: bad.dim() });
        }
        let blocks = diagonal_blocks(&a0, &coeffs);
        Ok(Self { a0, coeffs, blocks })
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Matrix size `m`.
    pub fn m(&self) -> usize {
        self.a0.dim()
    }

    pub fn a0(&self) -> &SymMatrix {
        &self.a0
    }

    pub fn coeffs(&self) -> &[SymMatrix] {
        &self.coeffs
    }

    pub fn is_homogeneous(&self) -> bool {
        self.a0.is_zero()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// `Ā(x) = Σ x_i A_i`.
    pub fn evaluate_linear(&self, x: &[f64]) -> Result<SymMatrix> {
        self.check_point(x)?;
        Ok(self.linear_unchecked(x))
    }

    fn linear_unchecked(&self, x: &[f64]) -> SymMatrix {
        let mut acc = DMatrix::zeros(self.m(), self.m());
        for (xi, ai) in x.iter().zip(&self.coeffs) {
            if *xi != 0.0 {
                acc += ai.as_matrix() * *xi;
            }
        }
        SymMatrix::new(acc).expect("finite combination of finite matrices")
    }

    /// `A(x) = A0 + Σ x_i A_i`.
    pub fn evaluate(&self, x: &[f64]) -> Result<SymMatrix> {
        self.check_point(x)?;
        let lin = self.linear_unchecked(x);
        lin.add_scaled(1.0, &self.a0)
    }

    /// Membership with the PSD tolerance `1e-8 (1 + ‖S‖_F)` applied to each
    /// diagonal block `S` of `A(x)` separately, so a large entry in one block
    /// does not loosen the test on the others.
    pub fn contains(&self, x: &[f64]) -> Result<Membership> {
        let ax = self.evaluate(x)?;
        if self.blocks.len() == 1 {
            let margin = linalg::min_eigenvalue(&ax);
            return Ok(Membership { inside: margin >= -psd_tolerance(&ax), margin });
        }
        let mut inside = true;
        let mut margin = f64::INFINITY;
        for idx in &self.blocks {
            let sub = SymMatrix::new(ax.as_matrix().select_rows(idx).select_columns(idx))?;
            let l = linalg::min_eigenvalue(&sub);
            inside &= l >= -psd_tolerance(&sub);
            margin = margin.min(l);
        }
        Ok(Membership { inside, margin })
    }

    /// The recession cone `{x : Ā(x) ⪰ 0}` as a homogeneous pencil.
    pub fn recession(&self) -> Spectrahedron {
        Spectrahedron::new(SymMatrix::zeros(self.m()), self.coeffs.clone())
            .expect("same shape as self")
    }

    /// Trace vector `(trace A_1, ..., trace A_n)`.
    pub fn traces(&self) -> Vec<f64> {
        let id = SymMatrix::identity(self.m());
        self.coeffs.iter().map(|a| linalg::trace_inner(a, &id).expect("same dims")).collect()
    }

    /// Unit vector `w ∝ -(A_1·I, ..., A_n·I)`; strictly negative on
    /// `recc C \ {0}` whenever the recession cone is pointed.
    pub fn polar_interior_direction(&self) -> Result<Vec<f64>> {
        let v: Vec<f64> = self.traces().iter().map(|t| -t).collect();
        let nrm = norm(&v);
        let scale = self.coeffs.iter().map(|a| a.frobenius_norm()).fold(0.0, f64::max);
        if nrm <= 1e-12 * (1.0 + scale) {
            return Err(Error::DegenerateDirection);
        }
        Ok(v.iter().map(|x| x / nrm).collect())
    }

    /// True when `A_1, ..., A_n` are linearly independent (numerical rank test).
    pub fn coefficients_independent(&self) -> bool {
        let m = self.m();
        let cols = DMatrix::from_fn(m * m, self.n(), |r, c| {
            self.coeffs[c].get(r / m, r % m)
        });
        if self.n() > m * m {
            return false;
        }
        let sv = cols.svd(false, false).singular_values;
        let max = sv.iter().copied().fold(0.0, f64::max);
        max > 0.0 && sv.iter().all(|&s| s > 1e-10 * max)
    }

    /// Pull-back `B(y) = A(base + basis·y)` to the chart's coordinates.
    pub fn restrict_to_slice(&self, chart: &SliceChart) -> Result<Spectrahedron> {
        if chart.ambient_dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: chart.ambient_dim() });
        }
        if chart.dim() == 0 {
            return Err(Error::InvalidArgument("slice chart has no free coordinates".into()));
        }
        let a0 = self.evaluate(&chart.base)?;
        let coeffs = (0..chart.dim())
            .map(|j| {
                let col: Vec<f64> = chart.basis.column(j).iter().copied().collect();
                self.linear_unchecked(&col)
            })
            .collect();
        Spectrahedron::new(a0, coeffs)
    }

    /// `C ∩ {x : aᵀx ≥ beta}`, encoded as an extra 1×1 diagonal block.
    pub fn intersect_halfspace(&self, a: &[f64], beta: f64) -> Result<Spectrahedron> {
        self.check_point(a)?;
        if !beta.is_finite() {
            return Err(Error::NonFinite);
        }
        if a.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidArgument("halfspace normal must be nonzero".into()));
        }
        let a0 = self.a0.block_diag(&SymMatrix::diag(&[-beta])?);
        let coeffs = self
            .coeffs
            .iter()
            .zip(a)
            .map(|(ai, &c)| Ok(ai.block_diag(&SymMatrix::diag(&[c])?)))
            .collect::<Result<Vec<_>>>()?;
        Spectrahedron::new(a0, coeffs)
    }
}

/// Affine chart `y ↦ base + basis·y` of a hyperplane `{x : wᵀx = level}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceChart {
    base: Vec<f64>,
    basis: DMatrix<f64>,
}

impl SliceChart {
    /// Chart of `{x : wᵀx = level}` with an orthonormal basis of `w⊥` taken
    /// from a Householder reflection that sends `e_n` to `±w/‖w‖`.
    pub fn for_hyperplane(w: &[f64], level: f64) -> Result<Self> {
        let n = w.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty normal".into()));
        }
        let nrm = norm(w);
        if nrm == 0.0 || !nrm.is_finite() || !level.is_finite() {
            return Err(Error::InvalidArgument("normal must be finite and nonzero".into()));
        }
        let unit = DVector::from_iterator(n, w.iter().map(|x| x / nrm));
        let base: Vec<f64> = unit.iter().map(|x| x * level / nrm).collect();

        // u = e_n + sign(w_n) w avoids cancellation; H = I - 2uuᵀ/uᵀu maps e_n to -sign(w_n) w.
        let sign = if unit[n - 1] >= 0.0 { 1.0 } else { -1.0 };
        let mut u = unit.clone() * sign;
        u[n - 1] += 1.0;
        let h = DMatrix::identity(n, n) - (&u * u.transpose()) * (2.0 / u.norm_squared());
        let basis = h.columns(0, n - 1).into_owned();
        Ok(Self { base, basis })
    }

    /// Chart with identity basis and no offset (the whole space).
    pub fn identity(n: usize) -> Self {
        Self { base: vec![0.0; n], basis: DMatrix::identity(n, n) }
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Number of chart coordinates.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        let y = DVector::from_column_slice(y);
        let x = &self.basis * y;
        x.iter().zip(&self.base).map(|(a, b)| a + b).collect()
    }

    /// Orthogonal projection into chart coordinates.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let diff = DVector::from_iterator(x.len(), x.iter().zip(&self.base).map(|(a, b)| a - b));
        (self.basis.transpose() * diff).iter().copied().collect()
    }
}

/// Connected components of the union sparsity pattern, each sorted.
fn diagonal_blocks(a0: &SymMatrix, coeffs: &[SymMatrix]) -> Vec<Vec<usize>> {
    let m = a0.dim();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for mat in std::iter::once(a0).chain(coeffs) {
        for i in 0..m {
            for j in (i + 1)..m {
                if mat.get(i, j) != 0.0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(i);
    }
    out
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Pencils used throughout the tests and the bundled data files.
pub mod pencils {
    use super::*;

    fn sym(rows: &[[f64; 4]]) -> SymMatrix {
        SymMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// `[[x1,1,0,0],[1,x2,0,0],[0,0,1,x1],[0,0,x1,x2]] ⪰ 0`: the region above
    /// both `1/x` (for `x > 0`) and `x²`.
    pub fn hyperbola_parabola() -> Spectrahedron {
        let a0 = sym(&[[0., 1., 0., 0.], [1., 0., 0., 0.], [0., 0., 1., 0.], [0., 0., 0., 0.]]);
        let a1 = sym(&[[1., 0., 0., 0.], [0., 0., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.]]);
        let a2 = sym(&[[0., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 0., 0.], [0., 0., 0., 1.]]);
        Spectrahedron::new(a0, vec![a1, a2]).unwrap()
    }

    /// Cone of 2×2 PSD matrices `[[x1,x3],[x3,x2]]`.
    pub fn psd2_cone() -> Spectrahedron {
        let a1 = SymMatrix::diag(&[1.0, 0.0]).unwrap();
        let a2 = SymMatrix::diag(&[0.0, 1.0]).unwrap();
        let a3 = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        Spectrahedron::new(SymMatrix::zeros(2), vec![a1, a2, a3]).unwrap()
    }

    /// Unit disk `[[1+x1, x2],[x2, 1-x1]] ⪰ 0`.
    pub fn unit_disk() -> Spectrahedron {
        let a1 = SymMatrix::diag(&[1.0, -1.0]).unwrap();
        let a2 = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        Spectrahedron::new(SymMatrix::identity(2), vec![a1, a2]).unwrap()
    }

    /// Diagonal pencil with rows `lo_i <= x_i <= hi_i`.
    pub fn boxed(lo: &[f64], hi: &[f64]) -> Spectrahedron {
        let n = lo.len();
        let mut a0 = vec![0.0; 2 * n];
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            a0[2 * i] = -lo[i];
            a0[2 * i + 1] = hi[i];
            let mut d = vec![0.0; 2 * n];
            d[2 * i] = 1.0;
            d[2 * i + 1] = -1.0;
            coeffs.push(SymMatrix::diag(&d).unwrap());
        }
        Spectrahedron::new(SymMatrix::diag(&a0).unwrap(), coeffs).unwrap()
    }

    /// Unit square `diag(x1, 1-x1, x2, 1-x2)`.
    pub fn unit_square() -> Spectrahedron {
        boxed(&[0.0, 0.0], &[1.0, 1.0])
    }

    /// Nonnegative orthant `diag(x1, ..., xn)`.
    pub fn orthant(n: usize) -> Spectrahedron {
        shifted_orthant(&vec![0.0; n])
    }

    /// `diag(x1 - s1, ..., xn - sn)`, i.e. `x ≥ s`.
    pub fn shifted_orthant(shift: &[f64]) -> Spectrahedron {
        let n = shift.len();
        let a0 = SymMatrix::diag(&shift.iter().map(|s| -s).collect::<Vec<_>>()).unwrap();
        let coeffs = (0..n)
            .map(|i| {
                let mut d = vec![0.0; n];
                d[i] = 1.0;
                SymMatrix::diag(&d).unwrap()
            })
            .collect();
        Spectrahedron::new(a0, coeffs).unwrap()
    }

    /// The ray `{x1 = 0, x2 ≥ 0}` as `diag(x2, x2, -x1, x1)`.
    pub fn vertical_ray() -> Spectrahedron {
        let a1 = SymMatrix::diag(&[0.0, 0.0, -1.0, 1.0]).unwrap();
        let a2 = SymMatrix::diag(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        Spectrahedron::new(SymMatrix::zeros(4), vec![a1, a2]).unwrap()
    }
}
