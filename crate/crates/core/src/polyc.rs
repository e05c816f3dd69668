//! Polyhedral calculus in floating point.
//!
//! Polyhedra are kept in both representations. Halfspace insertion runs one
//! double-description step on the homogenization
//! `{(x0, x) : x0 ≥ 0, b x0 - A x ≥ 0}`, whose extreme rays are `(1, v)` for
//! the vertices and `(0, d)` for the recession directions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::projection;
use crate::spectra::norm;

/// Relative tolerance for "on the hyperplane" decisions.
const ZERO_TOL: f64 = 1e-9;
/// Tolerance for merging generators and rows.
const MERGE_TOL: f64 = 1e-9;

/// `{x : A x ≤ b}` with unit-length rows.
#[derive(Debug, Clone, PartialEq)]
pub struct HRep {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl HRep {
    /// Normalizes every row to unit length and drops repeated rows.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
        }
        let n = a.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut out = HRep { a: Vec::new(), b: Vec::new() };
        for (row, beta) in a.into_iter().zip(b) {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            out.push(&row, beta)?;
        }
        Ok(out)
    }

    /// Adds a row unless it repeats one already present; returns the
    /// normalized row.
    fn push(&mut self, row: &[f64], beta: f64) -> Result<(Vec<f64>, f64, bool)> {
        if row.iter().any(|v| !v.is_finite()) || !beta.is_finite() {
            return Err(Error::NonFinite);
        }
        let nrm = norm(row);
        if nrm == 0.0 {
            return Err(Error::InvalidArgument("zero row in halfspace description".into()));
        }
        let unit: Vec<f64> = row.iter().map(|v| v / nrm).collect();
        let beta = beta / nrm;
        let dup = self.a.iter().zip(&self.b).any(|(r, &c)| {
            (c - beta).abs() <= MERGE_TOL * (1.0 + beta.abs())
                && r.iter().zip(&unit).all(|(x, y)| (x - y).abs() <= MERGE_TOL)
        });
        if !dup {
            self.a.push(unit.clone());
            self.b.push(beta);
        }
        Ok((unit, beta, !dup))
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a[0].len()
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Largest violation `max(aᵀx - b)`, negative when strictly inside.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(r, b)| dot(r, x) - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.max_violation(x) <= tol
    }
}

/// `conv V + cone D` with unit-length directions.
#[derive(Debug, Clone, PartialEq)]
pub struct VRep {
    vertices: Vec<Vec<f64>>,
    rays: Vec<Vec<f64>>,
}

impl VRep {
    pub fn new(vertices: Vec<Vec<f64>>, rays: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.first().ok_or(Error::EmptyInput)?.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some(bad) = vertices.iter().chain(&rays).find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        if vertices.iter().chain(&rays).flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let rays = rays.iter().map(|d| unit(d)).collect::<Result<Vec<_>>>()?;
        for (i, d) in rays.iter().enumerate() {
            if rays[i + 1..].iter().any(|e| d.iter().zip(e).all(|(x, y)| (x + y).abs() <= MERGE_TOL)) {
                return Err(Error::NotPointed);
            }
        }
        Ok(Self { vertices, rays })
    }

    /// A compact polytope.
    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(vertices, Vec::new())
    }

    /// The cone generated by `rays`, with the origin as its only vertex.
    pub fn cone(n: usize, rays: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(vec![vec![0.0; n]], rays)
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn n(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn is_compact(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn distance(&self, p: &[f64]) -> Result<f64> {
        projection::distance(p, &self.vertices, &self.rays)
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> Result<bool> {
        Ok(self.distance(p)? <= tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scaling {
    /// First coordinate is the homogenizing variable.
    Homogenized,
    Unit,
}

/// Extreme rays of a pointed cone `{g : hᵀg ≥ 0 for all rows h}`, updated
/// one row at a time.
#[derive(Debug, Clone, PartialEq)]
struct DdCone {
    dim: usize,
    rows: Vec<DVector<f64>>,
    gens: Vec<DVector<f64>>,
    scaling: Scaling,
}

impl DdCone {
    fn new(dim: usize, rows: &[DVector<f64>], scaling: Scaling) -> Result<Self> {
        // Greedy independent subset, in input order.
        let mut basis: Vec<usize> = Vec::new();
        let mut q: Vec<DVector<f64>> = Vec::new();
        for (i, h) in rows.iter().enumerate() {
            let mut r = h.clone();
            for e in &q {
                r -= e * e.dot(&r);
            }
            if r.norm() > 1e-9 * h.norm() {
                q.push(&r / r.norm());
                basis.push(i);
                if basis.len() == dim {
                    break;
                }
            }
        }
        if basis.len() < dim {
            // The cone contains a line.
            return Err(Error::NotPointed);
        }
        let hb = DMatrix::from_fn(dim, dim, |r, c| rows[basis[r]][c]);
        let inv = hb.try_inverse().ok_or(Error::NotPointed)?;
        let mut cone = DdCone {
            dim,
            rows: basis.iter().map(|&i| rows[i].clone()).collect(),
            gens: Vec::new(),
            scaling,
        };
        cone.gens = (0..dim).filter_map(|c| cone.normalize(inv.column(c).into_owned())).collect();
        for (i, h) in rows.iter().enumerate() {
            if !basis.contains(&i) {
                cone.insert(h.clone())?;
            }
        }
        Ok(cone)
    }

    fn normalize(&self, mut g: DVector<f64>) -> Option<DVector<f64>> {
        let nrm = g.norm();
        if nrm <= 1e-300 || !nrm.is_finite() {
            return None;
        }
        match self.scaling {
            Scaling::Unit => Some(g / nrm),
            Scaling::Homogenized => {
                if g[0] > 1e-12 * nrm {
                    let g0 = g[0];
                    g /= g0;
                    g[0] = 1.0;
                    Some(g)
                } else {
                    g[0] = 0.0;
                    let rest = g.norm();
                    (rest > 1e-300).then(|| g / rest)
                }
            }
        }
    }

    fn is_zero(h: &DVector<f64>, g: &DVector<f64>, s: f64) -> bool {
        s.abs() <= ZERO_TOL * (1.0 + h.norm() * g.norm())
    }

    fn incidence(&self, g: &DVector<f64>) -> Vec<bool> {
        self.rows.iter().map(|h| Self::is_zero(h, g, h.dot(g))).collect()
    }

    fn rank_of(&self, rows: &[usize]) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let m = DMatrix::from_fn(rows.len(), self.dim, |r, c| {
            let h = &self.rows[rows[r]];
            h[c] / h.norm()
        });
        let sv = m.svd(false, false).singular_values;
        sv.iter().filter(|&&s| s > 1e-9).count()
    }

    fn insert(&mut self, h: DVector<f64>) -> Result<()> {
        let slacks: Vec<f64> = self.gens.iter().map(|g| h.dot(g)).collect();
        let class: Vec<i8> = self
            .gens
            .iter()
            .zip(&slacks)
            .map(|(g, &s)| {
                if Self::is_zero(&h, g, s) {
                    0
                } else if s > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        if class.iter().all(|&c| c >= 0) {
            self.rows.push(h);
            return Ok(());
        }
        let incid: Vec<Vec<bool>> = self.gens.iter().map(|g| self.incidence(g)).collect();
        let mut fresh = Vec::new();
        for p in (0..self.gens.len()).filter(|&i| class[i] > 0) {
            for q in (0..self.gens.len()).filter(|&i| class[i] < 0) {
                let common: Vec<usize> =
                    (0..self.rows.len()).filter(|&j| incid[p][j] && incid[q][j]).collect();
                if common.len() + 2 < self.dim || self.rank_of(&common) != self.dim - 2 {
                    continue;
                }
                let g = &self.gens[q] * slacks[p] - &self.gens[p] * slacks[q];
                if let Some(g) = self.normalize(g) {
                    fresh.push(g);
                }
            }
        }
        let mut gens: Vec<DVector<f64>> =
            self.gens.iter().zip(&class).filter(|(_, &c)| c >= 0).map(|(g, _)| g.clone()).collect();
        for g in fresh {
            let dup = gens.iter().any(|e| (e - &g).amax() <= MERGE_TOL * (1.0 + g.amax()));
            if !dup {
                gens.push(g);
            }
        }
        self.gens = gens;
        self.rows.push(h);
        Ok(())
    }
}

/// A polyhedron held in both representations.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    hrep: HRep,
    cone: DdCone,
}

impl Polyhedron {
    /// Vertex/ray enumeration of `{x : A x ≤ b}`; the set must be nonempty
    /// and line-free.
    pub fn from_hrep(hrep: HRep) -> Result<Self> {
        let n = hrep.n();
        let mut rows = vec![DVector::from_fn(n + 1, |i, _| if i == 0 { 1.0 } else { 0.0 })];
        rows.extend(hrep.a.iter().zip(&hrep.b).map(|(a, b)| homogenize(a, *b)));
        let cone = DdCone::new(n + 1, &rows, Scaling::Homogenized)?;
        let p = Polyhedron { hrep, cone };
        if p.vertices().is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.hrep.n()
    }

    pub fn hrep(&self) -> &HRep {
        &self.hrep
    }

    pub fn vertices(&self) -> Vec<Vec<f64>> {
        self.cone.gens.iter().filter(|g| g[0] == 1.0).map(|g| g.as_slice()[1..].to_vec()).collect()
    }

    pub fn rays(&self) -> Vec<Vec<f64>> {
        self.cone.gens.iter().filter(|g| g[0] == 0.0).map(|g| g.as_slice()[1..].to_vec()).collect()
    }

    pub fn vrep(&self) -> VRep {
        VRep { vertices: self.vertices(), rays: self.rays() }
    }

    /// Restricts to `{x : aᵀx ≤ beta}`. On error the polyhedron is unchanged.
    pub fn insert_halfspace(&mut self, a: &[f64], beta: f64) -> Result<()> {
        if a.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: a.len() });
        }
        let mut hrep = self.hrep.clone();
        let (unit, b, added) = hrep.push(a, beta)?;
        if !added {
            return Ok(());
        }
        let mut cone = self.cone.clone();
        cone.insert(homogenize(&unit, b))?;
        let next = Polyhedron { hrep, cone };
        if next.vertices().is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        *self = next;
        Ok(())
    }
}

fn homogenize(a: &[f64], b: f64) -> DVector<f64> {
    DVector::from_fn(a.len() + 1, |i, _| if i == 0 { b } else { -a[i - 1] })
}

/// Facets `{x : R x ≤ 0}` of the pointed, full-dimensional cone generated by
/// `generators`.
pub fn cone_facets(generators: &[Vec<f64>]) -> Result<HRep> {
    let gens = generators.iter().map(|g| unit(g)).collect::<Result<Vec<_>>>()?;
    let n = gens.first().ok_or(Error::EmptyInput)?.len();
    if gens.iter().any(|g| g.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: 0 });
    }
    if !is_pointed(&gens)? {
        return Err(Error::NotPointed);
    }
    // Extreme rays of the polar cone {r : gᵀr ≤ 0} are the facet normals.
    let rows: Vec<DVector<f64>> = gens.iter().map(|g| -DVector::from_column_slice(g)).collect();
    let polar = DdCone::new(n, &rows, Scaling::Unit).map_err(|e| match e {
        Error::NotPointed => Error::InvalidArgument("cone is not full-dimensional".into()),
        e => e,
    })?;
    let a: Vec<Vec<f64>> = polar.gens.iter().map(|r| r.iter().copied().collect()).collect();
    let zeros = vec![0.0; a.len()];
    HRep::new(a, zeros)
}

/// True when `0 ∉ conv(generators/‖·‖)`, i.e. the cone contains no line.
pub fn is_pointed(generators: &[Vec<f64>]) -> Result<bool> {
    if generators.is_empty() {
        return Ok(true);
    }
    let gens = generators.iter().map(|g| unit(g)).collect::<Result<Vec<_>>>()?;
    let n = gens[0].len();
    Ok(projection::distance(&vec![0.0; n], &gens, &[])? > 1e-9)
}

/// Unit generators of `cone(points)` with redundant ones removed. Among
/// nearly parallel inputs the lexicographically smallest is kept.
pub fn conical_hull(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut gens = points.iter().map(|g| unit(g)).collect::<Result<Vec<_>>>()?;
    gens.sort_by(|a, b| lex_cmp(a, b));
    dedup_points(&mut gens);
    let mut i = 0;
    while i < gens.len() {
        let others: Vec<Vec<f64>> =
            gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        let redundant = !others.is_empty()
            && projection::cone_distance(&gens[i], &others)?.distance <= 1e-9;
        if redundant {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(gens)
}

/// Vertices of `conv V + {x : ‖x‖₁ ≤ rho}`.
pub fn minkowski_l1(p: &VRep, rho: f64) -> Result<VRep> {
    if !p.is_compact() {
        return Err(Error::InvalidArgument("Minkowski sum needs a compact polytope".into()));
    }
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument("ball radius must be nonnegative".into()));
    }
    let n = p.n();
    let mut cands = Vec::new();
    if rho == 0.0 {
        cands.extend(p.vertices.iter().cloned());
    } else {
        for v in &p.vertices {
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut c = v.clone();
                    c[i] += s * rho;
                    cands.push(c);
                }
            }
        }
    }
    VRep::polytope(extreme_points(cands, &[])?)
}

/// `Pbar + cone(generators)`, keeping only the vertices of `Pbar` that stay
/// extreme in the sum.
pub fn sum_with_cone(pbar: &VRep, generators: &[Vec<f64>]) -> Result<VRep> {
    if !pbar.is_compact() {
        return Err(Error::InvalidArgument("expected a compact polytope".into()));
    }
    if generators.is_empty() {
        return Ok(pbar.clone());
    }
    let rays = generators.iter().map(|g| unit(g)).collect::<Result<Vec<_>>>()?;
    if !is_pointed(&rays)? {
        return Err(Error::NotPointed);
    }
    let vertices = extreme_points(pbar.vertices.clone(), &rays)?;
    VRep::new(vertices, rays)
}

/// Drops points lying in `conv(others) + cone(rays)`.
fn extreme_points(mut pts: Vec<Vec<f64>>, rays: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    dedup_points(&mut pts);
    let scale = 1.0 + pts.iter().map(|p| norm(p)).fold(0.0, f64::max);
    let mut i = 0;
    while i < pts.len() {
        let others: Vec<Vec<f64>> =
            pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        let redundant =
            !others.is_empty() && projection::distance(&pts[i], &others, rays)? <= 1e-10 * scale;
        if redundant {
            pts.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(pts)
}

/// Boundary points and boundary rays of a planar polyhedron.
pub type PlanarBoundary = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Boundary of a planar polyhedron in counterclockwise order.
///
/// Returns the extreme points along the boundary and the boundary rays: for
/// an unbounded set the first ray is the one the boundary arrives along at
/// the first point, the last the one it leaves along from the last point
/// (a single entry when they coincide).
pub fn planar_boundary(p: &VRep) -> Result<PlanarBoundary> {
    if p.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: p.n() });
    }
    let rays = if p.rays().is_empty() { vec![] } else { conical_hull(p.rays())? };
    let pts = extreme_points(p.vertices().to_vec(), &rays)?;
    if rays.is_empty() {
        let mut hull = convex_hull_2d(pts.into_iter().map(|v| (v, ())).collect());
        // Start at the lexicographically smallest point.
        let first = (0..hull.len()).min_by(|&a, &b| lex_cmp(&hull[a].0, &hull[b].0)).unwrap_or(0);
        hull.rotate_left(first);
        return Ok((hull.into_iter().map(|(v, _)| v).collect(), vec![]));
    }
    // Every point is extreme, so any positive reach keeps them on the hull.
    let reach = 1.0 + pts.iter().map(|v| norm(v)).fold(0.0, f64::max) * 2.0;
    let mut cloud: Vec<(Vec<f64>, Option<usize>)> = pts.iter().map(|v| (v.clone(), None)).collect();
    for v in &pts {
        for (k, d) in rays.iter().enumerate() {
            cloud.push((vec![v[0] + reach * d[0], v[1] + reach * d[1]], Some(k)));
        }
    }
    let mut hull = convex_hull_2d(cloud);
    // Rotate so the far points form the tail of the cycle.
    let len = hull.len();
    let start = (0..len)
        .find(|&i| hull[i].1.is_none() && hull[(i + len - 1) % len].1.is_some())
        .unwrap_or(0);
    hull.rotate_left(start);
    let incoming = hull[len - 1].1;
    let chain: Vec<Vec<f64>> = hull.iter().take_while(|(_, r)| r.is_none()).map(|(v, _)| v.clone()).collect();
    let outgoing = hull.get(chain.len()).and_then(|(_, r)| *r);
    let mut out_rays = Vec::new();
    for k in [incoming, outgoing].into_iter().flatten() {
        if !out_rays.contains(&rays[k]) {
            out_rays.push(rays[k].clone());
        }
    }
    Ok((chain, out_rays))
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
fn convex_hull_2d<T: Clone>(mut pts: Vec<(Vec<f64>, T)>) -> Vec<(Vec<f64>, T)> {
    pts.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts.iter().map(|(v, _)| norm(v)).fold(1.0, f64::max);
    let tol = 1e-12 * scale * scale;
    let cross = |o: &[f64], a: &[f64], b: &[f64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<(Vec<f64>, T)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let floor = hull.len() + 2;
        let iter: Box<dyn Iterator<Item = &(Vec<f64>, T)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= floor
                && cross(&hull[hull.len() - 2].0, &hull[hull.len() - 1].0, &p.0) <= tol
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

fn dedup_points(pts: &mut Vec<Vec<f64>>) {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    for p in pts.drain(..) {
        let tol = MERGE_TOL * (1.0 + norm(&p));
        if !out.iter().any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).abs() <= tol)) {
            out.push(p);
        }
    }
    *pts = out;
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn unit(v: &[f64]) -> Result<Vec<f64>> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let nrm = norm(v);
    if nrm == 0.0 {
        return Err(Error::InvalidArgument("zero direction".into()));
    }
    Ok(v.iter().map(|x| x / nrm).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
