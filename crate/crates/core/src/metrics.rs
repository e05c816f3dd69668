//! Distances between convex sets and the self-boundedness diagnostics.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polyc::VRep;
use crate::projection;
use crate::sampling;
use crate::spectra::{norm, Spectrahedron};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    SampledLowerBound,
    CertificateUpperBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub value: f64,
    /// `(from, to)` realizing `value`.
    pub attaining_pair: (Vec<f64>, Vec<f64>),
    pub method: Method,
    /// A certified upper bound, when one is known.
    pub upper_bound: Option<f64>,
}

impl DistanceReport {
    fn exact(value: f64, from: Vec<f64>, to: Vec<f64>) -> Self {
        Self { value, attaining_pair: (from, to), method: Method::Exact, upper_bound: None }
    }
}

/// Euclidean distance from `p` to `Q = conv V + cone D`.
pub fn dist_point_polytope(p: &[f64], q: &VRep) -> Result<DistanceReport> {
    let r = projection::project(p, q.vertices(), q.rays())?;
    Ok(DistanceReport::exact(r.distance, p.to_vec(), r.point))
}

/// Excess `e(P, Q) = sup_{x∈P} dist(x, Q)` for compact `P`; the supremum
/// of the convex distance function sits at a vertex.
pub fn excess(p: &VRep, q: &VRep) -> Result<DistanceReport> {
    if !p.is_compact() {
        return Err(Error::InvalidArgument("excess of an unbounded set needs recession data".into()));
    }
    let mut best = DistanceReport::exact(-1.0, vec![], vec![]);
    for v in p.vertices() {
        let d = dist_point_polytope(v, q)?;
        if d.value > best.value {
            best = d;
        }
    }
    Ok(best)
}

pub fn hausdorff_polytopes(p: &VRep, q: &VRep) -> Result<DistanceReport> {
    if !p.is_compact() || !q.is_compact() {
        return Err(Error::InvalidArgument("Hausdorff distance of polytopes needs compact inputs".into()));
    }
    let a = excess(p, q)?;
    let b = excess(q, p)?;
    Ok(if b.value > a.value { b } else { a })
}

/// Truncated Hausdorff distance between two polyhedral cones given by
/// generators (an empty list is the trivial cone).
///
/// For a unit `x`, `dist(x, K ∩ B) = dist(x, K)`, so each excess is the
/// maximum of `dist(·, K2)` over the spherical cap `K1 ∩ S`. Candidates are
/// the unit generators plus points along the great arcs between them; in the
/// plane the cap is one arc and the maximum sits at an endpoint, so the
/// result is exact there.
pub fn truncated_hausdorff(k1: &[Vec<f64>], k2: &[Vec<f64>]) -> Result<DistanceReport> {
    let n = k1.iter().chain(k2).map(Vec::len).next().ok_or(Error::EmptyInput)?;
    match (k1.is_empty(), k2.is_empty()) {
        (true, true) => return Ok(DistanceReport::exact(0.0, vec![0.0; n], vec![0.0; n])),
        (true, false) | (false, true) => {
            let g = unit(k1.first().or(k2.first()).expect("one side nonempty"));
            return Ok(DistanceReport::exact(1.0, g, vec![0.0; n]));
        }
        _ => {}
    }
    let a = cap_excess(k1, k2, n)?;
    let b = cap_excess(k2, k1, n)?;
    Ok(if b.value > a.value { b } else { a })
}

fn cap_excess(k1: &[Vec<f64>], k2: &[Vec<f64>], n: usize) -> Result<DistanceReport> {
    let gens: Vec<Vec<f64>> = k1.iter().map(|g| unit(g)).collect();
    let mut cands = gens.clone();
    if n > 2 {
        const STEPS: usize = 32;
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                for s in 1..STEPS {
                    let t = s as f64 / STEPS as f64;
                    let mid: Vec<f64> =
                        gens[i].iter().zip(&gens[j]).map(|(a, b)| (1.0 - t) * a + t * b).collect();
                    if norm(&mid) > 1e-12 {
                        cands.push(unit(&mid));
                    }
                }
            }
        }
    }
    let mut best = DistanceReport::exact(-1.0, vec![], vec![]);
    for c in &cands {
        let r = projection::cone_distance(c, k2)?;
        // Unit vectors are within 1 of any cone; clamp rounding.
        let d = r.distance.min(1.0);
        if d > best.value {
            best = DistanceReport::exact(d, c.clone(), r.point);
        }
    }
    if n > 2 {
        best.method = Method::SampledLowerBound;
    }
    Ok(best)
}

/// Lower bound on the truncated Hausdorff distance between the polyhedral
/// cone `cone(k)` and the spectrahedral cone `s` (homogeneous pencil).
///
/// `e(S∩B, K∩B)` is probed with exact projections from the members of `s`
/// among `n_dir` quasi-uniform directions and the extra `anchors`;
/// `e(K∩B, S∩B)` is bounded below at each generator `g` through the
/// certificate `uᵀĀ(x)u ≥ 0` on `S`, where `u` is the bottom eigenvector of
/// `Ā(g)`. `upper` is attached as the constructive bound.
pub fn truncated_hausdorff_spectral(
    k: &[Vec<f64>],
    s: &Spectrahedron,
    n_dir: usize,
    anchors: &[Vec<f64>],
    upper: Option<f64>,
) -> Result<DistanceReport> {
    if !s.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = s.n();
    let mut best = DistanceReport {
        value: 0.0,
        attaining_pair: (vec![0.0; n], vec![0.0; n]),
        method: Method::SampledLowerBound,
        upper_bound: upper,
    };
    let mut consider = |value: f64, from: Vec<f64>, to: Vec<f64>| {
        if value > best.value {
            best.value = value;
            best.attaining_pair = (from, to);
        }
    };
    let dirs = sampling::quasi_uniform_directions(n, n_dir)?;
    for d in dirs.iter().chain(anchors.iter()) {
        if norm(d) <= 1e-12 {
            continue;
        }
        let d = unit(d);
        if !s.contains(&d)?.inside {
            continue;
        }
        let r = if k.is_empty() {
            DistanceReport::exact(1.0, d.clone(), vec![0.0; n])
        } else {
            let p = projection::cone_distance(&d, k)?;
            DistanceReport::exact(p.distance, d.clone(), p.point)
        };
        consider(r.value, d, r.attaining_pair.1);
    }
    for g in k {
        let g = unit(g);
        let ag = s.evaluate_linear(&g)?;
        let (lambda, u) = linalg::min_eigenpair(&ag)?;
        if lambda >= 0.0 {
            continue;
        }
        let a: Vec<f64> = s.coeffs().iter().map(|ai| ai.quad_form(&u)).collect();
        let an = norm(&a);
        if an > 0.0 {
            let gap = -lambda / an;
            let foot: Vec<f64> = g.iter().zip(&a).map(|(x, ai)| x + gap * ai / an).collect();
            consider(gap.min(1.0), g.clone(), foot);
        }
    }
    Ok(best)
}

/// `2(ε + δ(r + ‖x − v‖))`, the Hausdorff bound on `B_r(x)` for an
/// `(ε,δ)`-approximation and a point `v ∈ C`.
pub fn ball_hausdorff_bound(eps: f64, delta: f64, r: f64, x: &[f64], v: &[f64]) -> Result<f64> {
    if r < eps {
        return Err(Error::InvalidArgument(format!("radius {r} is below eps {eps}")));
    }
    if x.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: v.len() });
    }
    let dxv: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    Ok(2.0 * (eps + delta * (r + dxv)))
}

/// `e(P, recc P)`: the largest distance from a vertex to the recession cone.
pub fn exc_over_recession(p: &VRep) -> Result<DistanceReport> {
    let mut best = DistanceReport::exact(-1.0, vec![], vec![]);
    for v in p.vertices() {
        let r = projection::cone_distance(v, p.rays())?;
        if r.distance > best.value {
            best = DistanceReport::exact(r.distance, v.clone(), r.point);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfBoundedness {
    /// `P ⊆ {y} + recc P` for some `y`, with a nontrivial recession cone.
    pub classic: bool,
    /// `P ⊆ K + recc P` for a compact `K`; always true for polyhedra.
    pub extended: bool,
    /// A point `y` certifying the classic property.
    pub witness: Option<Vec<f64>>,
    /// Radius `M` with `B_M(0) + recc P ⊇ P`.
    pub radius: f64,
}

/// Classic and extended self-boundedness of `P = conv V + cone D`.
///
/// Classic holds iff `D` is nonempty and `V - v0 ⊆ span D`: inside that span
/// `cone D` has relative interior, so `y = v0 - t·k` with `k` the sum of
/// the unit generators works for large `t`.
pub fn self_bounded(p: &VRep) -> Result<SelfBoundedness> {
    let radius = exc_over_recession(p)?.value;
    let mut out = SelfBoundedness { classic: false, extended: true, witness: None, radius };
    if p.rays().is_empty() {
        return Ok(out);
    }
    let n = p.n();
    let v0 = &p.vertices()[0];
    let d = DMatrix::from_fn(n, p.rays().len(), |r, c| p.rays()[c][r]);
    let svd = d.svd(true, false);
    let u = svd.u.expect("requested");
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10).count();
    let span = u.columns(0, rank);
    let scale = 1.0 + p.vertices().iter().map(|v| norm(v)).fold(0.0, f64::max);
    for v in p.vertices() {
        let diff = nalgebra::DVector::from_iterator(n, v.iter().zip(v0).map(|(a, b)| a - b));
        let resid = &diff - span * (span.transpose() * &diff);
        if resid.norm() > 1e-9 * scale {
            return Ok(out);
        }
    }
    let k: Vec<f64> = (0..n).map(|i| p.rays().iter().map(|r| r[i]).sum()).collect();
    let mut t = 0.0;
    for _ in 0..200 {
        let y: Vec<f64> = v0.iter().zip(&k).map(|(a, b)| a - t * b).collect();
        let ok = p.vertices().iter().try_fold(true, |acc, v| -> Result<bool> {
            let diff: Vec<f64> = v.iter().zip(&y).map(|(a, b)| a - b).collect();
            Ok(acc && projection::cone_distance(&diff, p.rays())?.distance <= 1e-9 * scale)
        })?;
        if ok {
            out.classic = true;
            out.witness = Some(y);
            return Ok(out);
        }
        t = if t == 0.0 { 1e-3 * scale } else { 2.0 * t };
    }
    Err(Error::NonConvergence("no classic self-boundedness witness found".into()))
}

fn unit(v: &[f64]) -> Vec<f64> {
    let nrm = norm(v);
    v.iter().map(|x| x / nrm).collect()
}
