//! The cutting scheme for compact spectrahedra and the (ε,δ)-approximation
//! driver for unbounded ones.

use std::collections::HashMap;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::psd_tolerance;
use crate::metrics::{self, DistanceReport};
use crate::polyc::{self, lex_cmp, HRep, Polyhedron, VRep};
use crate::projection;
use crate::sampling;
use crate::sdp::{self, PhaseOne, SupportCut};
use crate::spectra::{norm, SliceChart, Spectrahedron};

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxParams {
    pub eps: f64,
    pub delta: f64,
    pub max_iterations: usize,
    /// Seed for the containment sampler only; the construction itself is
    /// deterministic.
    pub seed: u64,
    pub containment_samples: usize,
}

impl ApproxParams {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        let p = Self { eps, delta, max_iterations: 10_000, seed: 0, containment_samples: 1000 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::InvalidArgument("delta must lie in (0, 1]".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuttingOptions {
    pub max_iterations: usize,
}

impl Default for CuttingOptions {
    fn default() -> Self {
        Self { max_iterations: 10_000 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    /// Phase-I, P1 and P2 solves.
    pub sdp_solves: usize,
    pub vertices_final: usize,
    pub iterations: usize,
    pub seconds: f64,
}

impl RunStats {
    fn absorb(&mut self, other: &RunStats) {
        self.sdp_solves += other.sdp_solves;
        self.iterations += other.iterations;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuttingResult {
    pub polytope: VRep,
    /// `t*·‖c − v‖` per vertex of `polytope` (0 for vertices inside `C`).
    pub vertex_bounds: Vec<f64>,
    /// Final `max vertex_bounds`.
    pub kappa: f64,
    /// `κ` before each cut, then the final value.
    pub kappa_history: Vec<f64>,
    pub cuts: Vec<SupportCut>,
    pub center: Vec<f64>,
    /// Boundary points of `C` met by P2 solves.
    pub boundary_points: Vec<Vec<f64>>,
    pub stats: RunStats,
}

/// Outer ε-approximation of a compact spectrahedron with interior.
pub fn cutting_scheme(c: &Spectrahedron, eps: f64, opts: &CuttingOptions) -> Result<CuttingResult> {
    let timer = Instant::now();
    let start = sdp::phase_one(c)?;
    let mut out = cutting_from(c, eps, opts, &start)?;
    out.stats.sdp_solves += 1;
    out.stats.seconds = timer.elapsed().as_secs_f64();
    Ok(out)
}

fn cutting_from(c: &Spectrahedron, eps: f64, opts: &CuttingOptions, start: &PhaseOne) -> Result<CuttingResult> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let n = c.n();
    let mut stats = RunStats::default();

    // Initial simplex from n+1 support problems.
    let mut dirs = vec![vec![-1.0; n]];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        dirs.push(e);
    }
    let mut sols = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    for w in &dirs {
        stats.sdp_solves += 1;
        match sdp::solve_p1(c, w, &start.point) {
            // The barrier stops short of the optimum; its gap bound keeps
            // the simplex a true outer approximation.
            Ok(s) => {
                rhs.push(s.upper_bound);
                sols.push(s.x);
            }
            Err(Error::Unbounded) => return Err(Error::UnboundedInput),
            Err(e) => return Err(e),
        }
    }
    let mut poly = Polyhedron::from_hrep(HRep::new(dirs.clone(), rhs)?)?;
    let mean: Vec<f64> = (0..n).map(|i| sols.iter().map(|x| x[i]).sum::<f64>() / (n + 1) as f64).collect();
    let center = if strictly_inside(c, &mean)? { mean } else { start.point.clone() };

    let mut cache: HashMap<Vec<u64>, (f64, Option<SupportCut>)> = HashMap::new();
    let mut kappa_history = Vec::new();
    let mut cuts = Vec::new();
    let mut boundary_points = Vec::new();
    loop {
        let vertices = poly.vertices();
        let mut bounds = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let key = bits(v);
            if !cache.contains_key(&key) {
                let entry = if c.contains(v)?.inside {
                    (0.0, None)
                } else {
                    stats.sdp_solves += 1;
                    let cut = sdp::solve_p2(c, v, &center)?;
                    boundary_points.push(cut.boundary_point.clone());
                    (cut.step_length(), Some(cut))
                };
                cache.insert(key.clone(), entry);
            }
            bounds.push(cache[&key].0);
        }
        // Largest bound, ties to the lexicographically smallest vertex.
        let worst = (0..vertices.len())
            .max_by(|&a, &b| {
                bounds[a].total_cmp(&bounds[b]).then_with(|| lex_cmp(&vertices[b], &vertices[a]))
            })
            .expect("a polytope has vertices");
        let kappa = bounds[worst];
        kappa_history.push(kappa);
        if kappa <= eps {
            stats.vertices_final = vertices.len();
            return Ok(CuttingResult {
                polytope: VRep::polytope(vertices)?,
                vertex_bounds: bounds,
                kappa,
                kappa_history,
                cuts,
                center,
                boundary_points,
                stats,
            });
        }
        if stats.iterations >= opts.max_iterations {
            return Err(Error::IterationCap(opts.max_iterations));
        }
        stats.iterations += 1;
        let cut = cache[&bits(&vertices[worst])].1.clone().expect("vertices outside C carry a cut");
        let neg: Vec<f64> = cut.normal.iter().map(|x| -x).collect();
        poly.insert_halfspace(&neg, -cut.offset)?;
        let key = bits(&vertices[worst]);
        if poly.vertices().iter().any(|v| bits(v) == key) {
            return Err(Error::NonConvergence("cut did not remove the selected vertex".into()));
        }
        cuts.push(cut);
    }
}

fn strictly_inside(c: &Spectrahedron, x: &[f64]) -> Result<bool> {
    let ax = c.evaluate(x)?;
    Ok(crate::linalg::min_eigenvalue(&ax) > psd_tolerance(&ax))
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCertificate {
    /// Upper bounds on `dist(v, C)` for the vertices of the result.
    pub vertex_bounds: Vec<f64>,
    /// Constructive bound on `d_t(recc P, recc C)`.
    pub cone_delta: f64,
    /// Sampled members of `C` that were checked against `P`.
    pub containment_samples: usize,
    /// Those among them farther than `1e-6` from `P`.
    pub containment_failures: usize,
    pub containment_max_distance: f64,
    pub stats: RunStats,
}

/// The polyhedral cone built from the recession slice.
#[derive(Debug, Clone, PartialEq)]
struct ConeStage {
    w: Vec<f64>,
    generators: Vec<Vec<f64>>,
    cone_delta: f64,
    /// Points of `recc C` found on the slice boundary.
    anchors: Vec<Vec<f64>>,
}

fn cone_stage(c: &Spectrahedron, delta: f64, opts: &CuttingOptions, stats: &mut RunStats) -> Result<ConeStage> {
    if !c.coefficients_independent() {
        // A_1..A_n dependent means Ā(d) = 0 for some d ≠ 0: C contains a line.
        return Err(Error::NotPointed);
    }
    let w = match c.polar_interior_direction() {
        Ok(w) => w,
        // Independent, traceless coefficients: no nonzero PSD Ā(d) exists.
        Err(Error::DegenerateDirection) => return Err(Error::CompactInput),
        Err(e) => return Err(e),
    };
    let n = c.n();
    let chart = SliceChart::for_hyperplane(&w, -(1.0 + delta))?;
    let rec = c.recession();
    let (slice_points, slice_kappa, anchors) = if n == 1 {
        let base = chart.base().to_vec();
        if !rec.contains(&base)?.inside {
            return Err(Error::CompactInput);
        }
        (vec![base.clone()], 0.0, vec![base])
    } else {
        let m = rec.restrict_to_slice(&chart)?;
        if n == 2 {
            stats.sdp_solves += 2;
            match sdp::pencil_interval(&m) {
                Ok(Some((a, b))) => {
                    let pts = vec![chart.lift(&[a]), chart.lift(&[b])];
                    (pts.clone(), 0.0, pts)
                }
                Ok(None) => return Err(Error::CompactInput),
                Err(Error::Unbounded) => return Err(Error::NotPointed),
                Err(e) => return Err(e),
            }
        } else {
            stats.sdp_solves += 1;
            let p1 = sdp::phase_one_margin(&m)?;
            let ax = m.evaluate(&p1.point)?;
            if p1.margin < -1e-6 * (1.0 + ax.frobenius_norm()) {
                return Err(Error::CompactInput);
            }
            if p1.margin <= psd_tolerance(&ax) {
                return Err(Error::NoInterior);
            }
            let res = match cutting_from(&m, delta / 2.0, opts, &p1) {
                Err(Error::UnboundedInput) => return Err(Error::NotPointed),
                r => r?,
            };
            stats.absorb(&res.stats);
            let pts: Vec<Vec<f64>> = res.polytope.vertices().iter().map(|y| chart.lift(y)).collect();
            let anchors = res.boundary_points.iter().map(|y| chart.lift(y)).collect();
            (pts, res.kappa, anchors)
        }
    };
    let slice = polyc::minkowski_l1(&VRep::polytope(slice_points)?, delta / 2.0)?;
    let generators = polyc::conical_hull(slice.vertices())?;
    // The slice is within slice_kappa + δ/2 of M and every point of it has norm ≥ 1.
    Ok(ConeStage { w, generators, cone_delta: slice_kappa + delta / 2.0, anchors })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdaResult {
    /// `P = P̄ + K`.
    pub polyhedron: VRep,
    pub certificate: ApproxCertificate,
    /// The compact part `P̄`.
    pub compact_part: VRep,
    pub cone_facets: HRep,
    /// Polar interior direction used for the slice and the truncation.
    pub w: Vec<f64>,
    /// Truncation level: `C̄ = C ∩ {wᵀx ≥ beta}`.
    pub beta: f64,
    pub kappa_history: Vec<f64>,
}

/// (ε,δ)-approximation of an unbounded, line-free spectrahedron.
pub fn eda_approximation(c: &Spectrahedron, params: &ApproxParams) -> Result<EdaResult> {
    params.validate()?;
    let timer = Instant::now();
    let opts = CuttingOptions { max_iterations: params.max_iterations };
    let mut stats = RunStats::default();
    let stage = cone_stage(c, params.delta, &opts, &mut stats)?;
    let facets = polyc::cone_facets(&stage.generators)?;

    stats.sdp_solves += 1;
    let start = sdp::phase_one(c)?;
    let mut level = f64::INFINITY;
    let mut support_points = vec![start.point.clone()];
    for r in facets.rows() {
        stats.sdp_solves += 1;
        let sol = match sdp::solve_p1(c, r, &start.point) {
            Ok(s) => s,
            Err(Error::Unbounded) => return Err(Error::NotPointed),
            Err(e) => return Err(e),
        };
        level = level.min(sdp::dot(&stage.w, &sol.x));
        support_points.push(sol.x);
    }
    let beta = level - params.eps;
    let cbar = c.intersect_halfspace(&stage.w, beta)?;
    stats.sdp_solves += 1;
    let start_bar = sdp::phase_one(&cbar)?;
    let inner = cutting_from(&cbar, params.eps, &opts, &start_bar)?;
    stats.absorb(&inner.stats);

    let polyhedron = polyc::sum_with_cone(&inner.polytope, &stage.generators)?;
    let vertex_bounds = polyhedron
        .vertices()
        .iter()
        .map(|v| {
            let i = inner.polytope.vertices().iter().position(|u| u == v).expect("vertices of P come from P̄");
            inner.vertex_bounds[i]
        })
        .collect();
    stats.vertices_final = polyhedron.vertices().len();

    let mut anchors = support_points;
    anchors.extend(inner.boundary_points.iter().cloned());
    let rays: Vec<Vec<f64>> = stage.anchors.iter().map(|d| unit(d)).collect();
    let (checked, failures, worst) =
        validate_containment(c, &polyhedron, &anchors, &rays, params.containment_samples, params.seed)?;
    stats.seconds = timer.elapsed().as_secs_f64();
    Ok(EdaResult {
        certificate: ApproxCertificate {
            vertex_bounds,
            cone_delta: stage.cone_delta,
            containment_samples: checked,
            containment_failures: failures,
            containment_max_distance: worst,
            stats,
        },
        polyhedron,
        compact_part: inner.polytope,
        cone_facets: facets,
        w: stage.w,
        beta,
        kappa_history: inner.kappa_history,
    })
}

/// Samples members of `c` and measures their distance to `p`.
///
/// Half of the samples are drawn by rejection from a box around the anchor
/// points; the rest are those samples pushed along recession directions,
/// which keeps them in `c` and probes the unbounded part.
fn validate_containment(
    c: &Spectrahedron,
    p: &VRep,
    anchors: &[Vec<f64>],
    rays: &[Vec<f64>],
    count: usize,
    seed: u64,
) -> Result<(usize, usize, f64)> {
    if count == 0 {
        return Ok((0, 0, 0.0));
    }
    let n = c.n();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for a in anchors {
        for i in 0..n {
            lo[i] = lo[i].min(a[i]);
            hi[i] = hi[i].max(a[i]);
        }
    }
    let span = (0..n).map(|i| hi[i] - lo[i]).fold(0.0, f64::max).max(1.0);
    for i in 0..n {
        lo[i] -= 0.25 * span;
        hi[i] += 0.25 * span;
    }
    let mut samples = sampling::rejection_sample(c, &lo, &hi, count.div_ceil(2), 400 * count, seed)?;
    samples.extend(anchors.iter().filter(|a| c.contains(a).map(|m| m.inside).unwrap_or(false)).cloned());
    let mut rng = StdRng::seed_from_u64(seed.wrapping_add(1));
    let base = samples.clone();
    while !rays.is_empty() && !base.is_empty() && samples.len() < count {
        let x = &base[rng.random_range(0..base.len())];
        let d = &rays[rng.random_range(0..rays.len())];
        let t = rng.random_range(0.0..10.0 * span);
        let y: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + t * b).collect();
        if c.contains(&y)?.inside {
            samples.push(y);
        }
    }
    samples.truncate(count);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for x in &samples {
        let d = projection::distance(x, p.vertices(), p.rays())?;
        worst = worst.max(d);
        if d > 1e-6 {
            failures += 1;
        }
    }
    Ok((samples.len(), failures, worst))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeApproximation {
    /// Unit generators of `K`.
    pub generators: Vec<Vec<f64>>,
    pub facets: HRep,
    /// Constructive bound on `d_t(K, C)`.
    pub cone_delta: f64,
    /// Sampled lower bound on `d_t(K, C)`.
    pub lower_bound: DistanceReport,
    pub stats: RunStats,
}

/// Polyhedral outer approximation of a spectrahedral cone (`A0 = 0`).
pub fn cone_approximation(c: &Spectrahedron, delta: f64, opts: &CuttingOptions) -> Result<ConeApproximation> {
    if !c.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument("delta must lie in (0, 1]".into()));
    }
    let timer = Instant::now();
    let mut stats = RunStats::default();
    let stage = cone_stage(c, delta, opts, &mut stats)?;
    let facets = polyc::cone_facets(&stage.generators)?;
    let lower_bound =
        metrics::truncated_hausdorff_spectral(&stage.generators, c, 10_000, &stage.anchors, Some(stage.cone_delta))?;
    stats.vertices_final = stage.generators.len();
    stats.seconds = timer.elapsed().as_secs_f64();
    Ok(ConeApproximation { generators: stage.generators, facets, cone_delta: stage.cone_delta, lower_bound, stats })
}

fn unit(v: &[f64]) -> Vec<f64> {
    let nrm = norm(v);
    v.iter().map(|x| x / nrm).collect()
}
