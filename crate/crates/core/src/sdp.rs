//! Solvers for the two subproblem families of the cutting scheme.
//!
//! `solve_p1` maximises a linear function over a spectrahedron with a
//! log-det barrier path-following method. `solve_p2` walks from an outside
//! point `v` towards an interior point `c` until the boundary is hit and
//! recovers the supporting hyperplane from the kernel of `A(x*)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, psd_tolerance, SymMatrix};
use crate::spectra::{SliceChart, Spectrahedron};
use crate::TAU_BOUNDARY;

#[derive(Debug, Clone)]
pub struct BarrierOptions {
    pub mu0: f64,
    pub mu_factor: f64,
    /// Stop when `m / mu` drops below this.
    pub gap_tol: f64,
    /// Newton decrement tolerance (on `λ²/2`).
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Iterates beyond this norm signal an unbounded objective.
    pub divergence_radius: f64,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self {
            mu0: 1.0,
            mu_factor: 10.0,
            gap_tol: 1e-7,
            newton_tol: 1e-9,
            max_newton: 200,
            divergence_radius: 1e8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct P1Solution {
    pub x: Vec<f64>,
    /// `wᵀx` at the returned point.
    pub value: f64,
    /// `value + m/mu`, an upper bound on the true maximum.
    pub upper_bound: f64,
}

/// A strictly feasible point found by the phase-I problem.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOne {
    pub point: Vec<f64>,
    /// Smallest eigenvalue of `A(point)`.
    pub margin: f64,
}

/// A supporting halfspace `{x : normalᵀx ≥ offset}` of `C` obtained from
/// the boundary hit along `v + t d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportCut {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub boundary_point: Vec<f64>,
    pub t_star: f64,
    pub v: Vec<f64>,
    pub d: Vec<f64>,
    /// Objective of the recovered dual solution, `-A(v)·U*`.
    pub dual_objective: f64,
}

impl SupportCut {
    /// Euclidean length of the step from `v` to the boundary, `t*‖d‖`.
    pub fn step_length(&self) -> f64 {
        self.t_star * dot(&self.d, &self.d).sqrt()
    }

    /// Signed slack `normalᵀx - offset` (nonnegative on `C`).
    pub fn slack(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

struct Pencil<'a> {
    c: &'a Spectrahedron,
    /// Proximal term `mu·rho·‖x[..k]‖²/2`, given as `(k, rho)`; it scales
    /// with `mu` so the path tracks `max wᵀx - rho‖x‖²/2`.
    prox: Option<(usize, f64)>,
}

struct Eval {
    phi: f64,
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

impl Pencil<'_> {
    fn cholesky(&self, x: &[f64]) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
        let a = self.c.evaluate(x).ok()?;
        a.as_matrix().clone().cholesky()
    }

    fn phi(&self, w: &[f64], mu: f64, x: &[f64]) -> Option<f64> {
        let chol = self.cholesky(x)?;
        let logdet: f64 = chol.l_dirty().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
        Some(-mu * dot(w, x) - logdet + self.prox_value(mu, x))
    }

    fn prox_value(&self, mu: f64, x: &[f64]) -> f64 {
        match self.prox {
            Some((k, rho)) => 0.5 * mu * rho * x[..k].iter().map(|v| v * v).sum::<f64>(),
            None => 0.0,
        }
    }

    fn eval(&self, w: &[f64], mu: f64, x: &[f64]) -> Option<Eval> {
        let chol = self.cholesky(x)?;
        let l = chol.l();
        let logdet: f64 = l.diagonal().iter().map(|d| 2.0 * d.ln()).sum();
        let n = self.c.n();
        // B_i = L⁻¹ A_i L⁻ᵀ so that tr(A⁻¹A_i) = tr(B_i) and tr(A⁻¹A_iA⁻¹A_j) = <B_i, B_j>.
        let scaled: Vec<DMatrix<f64>> = self
            .c
            .coeffs()
            .iter()
            .map(|ai| {
                let y = l.solve_lower_triangular(ai.as_matrix()).expect("nonsingular factor");
                l.solve_lower_triangular(&y.transpose()).expect("nonsingular factor")
            })
            .collect();
        let mut grad = DVector::from_fn(n, |i, _| -mu * w[i] - scaled[i].trace());
        let mut hess = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let h = scaled[i].dot(&scaled[j]);
                hess[(i, j)] = h;
                hess[(j, i)] = h;
            }
        }
        if let Some((k, rho)) = self.prox {
            for i in 0..k {
                grad[i] += mu * rho * x[i];
                hess[(i, i)] += mu * rho;
            }
        }
        Some(Eval { phi: -mu * dot(w, x) - logdet + self.prox_value(mu, x), grad, hess })
    }
}

fn newton_direction(hess: &DMatrix<f64>, grad: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = 1.0 + hess.diagonal().iter().map(|d| d.abs()).fold(0.0, f64::max);
    let mut ridge = 0.0;
    for _ in 0..8 {
        let mut h = hess.clone();
        for i in 0..h.nrows() {
            h[(i, i)] += ridge;
        }
        if let Some(ch) = h.cholesky() {
            let step = ch.solve(&(-grad));
            if step.iter().all(|v| v.is_finite()) {
                return Some(step);
            }
        }
        ridge = if ridge == 0.0 { 1e-14 * scale } else { ridge * 100.0 };
    }
    None
}

enum CenterOutcome {
    Centered(Vec<f64>),
    Stopped(Vec<f64>),
}

fn center(
    pencil: &Pencil,
    w: &[f64],
    mu: f64,
    mut x: Vec<f64>,
    opts: &BarrierOptions,
    early_stop: &dyn Fn(&[f64]) -> bool,
) -> Result<CenterOutcome> {
    for _ in 0..opts.max_newton {
        let ev = pencil.eval(w, mu, &x).ok_or(Error::InfeasibleStart)?;
        let step = newton_direction(&ev.hess, &ev.grad)
            .ok_or_else(|| Error::NonConvergence("singular barrier Hessian".into()))?;
        let slope = ev.grad.dot(&step);
        // Below the rounding level of phi no step can make measurable progress.
        if -slope / 2.0 <= opts.newton_tol.max(1e-13 * ev.phi.abs()) {
            return Ok(CenterOutcome::Centered(x));
        }
        let mut s = 1.0;
        let mut accepted = None;
        while s > 1e-20 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + s * b).collect();
            if trial == x {
                // The step is below the resolution of x.
                break;
            }
            if let Some(p) = pencil.phi(w, mu, &trial) {
                if p <= ev.phi + 0.25 * s * slope {
                    accepted = Some(trial);
                    break;
                }
            }
            s *= 0.5;
        }
        match accepted {
            Some(next) => x = next,
            // No progress possible in floating point: the iterate is as centred as it gets.
            None => return Ok(CenterOutcome::Centered(x)),
        }
        if early_stop(&x) {
            return Ok(CenterOutcome::Stopped(x));
        }
        if dot(&x, &x).sqrt() > opts.divergence_radius {
            return Err(Error::Unbounded);
        }
    }
    Err(Error::NonConvergence("barrier centering exceeded the Newton iteration cap".into()))
}

fn barrier_path(
    pencil: &Pencil,
    w: &[f64],
    start: &[f64],
    opts: &BarrierOptions,
    early_stop: &dyn Fn(&[f64]) -> bool,
) -> Result<(Vec<f64>, f64)> {
    let c = pencil.c;
    let m = c.m() as f64;
    let mut mu = opts.mu0;
    let mut x = start.to_vec();
    loop {
        match center(pencil, w, mu, x, opts, early_stop)? {
            CenterOutcome::Stopped(p) => return Ok((p, f64::INFINITY)),
            CenterOutcome::Centered(p) => x = p,
        }
        if early_stop(&x) {
            return Ok((x, f64::INFINITY));
        }
        if m / mu <= opts.gap_tol {
            return Ok((x, m / mu));
        }
        mu *= opts.mu_factor;
    }
}

/// Maximise `wᵀx` over `C` starting from a strictly feasible point.
pub fn solve_p1(c: &Spectrahedron, w: &[f64], start: &[f64]) -> Result<P1Solution> {
    solve_p1_with(c, w, start, &BarrierOptions::default())
}

pub fn solve_p1_with(
    c: &Spectrahedron,
    w: &[f64],
    start: &[f64],
    opts: &BarrierOptions,
) -> Result<P1Solution> {
    if w.len() != c.n() {
        return Err(Error::DimensionMismatch { expected: c.n(), got: w.len() });
    }
    if w.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidArgument("objective direction must be nonzero".into()));
    }
    if c.contains(start)?.margin <= 0.0 {
        return Err(Error::InfeasibleStart);
    }
    let (x, gap) = match barrier_path(&Pencil { c, prox: None }, w, start, opts, &|_| false) {
        Ok(r) => r,
        // Along curved boundaries the iterates can creep off to infinity far too
        // slowly to reach the divergence radius; decide from the recession cone.
        Err(e @ (Error::NonConvergence(_) | Error::Unbounded)) => {
            return match improving_recession(c, w) {
                Ok(true) => Err(Error::Unbounded),
                _ => Err(e),
            };
        }
        Err(e) => return Err(e),
    };
    let value = dot(w, &x);
    Ok(P1Solution { x, value, upper_bound: value + gap })
}

/// Does `recc C` contain a direction `d` with `wᵀd ≥ 0`, `d ≠ 0`?
///
/// Nonzero directions of a pointed recession cone are normalised by
/// `trace Ā(d) = 1`; the resulting slice is compact, and its maximum of
/// `wᵀd` is estimated on a slightly relaxed copy so that slices without
/// interior (e.g. a single ray) are still handled by the barrier.
fn improving_recession(c: &Spectrahedron, w: &[f64]) -> Result<bool> {
    let wn = dot(w, w).sqrt();
    if !c.coefficients_independent() {
        // Directions with Ā(d) = 0 are lines in C.
        let m = c.m();
        let cols = DMatrix::from_fn(m * m, c.n(), |r, j| c.coeffs()[j].get(r / m, r % m));
        let svd = cols.svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        for (k, sv) in svd.singular_values.iter().enumerate() {
            let d: Vec<f64> = v_t.row(k).iter().copied().collect();
            if *sv <= 1e-10 * smax && dot(w, &d).abs() > 1e-9 * wn {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let t = c.traces();
    if dot(&t, &t).sqrt() <= 1e-12 {
        return Ok(false);
    }
    let chart = SliceChart::for_hyperplane(&t, 1.0)?;
    let rec = c.recession();
    let wb = dot(w, chart.base());
    if chart.dim() == 0 {
        let d = chart.base();
        return Ok(rec.contains(d)?.inside && wb > 1e-9 * wn);
    }
    let slice = rec.restrict_to_slice(&chart)?;
    let scale = slice.coeffs().iter().map(|b| b.frobenius_norm()).fold(0.0, f64::max);
    let rho = 1e-6 * (1.0 + scale);
    let relaxed = Spectrahedron::new(
        slice.a0().add_scaled(rho, &SymMatrix::identity(slice.m()))?,
        slice.coeffs().to_vec(),
    )?;
    let start = match phase_one(&relaxed) {
        Ok(p) => p.point,
        Err(Error::NoInterior) => return Ok(false),
        Err(e) => return Err(e),
    };
    let wy: Vec<f64> = (chart.basis().transpose() * DVector::from_column_slice(w)).iter().copied().collect();
    if dot(&wy, &wy).sqrt() <= 1e-12 * wn {
        return Ok(wb > 1e-9 * wn);
    }
    let (y, _) = barrier_path(
        &Pencil { c: &relaxed, prox: None },
        &wy,
        &start,
        &BarrierOptions::default(),
        &|_| false,
    )?;
    Ok(dot(&wy, &y) + wb > 1e-9 * wn)
}

/// Phase-I: maximise `s` subject to `A(x) - s I ⪰ 0`, stopping as soon as a
/// margin of 1 is reached.
///
/// The margin need not attain its supremum on unbounded sets, so the path
/// follows `max s - rho‖x‖²/2` for a decreasing sequence of `rho`, warm
/// started, until a positive margin appears.
pub fn phase_one(c: &Spectrahedron) -> Result<PhaseOne> {
    let best = phase_one_margin(c)?;
    let ax = c.evaluate(&best.point)?;
    if best.margin <= psd_tolerance(&ax) {
        return Err(Error::NoInterior);
    }
    Ok(best)
}

/// Like [`phase_one`] but reports the best margin found even when it is not
/// positive; a clearly negative margin means `C` is empty.
pub fn phase_one_margin(c: &Spectrahedron) -> Result<PhaseOne> {
    let n = c.n();
    let m = c.m();
    let mut coeffs = c.coeffs().to_vec();
    coeffs.push(SymMatrix::identity(m).scale(-1.0));
    let lifted = Spectrahedron::new(c.a0().clone(), coeffs)?;
    let mut y = vec![0.0; n + 1];
    y[n] = linalg::min_eigenvalue(c.a0()) - 1.0;
    let mut w = vec![0.0; n + 1];
    w[n] = 1.0;

    let target = 1.0;
    let mut best: Option<PhaseOne> = None;
    for rho in [1.0, 1e-3, 1e-6, 1e-9] {
        let pencil = Pencil { c: &lifted, prox: Some((n, rho)) };
        y = match barrier_path(&pencil, &w, &y, &BarrierOptions::default(), &|y| y[n] >= target) {
            Ok((y, _)) => y,
            Err(Error::Unbounded) => return Err(Error::NonConvergence("phase-I diverged".into())),
            Err(_) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        let point = y[..n].to_vec();
        let ax = c.evaluate(&point)?;
        let margin = linalg::min_eigenvalue(&ax);
        let done = margin > psd_tolerance(&ax);
        if best.as_ref().is_none_or(|b| margin > b.margin) {
            best = Some(PhaseOne { point, margin });
        }
        if done {
            break;
        }
        // Restart strictly inside the lifted set.
        y[n] = margin - 1.0;
    }
    Ok(best.expect("first round either returns or records a point"))
}

/// Boundary hit from `v` towards the interior point `center`, with the
/// supporting halfspace recovered from the dual.
pub fn solve_p2(c: &Spectrahedron, v: &[f64], center: &[f64]) -> Result<SupportCut> {
    let av = c.evaluate(v)?;
    let ac = c.evaluate(center)?;
    if linalg::min_eigenvalue(&ac) <= psd_tolerance(&ac) {
        return Err(Error::CenterNotInterior);
    }
    if c.contains(v)?.inside {
        return Err(Error::PointInside);
    }
    let d: Vec<f64> = center.iter().zip(v).map(|(a, b)| a - b).collect();
    let ad = c.evaluate_linear(&d)?;

    let feasible = |t: f64| -> bool {
        let at = av.add_scaled(t, &ad).expect("same dims");
        linalg::min_eigenvalue(&at) >= 0.0
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t_star = hi;
    let boundary_point: Vec<f64> = v.iter().zip(&d).map(|(a, b)| a + t_star * b).collect();
    let ax = av.add_scaled(t_star, &ad)?;

    let u = kernel_direction(&ax, &ad)?;
    let q = ad.quad_form(&u);
    let alpha = 1.0 / q;
    let normal: Vec<f64> = c.coeffs().iter().map(|ai| alpha * ai.quad_form(&u)).collect();
    let dual_objective = -alpha * av.quad_form(&u);
    // normalᵀx - normalᵀv - dual = alpha·uᵀA(x)u ≥ 0 on C.
    let offset = dot(&normal, v) + dual_objective;
    Ok(SupportCut { normal, offset, boundary_point, t_star, v: v.to_vec(), d, dual_objective })
}

/// Unit vector `u` in the numerical kernel of `ax` maximising `uᵀ ad u`.
fn kernel_direction(ax: &SymMatrix, ad: &SymMatrix) -> Result<DVector<f64>> {
    let (values, vectors) = linalg::eigen(ax);
    let window = TAU_BOUNDARY * (1.0 + ax.frobenius_norm());
    let kernel: Vec<&DVector<f64>> =
        values.iter().zip(&vectors).filter(|(l, _)| **l <= window).map(|(_, v)| v).collect();
    let u = if kernel.len() <= 1 {
        vectors[0].clone()
    } else {
        let basis = DMatrix::from_columns(&kernel.iter().map(|v| (*v).clone()).collect::<Vec<_>>());
        let reduced = SymMatrix::new(basis.transpose() * ad.as_matrix() * &basis)?;
        let (_, sub) = linalg::eigen(&reduced);
        let z = sub.last().expect("nonempty kernel");
        let mut u = &basis * z;
        u /= u.norm();
        u
    };
    let q = ad.quad_form(&u);
    if q <= 1e-12 * (1.0 + ad.frobenius_norm()) {
        return Err(Error::NonConvergence("degenerate dual recovery: uᵀĀ(d)u vanishes".into()));
    }
    Ok(u)
}

/// Feasible interval of a one-variable pencil `B0 + y B1 ⪰ 0`.
///
/// Returns `Ok(None)` for an empty set and `Err(Unbounded)` when the set is
/// a nonempty half-line or the whole line.
pub fn pencil_interval(c: &Spectrahedron) -> Result<Option<(f64, f64)>> {
    if c.n() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: c.n() });
    }
    let f = |y: f64| -> f64 {
        let a = c.evaluate(&[y]).expect("finite");
        linalg::min_eigenvalue(&a)
    };
    let tol = |y: f64| psd_tolerance(&c.evaluate(&[y]).expect("finite"));
    let (l1, _) = linalg::min_eigenpair(&c.coeffs()[0])?;
    let lmax = -linalg::min_eigenvalue(&c.coeffs()[0].scale(-1.0));
    let big = 1e8;
    if l1 >= 0.0 && f(big) >= -tol(big) {
        return Err(Error::Unbounded);
    }
    if lmax <= 0.0 && f(-big) >= -tol(-big) {
        return Err(Error::Unbounded);
    }

    // f is concave; bracket its maximiser.
    let f0 = f(0.0);
    let mut r = 1.0;
    while r < big && (f(r) >= f0 - 1.0 || f(-r) >= f0 - 1.0) {
        r *= 2.0;
    }
    let (mut a, mut b) = (-r, r);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let ystar = 0.5 * (a + b);
    let fstar = f(ystar);
    if fstar < -tol(ystar) {
        return Ok(None);
    }
    if fstar < 0.0 {
        return Ok(Some((ystar, ystar)));
    }
    let root = |mut inside: f64, mut outside: f64| -> f64 {
        for _ in 0..200 {
            if (inside - outside).abs() <= 1e-13 * (1.0 + inside.abs()) {
                break;
            }
            let mid = 0.5 * (inside + outside);
            if f(mid) >= 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    Ok(Some((root(ystar, -r), root(ystar, r))))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
