//! Euclidean projection onto `conv V + cone D`.
//!
//! The projection is a small convex QP over combination weights,
//! `min ‖Σ λ_i v_i + Σ μ_j d_j - p‖` with `λ, μ ≥ 0` and `Σ λ_i = 1`, solved
//! by a primal active-set iteration in the style of Lawson–Hanson. The
//! equality is eliminated through one pivot vertex of the passive set and
//! each subproblem is an unconstrained least-squares solve (SVD, so
//! affinely dependent generators are fine).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// KKT tolerance on the reduced gradient, relative to `scale·‖residual‖`.
const KKT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub distance: f64,
    /// The nearest point of the set.
    pub point: Vec<f64>,
    pub vertex_weights: Vec<f64>,
    pub ray_weights: Vec<f64>,
}

/// Projects `p` onto `conv vertices + cone rays`.
pub fn project(p: &[f64], vertices: &[Vec<f64>], rays: &[Vec<f64>]) -> Result<Projection> {
    if vertices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = p.len();
    if let Some(bad) = vertices.iter().chain(rays).find(|g| g.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }
    if p.iter().chain(vertices.iter().flatten()).chain(rays.iter().flatten()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let nv = vertices.len();
    let k = nv + rays.len();
    let cols: Vec<DVector<f64>> =
        vertices.iter().chain(rays).map(|g| DVector::from_column_slice(g)).collect();
    let target = DVector::from_column_slice(p);
    let is_vertex = |i: usize| i < nv;

    // Start at the nearest vertex.
    let start = (0..nv)
        .min_by(|&a, &b| (&cols[a] - &target).norm().total_cmp(&(&cols[b] - &target).norm()))
        .expect("nonempty");
    let mut z = vec![0.0; k];
    z[start] = 1.0;
    let mut passive = vec![false; k];
    passive[start] = true;

    let scale = 1.0 + target.norm() + cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let cap = 10 * k + 10;
    let mut iterations = 0;
    let mut best = f64::INFINITY;
    loop {
        let residual = combine(&cols, &z) - &target;
        let rnorm = residual.norm();
        // At the rounding floor, or an outer pass that did not improve:
        // further pivots only cycle on noise.
        if rnorm <= 1e-14 * scale || rnorm >= best {
            return Ok(finish(&cols, &target, z, nv));
        }
        best = rnorm;
        let grad: Vec<f64> = cols.iter().map(|c| c.dot(&residual)).collect();
        // Multiplier of the equality: -g_i is equal on the passive vertices.
        let pv: Vec<usize> = (0..nv).filter(|&i| passive[i]).collect();
        let nu = -pv.iter().map(|&i| grad[i]).sum::<f64>() / pv.len() as f64;
        let entering = (0..k)
            .filter(|&i| !passive[i])
            .map(|i| (i, grad[i] + if is_vertex(i) { nu } else { 0.0 }))
            .filter(|&(_, s)| s < -KKT_TOL * scale * rnorm)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((j, _)) = entering else {
            return Ok(finish(&cols, &target, z, nv));
        };
        passive[j] = true;
        let mut stalled = false;

        // Inner loop: move towards the subproblem optimum, dropping
        // variables that hit zero.
        loop {
            iterations += 1;
            if iterations > cap {
                return Err(Error::NonConvergence("projection active set did not settle".into()));
            }
            let y = subproblem(&cols, &target, &passive, nv);
            if z[j] == 0.0 && y[j] <= 0.0 {
                // The entering variable cannot move: the gradient test was
                // dominated by rounding, so the current point is optimal.
                passive[j] = false;
                stalled = true;
                break;
            }
            let blocking = (0..k)
                .filter(|&i| passive[i] && y[i] <= 0.0)
                .map(|i| (i, z[i] / (z[i] - y[i])))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match blocking {
                None => {
                    z = y;
                    break;
                }
                Some((_, alpha)) => {
                    for i in 0..k {
                        if passive[i] {
                            z[i] += alpha * (y[i] - z[i]);
                        }
                    }
                    let mut any_vertex = false;
                    for i in 0..k {
                        if passive[i] && z[i] <= 1e-15 {
                            passive[i] = false;
                            z[i] = 0.0;
                        }
                        any_vertex |= passive[i] && is_vertex(i);
                    }
                    if !any_vertex {
                        // Keep the largest remaining vertex weight alive.
                        let i = (0..nv).max_by(|&a, &b| z[a].total_cmp(&z[b])).expect("nonempty");
                        passive[i] = true;
                    }
                    renormalize(&mut z, nv);
                }
            }
        }
        if stalled {
            return Ok(finish(&cols, &target, z, nv));
        }
    }
}

/// Distance from `p` to `conv vertices + cone rays`.
pub fn distance(p: &[f64], vertices: &[Vec<f64>], rays: &[Vec<f64>]) -> Result<f64> {
    Ok(project(p, vertices, rays)?.distance)
}

/// Distance from `p` to the cone generated by `rays` (apex at the origin).
pub fn cone_distance(p: &[f64], rays: &[Vec<f64>]) -> Result<Projection> {
    project(p, &[vec![0.0; p.len()]], rays)
}

fn finish(cols: &[DVector<f64>], target: &DVector<f64>, z: Vec<f64>, nv: usize) -> Projection {
    let point = combine(cols, &z);
    let distance = (&point - target).norm();
    Projection {
        distance,
        point: point.iter().copied().collect(),
        vertex_weights: z[..nv].to_vec(),
        ray_weights: z[nv..].to_vec(),
    }
}

fn combine(cols: &[DVector<f64>], z: &[f64]) -> DVector<f64> {
    let mut acc = DVector::zeros(cols[0].len());
    for (c, &w) in cols.iter().zip(z) {
        if w != 0.0 {
            acc += c * w;
        }
    }
    acc
}

fn renormalize(z: &mut [f64], nv: usize) {
    let s: f64 = z[..nv].iter().sum();
    if s > 0.0 {
        for w in &mut z[..nv] {
            *w /= s;
        }
    }
}

/// Least-squares optimum over the passive variables with `Σ λ = 1`.
fn subproblem(cols: &[DVector<f64>], target: &DVector<f64>, passive: &[bool], nv: usize) -> Vec<f64> {
    let k = cols.len();
    let free: Vec<usize> = (0..k).filter(|&i| passive[i]).collect();
    let pivot = *free.iter().find(|&&i| i < nv).expect("a passive vertex");
    let others: Vec<usize> = free.iter().copied().filter(|&i| i != pivot).collect();
    let mut y = vec![0.0; k];
    if others.is_empty() {
        y[pivot] = 1.0;
        return y;
    }
    let n = target.len();
    let a = DMatrix::from_fn(n, others.len(), |r, c| {
        let i = others[c];
        if i < nv {
            cols[i][r] - cols[pivot][r]
        } else {
            cols[i][r]
        }
    });
    let rhs = target - &cols[pivot];
    let svd = a.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let sol = svd
        .solve(&rhs, 1e-12 * smax.max(1e-300))
        .expect("both factors were requested");
    let mut pivot_w = 1.0;
    for (c, &i) in others.iter().enumerate() {
        y[i] = sol[c];
        if i < nv {
            pivot_w -= sol[c];
        }
    }
    y[pivot] = pivot_w;
    y
}
