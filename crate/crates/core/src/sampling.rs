//! Deterministic direction sets and seeded membership samplers used by the
//! validators.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::spectra::{norm, Spectrahedron};

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in `base`.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while index > 0 {
        f /= b;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// `count` quasi-uniform unit vectors in `R^n`: Halton points pushed through
/// Box–Muller and normalized.
pub fn quasi_uniform_directions(n: usize, count: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 || 2 * n.div_ceil(2) > PRIMES.len() {
        return Err(Error::InvalidArgument(format!("unsupported dimension {n}")));
    }
    if n == 2 {
        // Equally spaced angles are the best quasi-uniform set on the circle.
        return Ok((0..count)
            .map(|k| {
                let t = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect());
    }
    let mut out = Vec::with_capacity(count);
    let mut index = 1u64;
    while out.len() < count {
        let mut g = Vec::with_capacity(n + 1);
        for pair in 0..n.div_ceil(2) {
            let u1 = halton(index, PRIMES[2 * pair]).max(1e-300);
            let u2 = halton(index, PRIMES[2 * pair + 1]);
            let r = (-2.0 * u1.ln()).sqrt();
            let t = std::f64::consts::TAU * u2;
            g.push(r * t.cos());
            g.push(r * t.sin());
        }
        g.truncate(n);
        index += 1;
        let nrm = norm(&g);
        if nrm > 1e-12 {
            out.push(g.iter().map(|x| x / nrm).collect());
        }
    }
    Ok(out)
}

/// Up to `count` members of `c` drawn uniformly from the box `[lo, hi]` by
/// rejection, giving up after `max_tries` draws.
pub fn rejection_sample(
    c: &Spectrahedron,
    lo: &[f64],
    hi: &[f64],
    count: usize,
    max_tries: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if lo.len() != c.n() || hi.len() != c.n() {
        return Err(Error::DimensionMismatch { expected: c.n(), got: lo.len() });
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..max_tries {
        if out.len() >= count {
            break;
        }
        let x: Vec<f64> = lo.iter().zip(hi).map(|(&a, &b)| if b > a { rng.random_range(a..b) } else { a }).collect();
        if c.contains(&x)?.inside {
            out.push(x);
        }
    }
    Ok(out)
}
