//! Randomized invariants of the building blocks.

use nalgebra::DMatrix;
use polyapprox::linalg::{self, SymMatrix};
use polyapprox::metrics;
use polyapprox::polyc::{self, HRep, Polyhedron, VRep};
use polyapprox::projection;
use polyapprox::sdp;
use polyapprox::spectra::{pencils, Spectrahedron};
use proptest::prelude::*;

fn vec_in(n: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, n)
}

fn sym(m: usize) -> impl Strategy<Value = SymMatrix> {
    prop::collection::vec(-1.0..1.0f64, m * m)
        .prop_map(move |v| SymMatrix::new(DMatrix::from_vec(m, m, v)).unwrap())
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigen_reconstructs(s in (1usize..6).prop_flat_map(sym)) {
        let (values, vectors) = linalg::eigen(&s);
        let m = s.dim();
        let mut back = DMatrix::zeros(m, m);
        for (l, v) in values.iter().zip(&vectors) {
            back += v * v.transpose() * *l;
        }
        prop_assert!((back - s.as_matrix()).norm() < 1e-10);
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((linalg::min_eigenvalue(&s) - values[0]).abs() < 1e-12);
    }

    #[test]
    fn gram_matrices_are_psd(v in (1usize..5).prop_flat_map(|m| prop::collection::vec(-2.0..2.0f64, m * m).prop_map(move |v| (m, v)))) {
        let (m, v) = v;
        let b = DMatrix::from_vec(m, m, v);
        let g = SymMatrix::new(b.transpose() * &b).unwrap();
        prop_assert!(linalg::min_eigenvalue(&g) >= -linalg::psd_tolerance(&g));
        // Shifting by the identity makes it definite.
        let shifted = g.add_scaled(1.0, &SymMatrix::identity(m)).unwrap();
        prop_assert!(linalg::solve_spd(&shifted, &vec![1.0; m]).is_ok());
    }

    #[test]
    fn membership_matches_eigenvalues(x in vec_in(2, 3.0)) {
        let c = pencils::hyperbola_parabola();
        // Closed form: x1 > 0, x1 x2 ≥ 1, x2 ≥ x1².
        let (a, b) = (x[0], x[1]);
        let inside = a > 0.0 && a * b >= 1.0 && b >= a * a;
        let m = c.contains(&x).unwrap();
        let slack = (a * b - 1.0).abs().min((b - a * a).abs());
        if slack > 1e-6 {
            prop_assert_eq!(m.inside, inside, "{:?}", x);
        }
    }

    #[test]
    fn block_membership_is_per_block(x in vec_in(2, 2.0), big in 1.0..1e6f64) {
        // diag(1 - x1, 1 + x1) ⊕ [[big, x2], [x2, big]]: the large block
        // must not loosen the test on the small one.
        let a0 = SymMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, big, 0.0], vec![0.0, 0.0, 0.0, big],
        ]).unwrap();
        let a1 = SymMatrix::diag(&[-1.0, 1.0, 0.0, 0.0]).unwrap();
        let mut r = vec![vec![0.0; 4]; 4];
        r[2][3] = 1.0;
        r[3][2] = 1.0;
        let a2 = SymMatrix::from_rows(&r).unwrap();
        let c = Spectrahedron::new(a0, vec![a1, a2]).unwrap();
        let m = c.contains(&x).unwrap();
        if (x[0].abs() - 1.0).abs() > 1e-7 {
            prop_assert_eq!(m.inside, x[0].abs() < 1.0);
        }
    }

    #[test]
    fn recession_directions_stay_inside(t in 0.0..50.0f64, s in 0.0..1.0f64) {
        let c = pencils::hyperbola_parabola();
        let rec = c.recession();
        // recc = {x1 = 0, x2 ≥ 0} here.
        prop_assert!(rec.contains(&[0.0, t]).unwrap().inside);
        let x = [1.0 + s, (1.0 + s) * (1.0 + s) + s];
        prop_assert!(c.contains(&[x[0], x[1] + t]).unwrap().inside);
    }

    #[test]
    fn projection_satisfies_variational_inequality(
        p in vec_in(3, 4.0),
        verts in prop::collection::vec(vec_in(3, 2.0), 1..7),
        rays in prop::collection::vec(vec_in(3, 1.0), 0..3),
    ) {
        let rays: Vec<Vec<f64>> = rays.into_iter().filter(|r| norm(r) > 1e-3).collect();
        let pr = projection::project(&p, &verts, &rays).unwrap();
        let lsum: f64 = pr.vertex_weights.iter().sum();
        prop_assert!((lsum - 1.0).abs() < 1e-9);
        prop_assert!(pr.vertex_weights.iter().chain(&pr.ray_weights).all(|&w| w >= 0.0));
        prop_assert!((dist(&p, &pr.point) - pr.distance).abs() < 1e-9);
        let r: Vec<f64> = p.iter().zip(&pr.point).map(|(a, b)| a - b).collect();
        let tol = 1e-7 * (1.0 + norm(&p)) * (1.0 + norm(&r));
        for v in &verts {
            let g: Vec<f64> = v.iter().zip(&pr.point).map(|(a, b)| a - b).collect();
            prop_assert!(dot(&r, &g) <= tol, "vertex {:?}", v);
            prop_assert!(pr.distance <= dist(&p, v) + 1e-12);
        }
        for d in &rays {
            prop_assert!(dot(&r, d) <= tol, "ray {:?}", d);
        }
    }

    #[test]
    fn dd_vertices_are_feasible_and_tight(
        rows in prop::collection::vec(vec_in(2, 1.0), 0..6),
        rhs in prop::collection::vec(0.2..2.0f64, 6),
    ) {
        // Box rows keep the set bounded; the origin is interior.
        let mut a = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let mut b = vec![3.0; 4];
        for (r, h) in rows.into_iter().zip(rhs) {
            if norm(&r) > 1e-2 {
                a.push(r);
                b.push(h);
            }
        }
        let h = HRep::new(a, b).unwrap();
        let p = Polyhedron::from_hrep(h.clone()).unwrap();
        for v in p.vertices() {
            prop_assert!(h.max_violation(&v) <= 1e-9);
            let tight = h.rows().iter().zip(h.rhs()).filter(|(r, b)| (dot(r, &v) - **b).abs() <= 1e-8).count();
            prop_assert!(tight >= 2, "vertex {:?} has {} tight rows", v, tight);
        }
        prop_assert!(p.rays().is_empty());
    }

    #[test]
    fn redundant_cut_keeps_vertices(shift in 0.01..1.0f64, dir in vec_in(2, 1.0)) {
        prop_assume!(norm(&dir) > 1e-2);
        let sq = HRep::new(
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
            vec![1.0, 0.0, 1.0, 0.0],
        ).unwrap();
        let mut p = Polyhedron::from_hrep(sq).unwrap();
        let before = p.vertices();
        let beta = before.iter().map(|v| dot(&dir, v)).fold(f64::NEG_INFINITY, f64::max) + shift;
        p.insert_halfspace(&dir, beta).unwrap();
        prop_assert_eq!(p.vertices().len(), before.len());
        for v in p.vertices() {
            prop_assert!(before.iter().any(|w| dist(w, &v) < 1e-12));
        }
    }

    #[test]
    fn conical_hull_generates_the_same_cone(pts in prop::collection::vec(vec_in(3, 1.0), 1..8)) {
        let pts: Vec<Vec<f64>> = pts.into_iter().map(|mut p| { p[2] = p[2].abs() + 0.2; p }).collect();
        let gens = polyc::conical_hull(&pts).unwrap();
        prop_assert!(gens.len() <= pts.len());
        for p in &pts {
            let u: Vec<f64> = p.iter().map(|x| x / norm(p)).collect();
            prop_assert!(projection::cone_distance(&u, &gens).unwrap().distance <= 1e-8);
        }
        for g in &gens {
            prop_assert!((norm(g) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn minkowski_l1_contains_shifted_vertices(verts in prop::collection::vec(vec_in(2, 2.0), 1..6), rho in 0.0..0.5f64) {
        let p = VRep::polytope(verts.clone()).unwrap();
        let sum = polyc::minkowski_l1(&p, rho).unwrap();
        for v in &verts {
            for (i, s) in [(0, 1.0), (0, -1.0), (1, 1.0), (1, -1.0)] {
                let mut q = v.clone();
                q[i] += s * rho;
                prop_assert!(sum.distance(&q).unwrap() <= 1e-9);
            }
        }
    }

    #[test]
    fn hausdorff_is_a_metric(
        a in prop::collection::vec(vec_in(2, 2.0), 1..5),
        b in prop::collection::vec(vec_in(2, 2.0), 1..5),
        c in prop::collection::vec(vec_in(2, 2.0), 1..5),
    ) {
        let (a, b, c) = (VRep::polytope(a).unwrap(), VRep::polytope(b).unwrap(), VRep::polytope(c).unwrap());
        let ab = metrics::hausdorff_polytopes(&a, &b).unwrap().value;
        let ba = metrics::hausdorff_polytopes(&b, &a).unwrap().value;
        let bc = metrics::hausdorff_polytopes(&b, &c).unwrap().value;
        let ac = metrics::hausdorff_polytopes(&a, &c).unwrap().value;
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!(metrics::hausdorff_polytopes(&a, &a).unwrap().value < 1e-9);
    }

    #[test]
    fn truncated_hausdorff_is_bounded_and_symmetric(
        k1 in prop::collection::vec(vec_in(2, 1.0), 1..4),
        k2 in prop::collection::vec(vec_in(2, 1.0), 1..4),
    ) {
        let k1: Vec<Vec<f64>> = k1.into_iter().map(|mut g| { g[1] = g[1].abs() + 0.1; g }).collect();
        let k2: Vec<Vec<f64>> = k2.into_iter().map(|mut g| { g[1] = g[1].abs() + 0.1; g }).collect();
        let d12 = metrics::truncated_hausdorff(&k1, &k2).unwrap().value;
        let d21 = metrics::truncated_hausdorff(&k2, &k1).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&d12));
        prop_assert!((d12 - d21).abs() < 1e-9);
        prop_assert!(metrics::truncated_hausdorff(&k1, &k1).unwrap().value < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn p1_on_boxes_matches_lp(
        lo in vec_in(3, 2.0),
        width in prop::collection::vec(0.1..3.0f64, 3),
        w in vec_in(3, 1.0),
    ) {
        prop_assume!(norm(&w) > 1e-2);
        let hi: Vec<f64> = lo.iter().zip(&width).map(|(l, d)| l + d).collect();
        let c = pencils::boxed(&lo, &hi);
        let start: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();
        let sol = sdp::solve_p1(&c, &w, &start).unwrap();
        let best: f64 = (0..3).map(|i| if w[i] > 0.0 { w[i] * hi[i] } else { w[i] * lo[i] }).sum();
        prop_assert!(sol.value <= best + 1e-9);
        prop_assert!(sol.upper_bound >= best - 1e-9);
        prop_assert!(best - sol.value <= 1e-6 * (1.0 + best.abs()));
    }

    #[test]
    fn p2_on_disk_is_tangent(angle in 0.0..std::f64::consts::TAU, r in 1.05..10.0f64) {
        let c = pencils::unit_disk();
        let v = [r * angle.cos(), r * angle.sin()];
        let cut = sdp::solve_p2(&c, &v, &[0.0, 0.0]).unwrap();
        // From the centre the ray meets the circle at v/r.
        prop_assert!((cut.t_star - (1.0 - 1.0 / r)).abs() < 1e-9);
        prop_assert!((cut.t_star - cut.dual_objective).abs() < 1e-6);
        // The halfspace is the tangent at the hit point.
        let u = [angle.cos(), angle.sin()];
        let nrm = norm(&cut.normal);
        prop_assert!(dist(&cut.normal.iter().map(|x| -x / nrm).collect::<Vec<_>>(), &u) < 1e-5);
        prop_assert!(cut.slack(&v) < 0.0);
        prop_assert!(cut.slack(&[-u[0], -u[1]]) >= -1e-9);
    }
}
