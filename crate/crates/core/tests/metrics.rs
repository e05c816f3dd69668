use polyapprox::metrics::*;
use polyapprox::polyc::VRep;

fn square() -> VRep {
    VRep::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
}

#[test]
fn point_distances() {
    assert!(dist_point_polytope(&[0.5, 0.5], &square()).unwrap().value < 1e-12);
    assert!((dist_point_polytope(&[2.0, 0.0], &square()).unwrap().value - 1.0).abs() < 1e-12);
    let ray = VRep::cone(2, vec![vec![1.0, 0.0]]).unwrap();
    let r = dist_point_polytope(&[1.0, 1.0], &ray).unwrap();
    assert!((r.value - 1.0).abs() < 1e-12);
    assert!((r.attaining_pair.1[0] - 1.0).abs() < 1e-12);
}

#[test]
fn hausdorff_examples() {
    assert_eq!(hausdorff_polytopes(&square(), &square()).unwrap().value, 0.0);
    let cut = VRep::polytope(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 0.5],
        vec![0.5, 1.0],
    ])
    .unwrap();
    let h = hausdorff_polytopes(&square(), &cut).unwrap();
    assert!((h.value - 2f64.sqrt() / 4.0).abs() < 1e-12);
    assert_eq!(h.attaining_pair.0, vec![1.0, 1.0]);
}

#[test]
fn truncated_examples() {
    let e1 = vec![vec![1.0, 0.0]];
    let e2 = vec![vec![0.0, 1.0]];
    assert!(truncated_hausdorff(&e2, &e2).unwrap().value < 1e-12);
    assert!((truncated_hausdorff(&e1, &e2).unwrap().value - 1.0).abs() < 1e-12);
    let th = 0.1f64;
    let wedge = vec![vec![th.sin(), th.cos()], vec![-th.sin(), th.cos()]];
    assert!((truncated_hausdorff(&e2, &wedge).unwrap().value - th.sin()).abs() < 1e-12);
    assert_eq!(truncated_hausdorff(&[], &e2).unwrap().value, 1.0);
}

#[test]
fn ball_bound_examples() {
    let x = [0.3, -0.2];
    assert!((ball_hausdorff_bound(0.1, 0.0, 1.0, &x, &x).unwrap() - 0.2).abs() < 1e-15);
    assert!((ball_hausdorff_bound(0.1, 0.1, 1.0, &x, &x).unwrap() - 0.4).abs() < 1e-15);
    assert!((ball_hausdorff_bound(0.1, 0.05, 2.0, &[0.0, 0.0], &[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-15);
    assert!(ball_hausdorff_bound(0.1, 0.1, 0.05, &x, &x).is_err());
}

#[test]
fn diagnostics_on_the_counterexample() {
    let p = VRep::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]], vec![vec![0.0, 1.0]]).unwrap();
    assert!((exc_over_recession(&p).unwrap().value - 1.0).abs() < 1e-12);
    let sb = self_bounded(&p).unwrap();
    assert!(!sb.classic && sb.extended);
    assert!((sb.radius - 1.0).abs() < 1e-12);

    let t = VRep::new(vec![vec![2.0, 3.0]], vec![vec![1.0, 1.0], vec![-1.0, 1.0]]).unwrap();
    let sb = self_bounded(&t).unwrap();
    assert!(sb.classic);
    assert_eq!(sb.witness.unwrap(), vec![2.0, 3.0]);

    let seg = VRep::new(vec![vec![0.0, 0.0], vec![3.0, 0.0]], vec![vec![0.0, 1.0]]).unwrap();
    let e = exc_over_recession(&seg).unwrap();
    assert!((e.value - 3.0).abs() < 1e-12);
    assert_eq!(e.attaining_pair.0, vec![3.0, 0.0]);

    let compact = self_bounded(&square()).unwrap();
    assert!(!compact.classic && compact.extended);
}
