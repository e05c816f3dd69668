use polyapprox::Error;
use polyapprox::polyc::*;

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.len().cmp(&b.len()))
}

fn box_hrep(lo: &[f64], hi: &[f64]) -> HRep {
    let n = lo.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        a.push(e.clone());
        b.push(hi[i]);
        e[i] = -1.0;
        a.push(e);
        b.push(-lo[i]);
    }
    HRep::new(a, b).unwrap()
}

fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    v.sort_by(|a, b| lex_cmp(a, b));
    v
}

fn same_set(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> bool {
    let (a, b) = (sorted(a), sorted(b));
    a.len() == b.len()
        && a.iter().zip(&b).all(|(x, y)| x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-9))
}

#[test]
fn unit_square_vertices() {
    let p = Polyhedron::from_hrep(box_hrep(&[0.0, 0.0], &[1.0, 1.0])).unwrap();
    assert!(same_set(
        p.vertices(),
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]
    ));
    assert!(p.rays().is_empty());
}

#[test]
fn square_cut_by_diagonal() {
    let mut p = Polyhedron::from_hrep(box_hrep(&[0.0, 0.0], &[1.0, 1.0])).unwrap();
    p.insert_halfspace(&[1.0, 1.0], 1.5).unwrap();
    assert!(same_set(
        p.vertices(),
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.5], vec![0.5, 1.0]]
    ));
    let before = p.clone();
    p.insert_halfspace(&[1.0, 0.0], 2.0).unwrap();
    assert!(same_set(p.vertices(), before.vertices()));
}

#[test]
fn ray_is_cut_into_a_vertex() {
    // {x1 = 0, x2 ≥ 0} as x1 ≤ 0, -x1 ≤ 0, -x2 ≤ 0.
    let h = HRep::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, -1.0]], vec![0.0; 3]).unwrap();
    let mut p = Polyhedron::from_hrep(h).unwrap();
    assert_eq!(p.vertices(), vec![vec![0.0, 0.0]]);
    assert!(same_set(p.rays(), vec![vec![0.0, 1.0]]));
    p.insert_halfspace(&[0.0, 1.0], 1.0).unwrap();
    assert!(p.rays().is_empty());
    assert!(same_set(p.vertices(), vec![vec![0.0, 0.0], vec![0.0, 1.0]]));
}

#[test]
fn empty_cut_is_rejected_and_state_kept() {
    let mut p = Polyhedron::from_hrep(box_hrep(&[0.0, 0.0], &[1.0, 1.0])).unwrap();
    let before = p.clone();
    assert_eq!(p.insert_halfspace(&[1.0, 0.0], -1.0), Err(Error::EmptyPolyhedron));
    assert_eq!(p, before);
}

#[test]
fn facets_of_planar_wedge() {
    let h = cone_facets(&[vec![1.0, 1.0], vec![-1.0, 1.0]]).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!(same_set(h.rows().to_vec(), vec![vec![s, -s], vec![-s, -s]]));
    assert!(h.rhs().iter().all(|&b| b == 0.0));
}

#[test]
fn facets_of_orthant() {
    let e = |i: usize| (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    let h = cone_facets(&[e(0), e(1), e(2)]).unwrap();
    let neg = |i: usize| e(i).iter().map(|x| -x).collect::<Vec<f64>>();
    assert!(same_set(h.rows().to_vec(), vec![neg(0), neg(1), neg(2)]));
}

#[test]
fn facets_reject_lines() {
    assert_eq!(cone_facets(&[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]), Err(Error::NotPointed));
}

#[test]
fn conical_hull_examples() {
    assert_eq!(conical_hull(&[vec![0.0, 2.0]]).unwrap(), vec![vec![0.0, 1.0]]);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let k = conical_hull(&[vec![1.0, 1.0], vec![-1.0, 1.0], vec![0.0, 1.0]]).unwrap();
    assert!(same_set(k, vec![vec![s, s], vec![-s, s]]));
    assert!(conical_hull(&[vec![0.0, 0.0]]).is_err());
}

#[test]
fn minkowski_examples() {
    let seg = VRep::polytope(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
    let hex = minkowski_l1(&seg, 0.05).unwrap();
    assert!(same_set(
        hex.vertices().to_vec(),
        vec![
            vec![1.05, 0.0],
            vec![1.0, 0.05],
            vec![-1.0, 0.05],
            vec![-1.05, 0.0],
            vec![-1.0, -0.05],
            vec![1.0, -0.05]
        ]
    ));
    assert_eq!(minkowski_l1(&seg, 0.0).unwrap(), seg);
    let pt = VRep::polytope(vec![vec![0.0; 3]]).unwrap();
    assert_eq!(minkowski_l1(&pt, 1.0).unwrap().vertices().len(), 6);
    assert!(minkowski_l1(&seg, -1.0).is_err());
}

#[test]
fn sum_with_cone_examples() {
    let sq = VRep::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
    let s = sum_with_cone(&sq, &[vec![0.0, 1.0]]).unwrap();
    assert!(same_set(s.vertices().to_vec(), vec![vec![0.0, 0.0], vec![1.0, 0.0]]));
    assert_eq!(s.rays(), &[vec![0.0, 1.0]]);
    assert_eq!(sum_with_cone(&sq, &[]).unwrap(), sq);
    let seg = VRep::polytope(vec![vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let s = sum_with_cone(&seg, &[vec![0.0, 1.0]]).unwrap();
    assert_eq!(s.vertices(), &[vec![0.0, 0.0]]);
}

#[test]
fn planar_boundary_orders_counterclockwise() {
    let sq = VRep::polytope(vec![vec![1.0, 1.0], vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 0.0], vec![0.0, 1.0]])
        .unwrap();
    let (pts, rays) = planar_boundary(&sq).unwrap();
    assert_eq!(pts, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]);
    assert!(rays.is_empty());

    // Epigraph-like set: arrive down the left ray, leave up the right one.
    let p = VRep::new(
        vec![vec![-1.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 3.0]],
        vec![vec![-0.1, 1.0], vec![0.1, 1.0]],
    )
    .unwrap();
    let (pts, rays) = planar_boundary(&p).unwrap();
    assert_eq!(pts, vec![vec![-1.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0]]);
    assert_eq!(rays.len(), 2);
    assert!(rays[0][0] < 0.0 && rays[1][0] > 0.0);

    let half = VRep::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![vec![0.0, 1.0]]).unwrap();
    let (pts, rays) = planar_boundary(&half).unwrap();
    assert_eq!(pts, vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
    assert_eq!(rays, vec![vec![0.0, 1.0]]);
}
