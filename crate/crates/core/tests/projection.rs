use polyapprox::projection::*;

fn square() -> Vec<Vec<f64>> {
    vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]
}

#[test]
fn inside_is_zero() {
    let r = project(&[0.3, 0.6], &square(), &[]).unwrap();
    assert!(r.distance < 1e-12);
}

#[test]
fn axis_projection() {
    let r = project(&[2.0, 0.0], &square(), &[]).unwrap();
    assert!((r.distance - 1.0).abs() < 1e-12);
    let r = project(&[2.0, 0.5], &square(), &[]).unwrap();
    assert!((r.distance - 1.0).abs() < 1e-12);
    assert!((r.point[1] - 0.5).abs() < 1e-12);
}

#[test]
fn onto_ray() {
    let r = cone_distance(&[1.0, 1.0], &[vec![1.0, 0.0]]).unwrap();
    assert!((r.distance - 1.0).abs() < 1e-12);
    assert!((r.point[0] - 1.0).abs() < 1e-12 && r.point[1].abs() < 1e-12);
}

#[test]
fn duplicated_and_collinear_generators() {
    let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.0]];
    let r = project(&[1.5, 1.0], &v, &[]).unwrap();
    assert!((r.distance - 1.0).abs() < 1e-12);
    let r = project(&[3.0, 0.0], &v, &[vec![0.0, 1.0], vec![0.0, 2.0]]).unwrap();
    assert!((r.distance - 1.0).abs() < 1e-12);
}
