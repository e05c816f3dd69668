use polyapprox::Error;
use polyapprox::io::*;
use polyapprox::spectra::pencils;

#[test]
fn problem_round_trip() {
    let c = pencils::hyperbola_parabola();
    let text = ProblemFile::from_spectrahedron(&c, Some("ex".into())).to_json();
    let p = parse_problem(&text).unwrap();
    assert!(p.warnings.is_empty());
    assert_eq!(p.spectrahedron.a0(), c.a0());
    assert_eq!(p.spectrahedron.coeffs(), c.coeffs());
    assert_eq!(p.name.as_deref(), Some("ex"));
}

#[test]
fn asymmetric_input_is_symmetrized_with_warning() {
    let text = r#"{"n":1,"m":2,"A0":[[1,0.5],[0.25,1]],"Ai":[[[1,0],[0,-1]]]}"#;
    let p = parse_problem(text).unwrap();
    assert_eq!(p.warnings.len(), 1);
    assert_eq!(p.spectrahedron.a0().get(0, 1), 0.375);
    let tiny = r#"{"n":1,"m":2,"A0":[[1,0.5],[0.5000000000000001,1]],"Ai":[[[1,0],[0,-1]]]}"#;
    assert!(parse_problem(tiny).unwrap().warnings.is_empty());
}

#[test]
fn malformed_problems_are_rejected() {
    for text in [
        "",
        "{}",
        r#"{"n":2,"m":1,"A0":[[1]],"Ai":[[[1]]]}"#,
        r#"{"n":1,"m":2,"A0":[[1]],"Ai":[[[1]]]}"#,
        r#"{"n":0,"m":1,"A0":[[1]],"Ai":[]}"#,
        r#"{"n":1,"m":1,"A0":[[1e999]],"Ai":[[[1]]]}"#,
    ] {
        assert!(matches!(parse_problem(text), Err(Error::Parse(_))), "{text}");
    }
}

#[test]
fn result_round_trip_is_bit_exact() {
    let r = ResultFile {
        kind: ResultKind::Approx,
        n: 2,
        vertices: vec![vec![0.1 + 0.2, 1.0 / 3.0], vec![f64::MIN_POSITIVE, -5e-324]],
        rays: vec![vec![std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2]],
        certificate: Certificate { vertex_bounds: vec![1e-17, 0.0], ..Default::default() },
        stats: None,
    };
    let back = parse_result(&r.to_json()).unwrap();
    let bits = |r: &ResultFile| {
        r.vertices.iter().chain(&r.rays).flatten().map(|x| x.to_bits()).collect::<Vec<_>>()
    };
    assert_eq!(bits(&back), bits(&r));
    assert_eq!(back, r);
}
