#![no_main]
use libfuzzer_sys::fuzz_target;
use polyapprox::io::{parse_problem, ProblemFile};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Errors are fine; panics are not.
    let Ok(p) = parse_problem(text) else { return };
    // An accepted problem survives a write/read cycle unchanged.
    let again = parse_problem(&ProblemFile::from_spectrahedron(&p.spectrahedron, p.name.clone()).to_json())
        .expect("written problems parse");
    assert_eq!(again.spectrahedron.a0(), p.spectrahedron.a0());
    assert_eq!(again.spectrahedron.coeffs(), p.spectrahedron.coeffs());
});
