#![no_main]
use libfuzzer_sys::fuzz_target;
use polyapprox::io::parse_result;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(r) = parse_result(text) else { return };
    assert_eq!(parse_result(&r.to_json()).expect("written results parse"), r);
    // Conversion to a V-representation may reject the data but must not panic.
    let _ = r.vrep();
});
