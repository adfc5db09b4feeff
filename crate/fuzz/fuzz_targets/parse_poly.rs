#![no_main]

use libfuzzer_sys::fuzz_target;
use resham::polyfield::{parse_poly, Poly};

// Anything that parses must print back to an equal polynomial.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_poly(src) {
        let again: Poly = parse_poly(&p.to_string()).expect("display output parses");
        assert_eq!(again, p);
    }
});
