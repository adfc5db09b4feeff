#![no_main]

use libfuzzer_sys::fuzz_target;
use resham::polyfield::parse_point;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_point(src) {
        assert!(p.iter().all(|c| c.is_finite()));
    }
});
