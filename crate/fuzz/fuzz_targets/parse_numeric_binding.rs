#![no_main]

use libfuzzer_sys::fuzz_target;
use resham::polyfield::parse_numeric_binding;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok((_, v)) = parse_numeric_binding(src) {
        assert!(v.is_finite());
    }
});
