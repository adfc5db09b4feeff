#![no_main]

use libfuzzer_sys::fuzz_target;
use resham::polyfield::{parse_binding, parse_bindings};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let _ = parse_binding(src);
    let _ = parse_bindings(src.split(','));
});
