#![no_main]

use libfuzzer_sys::fuzz_target;
use tandeg::report::{parse_curve, write_curve};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = parse_curve(text) {
        let again = write_curve(&curve);
        let back = parse_curve(&again).expect("written curve parses");
        assert_eq!(back, curve);
        assert_eq!(write_curve(&back), again);
    }
});
