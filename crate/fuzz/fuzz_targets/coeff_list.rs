#![no_main]

use libfuzzer_sys::fuzz_target;
use tandeg::report::parse_coeff_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_coeff_list(text) {
        assert!(!v.is_empty());
        let joined: Vec<String> = v.iter().map(i64::to_string).collect();
        assert_eq!(parse_coeff_list(&joined.join(",")).unwrap(), v);
        assert_eq!(parse_coeff_list(&format!("[{}]", joined.join(", "))).unwrap(), v);
    }
});
