#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // must never panic; accepted values must round-trip
        if let Ok(p) = cylschur_core::parse::parse_partition(s) {
            let rendered = cylschur_core::parse::format_partition(&p);
            let again = cylschur_core::parse::parse_partition(&rendered).unwrap();
            assert_eq!(p, again);
        }
    }
});
