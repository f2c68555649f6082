#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = cylschur_core::parse::parse_specialization(s) {
            let rendered = cylschur_core::parse::format_specialization(&spec);
            let again = cylschur_core::parse::parse_specialization(&rendered).unwrap();
            assert_eq!(spec, again);
            // exercising a power sum must not panic either
            let _ = spec.scaled_power_sum(3);
        }
    }
});
