#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(profile) = cylschur_core::parse::parse_profile(s) {
            let rendered = cylschur_core::parse::format_profile(&profile);
            let again = cylschur_core::parse::parse_profile(&rendered).unwrap();
            assert_eq!(profile, again);
            assert_eq!(profile.d() + profile.l(), profile.period());
        }
    }
});
