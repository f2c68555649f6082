#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = cylschur_core::parse::parse_process_config(s) {
            let rendered = cylschur_core::parse::format_process_config(&spec);
            let again = cylschur_core::parse::parse_process_config(&rendered).unwrap();
            assert_eq!(
                cylschur_core::parse::format_process_config(&again),
                rendered
            );
        }
    }
});
