#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(z) = cylschur_core::parse::parse_complex(s) {
            if z.re.is_finite() && z.im.is_finite() {
                let rendered = cylschur_core::parse::format_complex(z);
                let again = cylschur_core::parse::parse_complex(&rendered).unwrap();
                assert_eq!((z.re.to_bits(), z.im.to_bits()), (again.re.to_bits(), again.im.to_bits()));
            }
        }
    }
});
