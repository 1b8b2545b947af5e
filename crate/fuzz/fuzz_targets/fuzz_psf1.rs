#![no_main]

use libfuzzer_sys::fuzz_target;

// The PSF1 parser must reject malformed input with a Format error (never
// panic or over-allocate), and accepted arrays must survive a write/read
// round trip bit-exactly.
fuzz_target!(|data: &[u8]| {
    if let Ok(arr) = bjq_core::io::read_psf(data) {
        let bytes = bjq_core::io::write_psf(&arr);
        let again = bjq_core::io::read_psf(&bytes).expect("re-read of written PSF1");
        assert_eq!(arr.values(), again.values());
    }
});
