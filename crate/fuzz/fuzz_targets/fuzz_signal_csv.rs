#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = bjq_core::io::read_signal_csv(data) {
        let text = bjq_core::io::write_signal_csv(&f);
        let again = bjq_core::io::read_signal_csv(text.as_bytes()).expect("re-read of written CSV");
        assert_eq!(f.values(), again.values());
    }
});
