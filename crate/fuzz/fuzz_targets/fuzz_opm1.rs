#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = bjq_core::io::read_opm(data) {
        let bytes = bjq_core::io::write_opm(&m);
        let again = bjq_core::io::read_opm(&bytes).expect("re-read of written OPM1");
        assert_eq!(m.matrix(), again.matrix());
    }
});
