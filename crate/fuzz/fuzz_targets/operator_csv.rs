#![no_main]

use libfuzzer_sys::fuzz_target;
use phasekit::export::{operator_csv, read_operator_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(matrix) = read_operator_csv(text) {
        let back = read_operator_csv(&operator_csv(&matrix)).expect("written file reads back");
        assert_eq!(back, matrix);
    }
});
