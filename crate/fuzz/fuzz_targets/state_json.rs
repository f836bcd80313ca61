#![no_main]

use libfuzzer_sys::fuzz_target;
use phasekit::fock::TruncatedState;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(state) = TruncatedState::from_json_str(text, "fuzz") {
        assert!(state.norm_defect() < 1e-12);
        let back = TruncatedState::from_json_str(&state.to_json_string(), "fuzz").expect("re-read");
        assert_eq!(back.dim(), state.dim());
    }
});
