#![no_main]

use libfuzzer_sys::fuzz_target;
use phasekit::statespec::parse_state_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = parse_state_spec(text) else {
        return;
    };
    // canonical text must parse back to the same canonical text
    let canonical = spec.to_string();
    let again = parse_state_spec(&canonical).expect("canonical form parses");
    assert_eq!(again.to_string(), canonical);
    if !matches!(spec, phasekit::statespec::StateSpec::File(_)) {
        let _ = spec.natural_dim();
    }
});
