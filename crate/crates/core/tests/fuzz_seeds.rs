//! Runs the checked-in fuzz corpus through the same properties the fuzz
//! targets assert.

use std::fs;
use std::path::PathBuf;

use phasekit::export::{operator_csv, read_operator_csv};
use phasekit::fock::TruncatedState;
use phasekit::statespec::parse_state_spec;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty());
    files
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect()
}

#[test]
fn state_spec_seeds_are_canonical_fixed_points() {
    for (path, text) in seeds("parse_state_spec") {
        let spec = parse_state_spec(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let canonical = spec.to_string();
        assert_eq!(parse_state_spec(&canonical).unwrap().to_string(), canonical);
    }
}

#[test]
fn state_json_seeds() {
    let mut accepted = 0;
    for (_, text) in seeds("state_json") {
        if let Ok(state) = TruncatedState::from_json_str(&text, "seed") {
            accepted += 1;
            assert!(state.norm_defect() < 1e-12);
            let back = TruncatedState::from_json_str(&state.to_json_string(), "seed").unwrap();
            assert_eq!(back.dim(), state.dim());
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn operator_csv_seeds() {
    let mut accepted = 0;
    for (_, text) in seeds("operator_csv") {
        if let Ok(m) = read_operator_csv(&text) {
            accepted += 1;
            assert_eq!(read_operator_csv(&operator_csv(&m)).unwrap(), m);
        }
    }
    assert!(accepted >= 3);
}
