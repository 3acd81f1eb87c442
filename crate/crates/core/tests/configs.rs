use std::path::Path;

use fracac_core::config::{parse_config, ExperimentKind};

#[test]
fn shipped_manifests_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let text = std::fs::read_to_string(&path).unwrap();
            let m = parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            if m.kind == ExperimentKind::Simulate {
                assert_eq!(m.snapshot_times, vec![5.0, 20.0, 40.0, 80.0]);
            }
            seen += 1;
        }
    }
    assert!(seen >= 8);
}
