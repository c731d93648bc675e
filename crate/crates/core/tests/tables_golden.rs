//! The regenerated tables must match the committed golden file. Set
//! `GERMLAB_BLESS=1` to rewrite it.

use std::path::PathBuf;

use germlab::tables::default_tables;

#[test]
fn tables_match_golden() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/tables.json");
    let fresh = serde_json::to_string_pretty(&default_tables().unwrap()).unwrap() + "\n";
    if std::env::var_os("GERMLAB_BLESS").is_some() {
        std::fs::write(&path, &fresh).unwrap();
        return;
    }
    let golden = std::fs::read_to_string(&path).expect("golden file present");
    assert!(golden == fresh, "tables differ from {}; rerun with GERMLAB_BLESS=1 after review", path.display());
}

#[test]
fn tables_are_deterministic() {
    let a = serde_json::to_string(&default_tables().unwrap()).unwrap();
    let b = serde_json::to_string(&default_tables().unwrap()).unwrap();
    assert_eq!(a, b);
}
