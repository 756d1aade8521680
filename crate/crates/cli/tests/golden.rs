//! Every golden invocation must reproduce its stored report byte for byte.
//! Set `AINF_BLESS=1` to rewrite the stored reports.

mod common;

use common::{ainf, GOLDEN};

#[test]
fn golden_reports() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("AINF_BLESS").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in GOLDEN {
        let (code, out, err) = ainf(args);
        assert!(err.is_empty(), "{name}: {err}");
        let text = format!("{out}exit={code}\n");
        let path = dir.join(format!("{name}.out"));
        if bless {
            std::fs::write(&path, &text).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
            mismatches.push(*name);
        }
    }
    assert!(mismatches.is_empty(), "reports differ from the stored goldens: {mismatches:?}");
}
