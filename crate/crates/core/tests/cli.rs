use regrich::cli::run;
use std::path::{Path, PathBuf};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["regrich"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn rich_poor_example() {
    let (code, out, _) = call(&["rich", "--datum", &data("poor2x2.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("POOR (conspicuous: P=Id, zero at (2,1))"), "{}", out);
    assert!(out.contains("dim Lambda = 2"), "{}", out);
}

#[test]
fn schubert_cup() {
    let (code, out, _) = call(&["schubert", "cup", "--k", "2", "--n", "4", "--l", "2,2", "--m", "1,0"]);
    assert_eq!((code, out.trim()), (0, "ZERO"));
    let (code, out, _) = call(&["schubert", "cup", "--k", "2", "--n", "4", "--l", "1,0", "--m", "1,0"]);
    assert_eq!((code, out.trim()), (0, "NONZERO"));
}

#[test]
fn schubert_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "rt.json", r#"{"k": 5, "n": 12, "jumps": [3, 6, 8, 9, 11]}"#);
    let (code, out, _) = call(&["schubert", "jumps", "--from", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("5") && out.contains("3") && out.contains("1"), "{}", out);
}

#[test]
fn scan_cubic_example() {
    let (code, out, _) = call(&["scan", "--system", &data("cubic.json"), "--grid", "101"]);
    assert_eq!(code, 0);
    assert!(out.contains("roots 1"), "{}", out);
}

#[test]
fn rigidity_witness() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "a.json",
        r#"{"rows": 2, "cols": 2, "entries": [[1, 0], [1, 0], [0, 0], [1, 0]]}"#,
    );
    let (code, out, err) = call(&["rigidity", "--matrix", m.to_str().unwrap(), "--witness"]);
    assert_eq!(code, 0, "{}", err);
    assert!(!out.is_empty());
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(call(&["rich"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["rich", "--datum", "/nonexistent/x.json"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(call(&["rich", "--datum", bad.to_str().unwrap()]).0, 2);
    let sing = write(
        dir.path(),
        "sing.json",
        r#"{"A": {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0], [0, 0], [0, 0]]}, "B": []}"#,
    );
    assert_eq!(call(&["rich", "--datum", sing.to_str().unwrap()]).0, 2);
    assert_eq!(call(&["schubert", "cup", "--k", "2", "--n", "4", "--l", "3,0", "--m", "0,0"]).0, 2);
}

#[test]
fn strict_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "space.json",
        // transitive, but its annihilator Diag(1, 1e-8) is nearly rank one
        r#"{"basis": [
            {"rows": 2, "cols": 2, "entries": [[0, 0], [1, 0], [0, 0], [0, 0]]},
            {"rows": 2, "cols": 2, "entries": [[0, 0], [0, 0], [1, 0], [0, 0]]},
            {"rows": 2, "cols": 2, "entries": [[1e-8, 0], [0, 0], [0, 0], [-1, 0]]}
        ]}"#,
    );
    let (code, out, _) = call(&["transitive", "--space", s.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Inconclusive"), "{}", out);
    assert_eq!(call(&["--strict", "transitive", "--space", s.to_str().unwrap()]).0, 3);
}

#[test]
fn json_out_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let (code, _, _) = call(&["--json-out", p.to_str().unwrap(), "scan", "--system", &data("cubic.json"), "--grid", "51"]);
        assert_eq!(code, 0);
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert!(v.is_object());
}
