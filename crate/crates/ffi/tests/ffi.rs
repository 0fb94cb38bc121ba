use regrich_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn flat(rows: &[&[f64]]) -> Vec<f64> {
    rows.iter().flat_map(|r| r.iter().flat_map(|&x| [x, 0.0])).collect()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(regrich_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn poor_datum() {
    let a = flat(&[&[2.0, 0.0], &[0.0, 1.0]]);
    let b = flat(&[&[0.0, -1.0], &[0.0, 0.0]]);
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(regrich_datum_new(2, 1, a.as_ptr(), b.as_ptr(), ptr::null(), &mut h), RegrichStatus::Ok);
        let mut v = RegrichVerdict::Rich;
        let mut margin = -1.0;
        assert_eq!(regrich_is_rich(h, ptr::null(), &mut v, &mut margin), RegrichStatus::Ok);
        assert_eq!(v, RegrichVerdict::Poor);
        assert!(margin >= 0.0);
        let mut dim = 0;
        assert_eq!(regrich_lambda_dim(h, ptr::null(), &mut dim), RegrichStatus::Ok);
        assert_eq!(dim, 2);
        let x0 = [1.0, 0.0, 0.0, 0.0];
        let mut r = 99;
        assert_eq!(regrich_regularity_rank(h, x0.as_ptr(), 3, ptr::null(), &mut r), RegrichStatus::Ok);
        assert_eq!(r, 0);
        regrich_datum_free(h);
    }
}

#[test]
fn config_and_rich_datum() {
    let a = flat(&[&[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 7.0]]);
    let b = flat(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]]);
    unsafe {
        let c = regrich_config_new();
        assert_eq!(regrich_config_set_seed(c, 7), RegrichStatus::Ok);
        assert_eq!(regrich_config_set_tolerances(c, -1.0, 1e-10), RegrichStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(regrich_config_set_tolerances(c, 1e-9, 1e-10), RegrichStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(regrich_datum_new(3, 1, a.as_ptr(), b.as_ptr(), c, &mut h), RegrichStatus::Ok);
        let mut v = RegrichVerdict::Poor;
        assert_eq!(regrich_is_rich(h, c, &mut v, ptr::null_mut()), RegrichStatus::Ok);
        assert_eq!(v, RegrichVerdict::Rich);
        regrich_datum_free(h);
        regrich_config_free(c);
    }
}

#[test]
fn error_codes() {
    let a = flat(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(regrich_datum_new(2, 0, a.as_ptr(), ptr::null(), ptr::null(), &mut h), RegrichStatus::Singular);
        assert!(last_error().contains("singular"), "{}", last_error());
        assert!(h.is_null());
        assert_eq!(regrich_datum_new(2, 1, a.as_ptr(), ptr::null(), ptr::null(), &mut h), RegrichStatus::NullPointer);
        let mut v = RegrichVerdict::Rich;
        assert_eq!(regrich_is_rich(ptr::null(), ptr::null(), &mut v, ptr::null_mut()), RegrichStatus::NullPointer);
        regrich_datum_free(ptr::null_mut());
        regrich_config_free(ptr::null_mut());
        regrich_string_free(ptr::null_mut());
    }
}

#[test]
fn rigidity_and_cup() {
    let w = std::f64::consts::TAU / 3.0;
    let a: Vec<f64> = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, w.cos(), w.sin(), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, (2.0 * w).cos(), (2.0 * w).sin()];
    let (mut c, mut acyc, mut bound) = (0, 0, 0);
    unsafe {
        assert_eq!(regrich_rigidity_bound(3, a.as_ptr(), ptr::null(), &mut c, &mut acyc, &mut bound), RegrichStatus::Ok);
        assert_eq!((c, acyc, bound), (1, 3, 3));
        let (l, m) = ([2usize, 2], [1usize, 0]);
        let mut nz = true;
        assert_eq!(regrich_cup_nonzero(2, 4, l.as_ptr(), m.as_ptr(), &mut nz), RegrichStatus::Ok);
        assert!(!nz);
        let bad = [3usize, 0];
        assert_eq!(regrich_cup_nonzero(2, 4, bad.as_ptr(), m.as_ptr(), &mut nz), RegrichStatus::InvalidArgument);
    }
}

#[test]
fn scan_json() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/cubic.json");
    let text = CString::new(std::fs::read_to_string(path).unwrap()).unwrap();
    let grid = [101usize];
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(regrich_scan_json(text.as_ptr(), grid.as_ptr(), 1, ptr::null(), &mut rep), RegrichStatus::Ok);
        let s = CStr::from_ptr(rep).to_str().unwrap().to_owned();
        regrich_string_free(rep);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["refined_roots"].as_array().unwrap().len(), 1);
        let junk = CString::new("{").unwrap();
        assert_eq!(regrich_scan_json(junk.as_ptr(), grid.as_ptr(), 1, ptr::null(), &mut rep), RegrichStatus::InvalidArgument);
    }
}

#[test]
fn header_lists_entry_points() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/regrich.h")).unwrap();
    for f in ["regrich_datum_new", "regrich_is_rich", "regrich_scan_json", "regrich_last_error", "REGRICH_STATUS_OK", "RegrichDatum"] {
        assert!(h.contains(f), "{} missing from header", f);
    }
}
