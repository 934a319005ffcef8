use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ehpcert_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ehp_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = ehp_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

unsafe fn zoo(name: &str, params: &str) -> *mut EhpAlgebra {
    let mut a = ptr::null_mut();
    let st = ehp_algebra_from_zoo(c(name).as_ptr(), c(params).as_ptr(), &mut a);
    assert_eq!(st, EhpStatus::Ok);
    a
}

#[test]
fn so3_degree_and_bound() {
    unsafe {
        let a = zoo("so", r#"{"n": 3}"#);
        let mut dim = 0usize;
        assert_eq!(ehp_algebra_dim(a, &mut dim), EhpStatus::Ok);
        assert_eq!(dim, 3);

        let mut degree = 0u32;
        let mut cert = ptr::null_mut();
        assert_eq!(ehp_nil_degree(a, 1, 4, ptr::null(), &mut degree, &mut cert), EhpStatus::Ok);
        assert_eq!(degree, 2);
        let v: serde_json::Value = serde_json::from_str(&take(cert)).unwrap();
        assert_eq!(v["degree"], 2);

        let mut ok = -1;
        assert_eq!(ehp_nil_bound(a, 1, 1, ptr::null(), &mut ok, ptr::null_mut()), EhpStatus::Ok);
        assert_eq!(ok, 0);
        let opts = EhpNilOptions { modular: 1, trials: 20, seed: 7 };
        assert_eq!(ehp_nil_bound(a, 1, 2, &opts, &mut ok, ptr::null_mut()), EhpStatus::Ok);
        assert_eq!(ok, 1);
        ehp_algebra_free(a);
    }
}

#[test]
fn describe_reports_flags() {
    unsafe {
        let mut a = ptr::null_mut();
        let st = ehp_algebra_from_json(c(r#"{"zoo": "abelian", "k": 2}"#).as_ptr(), &mut a);
        assert_eq!(st, EhpStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(ehp_algebra_describe_json(a, &mut out), EhpStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["dim"], 2);
        assert!(v["flags"].is_object());
        ehp_algebra_free(a);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(ehp_algebra_from_json(ptr::null(), &mut a), EhpStatus::NullPointer);
        assert_eq!(ehp_algebra_from_json(c("{not json").as_ptr(), &mut a), EhpStatus::Parse);
        assert!(!last_error().is_empty());
        assert_eq!(
            ehp_algebra_from_zoo(c("no_such_algebra").as_ptr(), ptr::null(), &mut a),
            EhpStatus::Parse
        );
        assert!(last_error().contains("no_such_algebra"));

        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(ehp_algebra_from_json(bad.as_ptr().cast(), &mut a), EhpStatus::InvalidUtf8);

        let mut dim = 0usize;
        assert_eq!(ehp_algebra_dim(ptr::null(), &mut dim), EhpStatus::NullPointer);

        // A successful call clears the message.
        let ok = zoo("so", r#"{"n": 2}"#);
        assert_eq!(ehp_algebra_dim(ok, &mut dim), EhpStatus::Ok);
        assert!(ehp_last_error_message().is_null());
        ehp_algebra_free(ok);
        ehp_algebra_free(ptr::null_mut());
    }
}

#[test]
fn manifest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = r#"{
        "schema_version": 1,
        "algebra": {"zoo": "so", "n": 3},
        "checks": [
            {"check": "nil_degree", "k": 1, "s_max": 3},
            {"check": "nil_bound", "k": 1, "s": 1}
        ]
    }"#;
    unsafe {
        let mut code = -1;
        let mut summary = ptr::null_mut();
        let out = c(dir.path().to_str().unwrap());
        let st = ehp_run_manifest(c(manifest).as_ptr(), out.as_ptr(), &mut code, &mut summary);
        assert_eq!(st, EhpStatus::Ok);
        assert_eq!(code, 1, "the (1,1) bound is refuted");
        let v: serde_json::Value = serde_json::from_str(&take(summary)).unwrap();
        assert_eq!(v["counts"]["certified"], 1);
        assert_eq!(v["counts"]["refuted"], 1);
    }
    assert!(dir.path().join("summary.json").exists());
    assert!(dir.path().join("00_nil_degree.json").exists());
}

#[test]
fn manifest_errors_map_to_parse() {
    unsafe {
        let mut code = -1;
        let st = ehp_run_manifest(c(r#"{"checks": []}"#).as_ptr(), ptr::null(), &mut code, ptr::null_mut());
        assert_eq!(st, EhpStatus::Parse);
        assert!(last_error().contains("manifest"));
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(ehp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ehpcert.h")).unwrap();
    for name in [
        "ehp_algebra_from_json",
        "ehp_algebra_from_zoo",
        "ehp_algebra_dim",
        "ehp_algebra_describe_json",
        "ehp_algebra_free",
        "ehp_nil_bound",
        "ehp_nil_degree",
        "ehp_run_manifest",
        "ehp_last_error_message",
        "ehp_string_free",
        "ehp_version",
        "typedef struct EhpAlgebra EhpAlgebra",
        "EHP_STATUS_RESOURCE_CAP = 5",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
