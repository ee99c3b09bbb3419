use std::ffi::{CStr, CString};
use std::ptr;

use zhu_ffi::*;

fn take(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { zhu_string_free(p) };
    s
}

#[test]
fn version_is_static_text() {
    let v = unsafe { CStr::from_ptr(zhu_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn identities_round_trip() {
    unsafe {
        let s = zhu_session_new();
        let cfg = CString::new(r#"{"command": "identities", "identities": {"max_n": 4, "max_n_two_var": 3, "max_wt": 2}}"#).unwrap();
        assert_eq!(zhu_session_configure(s, cfg.as_ptr()), ZhuStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(zhu_session_output(s, ZhuOutput::Report, &mut out), ZhuStatus::NoOutcome);
        assert_eq!(zhu_session_exit_status(s), -1);
        assert_eq!(zhu_session_run(s), ZhuStatus::Ok);
        assert_eq!(zhu_session_exit_status(s), 0);
        assert_eq!(zhu_session_output(s, ZhuOutput::Report, &mut out), ZhuStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["config"]["identities"]["max_n"], 4);
        assert!(report["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "pass"));
        assert_eq!(zhu_session_output(s, ZhuOutput::Text, &mut out), ZhuStatus::Ok);
        assert!(take(out).contains("summary:"));
        assert_eq!(zhu_session_output(s, ZhuOutput::Manifest, &mut out), ZhuStatus::Ok);
        assert!(take(out).contains("\"sections\""));
        zhu_session_free(s);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let s = zhu_session_new();
        let bad = CString::new(r#"{"h": "1/0"}"#).unwrap();
        assert_eq!(zhu_session_configure(s, bad.as_ptr()), ZhuStatus::Usage);
        assert!(take(zhu_last_error()).contains("zero denominator"));
        let unknown = CString::new(r#"{"frobnicate": true}"#).unwrap();
        assert_eq!(zhu_session_configure(s, unknown.as_ptr()), ZhuStatus::Usage);
        assert_eq!(zhu_session_configure(s, ptr::null()), ZhuStatus::NullPointer);
        assert_eq!(zhu_session_run(ptr::null_mut()), ZhuStatus::NullPointer);
        assert_eq!(zhu_session_output(s, ZhuOutput::Text, ptr::null_mut()), ZhuStatus::NullPointer);
        zhu_session_free(s);
        zhu_session_free(ptr::null_mut());
    }
}

#[test]
fn binomial_text() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(zhu_binomial(-3, 2, &mut out), ZhuStatus::Ok);
        assert_eq!(take(out), "6");
        assert_eq!(zhu_binomial(7, 3, &mut out), ZhuStatus::Ok);
        assert_eq!(take(out), "35");
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/zhu.h")).unwrap();
    for f in [
        "zhu_version",
        "zhu_session_new",
        "zhu_session_free",
        "zhu_session_configure",
        "zhu_session_run",
        "zhu_session_output",
        "zhu_session_exit_status",
        "zhu_binomial",
        "zhu_last_error",
        "zhu_string_free",
    ] {
        assert!(header.contains(&format!("{f}(void)")) || header.contains(&format!(" {f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct ZhuSession ZhuSession;"));
    assert!(header.contains("ZHU_STATUS_CHECKS_FAILED = 1"));
}
