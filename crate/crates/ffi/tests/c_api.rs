use std::ffi::{CStr, CString};
use std::ptr;

use weil_lab_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    wl_string_free(p);
    s
}

#[test]
fn wpr_handle_round_trip() {
    unsafe {
        let mut h = ptr::null_mut();
        let st = wl_wpr_new(
            c("0,0,1/2,1/2,1/2,1/2,1,1").as_ptr(),
            c("(1 2)(3 4)(1~ 2~)(3~ 4~), (1 3~ 4 2~)(2 1~ 3 4~)").as_ptr(),
            &mut h,
        );
        assert_eq!(st, WlStatus::Ok);
        let (mut g, mut order, mut delta) = (0usize, 0usize, 0usize);
        assert_eq!(wl_wpr_g(h, &mut g), WlStatus::Ok);
        assert_eq!(wl_wpr_group_order(h, &mut order), WlStatus::Ok);
        assert_eq!(wl_wpr_angle_rank(h, &mut delta), WlStatus::Ok);
        assert_eq!((g, order, delta), (4, 16, 3));
        let (mut simple, mut exc) = (false, false);
        assert_eq!(wl_wpr_is_geometrically_simple(h, &mut simple), WlStatus::Ok);
        assert_eq!(wl_wpr_is_exceptional(h, &mut exc), WlStatus::Ok);
        assert!(simple && exc);
        let mut js = ptr::null_mut();
        assert_eq!(wl_wpr_witnesses_json(h, &mut js), WlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(js)).unwrap();
        assert!(!v.as_array().unwrap().is_empty());
        wl_wpr_free(h);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut h = ptr::null_mut();
        let st = wl_wpr_new(c("0,1/2").as_ptr(), c("").as_ptr(), &mut h);
        assert_eq!(st, WlStatus::Validation);
        assert!(h.is_null());
        let msg = CStr::from_ptr(wl_last_error_message()).to_str().unwrap();
        assert!(msg.contains("symmetry"), "{msg}");
        assert_eq!(wl_wpr_new(ptr::null(), c("").as_ptr(), &mut h), WlStatus::NullPointer);
        let mut g = 0usize;
        assert_eq!(wl_wpr_g(ptr::null(), &mut g), WlStatus::NullPointer);
        // not transitive: the orbit of 1 misses 3
        let st = wl_wpr_new(c("0,0,1/2,1/2,1,1").as_ptr(), c("(1 2)(1~ 2~)").as_ptr(), &mut h);
        assert_eq!(st, WlStatus::Validation);
        let st = wl_wpr_new(c("0,0,1,1").as_ptr(), c("(1 5)").as_ptr(), &mut h);
        assert_ne!(st, WlStatus::Ok);
        // success clears the message
        let mut ok = ptr::null_mut();
        assert_eq!(wl_wpr_new(c("0,1").as_ptr(), c("").as_ptr(), &mut ok), WlStatus::Ok);
        assert!(wl_last_error_message().is_null());
        wl_wpr_free(ok);
        wl_wpr_free(ptr::null_mut());
        wl_string_free(ptr::null_mut());
    }
}

#[test]
fn analyzer_and_classifier_json() {
    unsafe {
        let mut js = ptr::null_mut();
        assert_eq!(wl_analyze_label(c("3.2.ac_b_a").as_ptr(), 0, &mut js), WlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(js)).unwrap();
        assert_eq!(v["angle_rank"], 2);
        assert_eq!(v["exceptional"].as_array().unwrap().len(), 0);

        let coeffs = [-1i64];
        assert_eq!(wl_analyze_coefficients(coeffs.as_ptr(), 1, 2, 2, 128, &mut js), WlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(js)).unwrap();
        assert_eq!(v["angle_rank"], 1);

        assert_eq!(wl_analyze_label(c("3.6.a_a_a").as_ptr(), 0, &mut js), WlStatus::Input);

        assert_eq!(wl_classify_json(c("0,0,1/2,1/2,1,1").as_ptr(), ptr::null(), &mut js), WlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(js)).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 1);
        assert_eq!(v["entries"][0]["alias"]["example"], "3.2.ac_b_a");
        assert_eq!(wl_classify_json(c("0,0,1/2,1/2,1,1").as_ptr(), c("bogus").as_ptr(), &mut js), WlStatus::Input);
        assert!(!CStr::from_ptr(wl_version()).to_bytes().is_empty());
    }
}

/// Compiles a small C program against the generated header and static library.
#[test]
fn header_compiles_and_links_from_c() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = [profile_dir.join("libweil_lab_ffi.a"), profile_dir.join("deps/libweil_lab_ffi.a")]
        .into_iter()
        .find(|p| p.exists());
    let Some(lib) = lib else {
        eprintln!("skipping: static library not found");
        return;
    };
    if std::process::Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "weil_lab.h"
int main(void) {
    WlWpr *h = NULL;
    if (wl_wpr_new("0,0,1/2,1/2,1,1", "(1 2~ 3~)(2 3 1~), (1 2~)(2 1~)", &h) != WL_STATUS_OK) return 1;
    size_t delta = 0; bool exc = true;
    if (wl_wpr_angle_rank(h, &delta) != WL_STATUS_OK || delta != 2) return 2;
    if (wl_wpr_is_exceptional(h, &exc) != WL_STATUS_OK || exc) return 3;
    wl_wpr_free(h);
    if (wl_wpr_new("0,1/2", "", &h) != WL_STATUS_VALIDATION) return 4;
    if (wl_last_error_message() == NULL) return 5;
    char *js = NULL;
    if (wl_analyze_label("4.3.ae_k_ay_bw", 0, &js) != WL_STATUS_OK) return 6;
    int ok = strstr(js, "\"angle_rank\":3") != NULL;
    wl_string_free(js);
    return ok ? 0 : 7;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("smoke");
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let status = std::process::Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I", include])
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = std::process::Command::new(&bin).status().unwrap();
    assert_eq!(run.code(), Some(0));
}
