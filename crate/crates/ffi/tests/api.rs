use std::ffi::{CStr, CString};
use std::ptr;

use rigidform_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rf_last_error()) }.to_str().unwrap().to_owned()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    rf_string_free(p);
    s
}

#[test]
fn bundled_scenario_runs_and_passes() {
    unsafe {
        let name = CString::new("c2-sign-torus").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(rf_scenario_bundled(name.as_ptr(), &mut s), RfStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(rf_run(s, ptr::null(), &mut r), RfStatus::Ok);
        assert!(rf_report_passed(r));
        assert!(rf_report_len(r) > 0);
        let mut text = ptr::null_mut();
        assert_eq!(rf_report_to_toml(r, &mut text), RfStatus::Ok);
        assert!(take_string(text).contains("invariants = [\"4\"]"));
        rf_report_free(r);
        rf_scenario_free(s);
    }
}

#[test]
fn parse_errors_set_the_message() {
    unsafe {
        let text = CString::new("[[modules]]\nid = \"M\"\nrank = 1\ncolour = 3\n").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(rf_scenario_parse(text.as_ptr(), &mut s), RfStatus::Input);
        assert!(s.is_null());
        assert!(last_error().contains("line 4"), "{}", last_error());
    }
}

#[test]
fn null_arguments_are_reported() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(rf_scenario_parse(ptr::null(), &mut s), RfStatus::NullPointer);
        assert_eq!(last_error(), "text is null");
        let mut r = ptr::null_mut();
        assert_eq!(rf_run(ptr::null(), ptr::null(), &mut r), RfStatus::NullPointer);
        assert!(!rf_report_passed(ptr::null()));
        rf_scenario_free(ptr::null_mut());
        rf_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8_is_rejected() {
    unsafe {
        let bytes = [0xffu8, 0xfe, 0];
        let mut s = ptr::null_mut();
        assert_eq!(rf_scenario_parse(bytes.as_ptr().cast(), &mut s), RfStatus::InvalidUtf8);
    }
}

#[test]
fn generated_scenarios_round_trip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(rf_scenario_generate(3, ptr::null(), &mut s), RfStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(rf_scenario_to_toml(s, &mut text), RfStatus::Ok);
        let toml = CString::new(take_string(text)).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(rf_scenario_parse(toml.as_ptr(), &mut again), RfStatus::Ok);
        let options = RfRunOptions { seed: 7, budget: rf_default_budget(), fail_fast: false };
        let mut r = ptr::null_mut();
        assert_eq!(rf_run(again, &options, &mut r), RfStatus::Ok);
        assert!(rf_report_passed(r));
        rf_report_free(r);
        rf_scenario_free(again);
        rf_scenario_free(s);
    }
}

#[test]
fn bounds_above_the_caps_fail() {
    unsafe {
        let bounds = RfBounds { max_order: 13, ..rf_bounds_default() };
        let mut s = ptr::null_mut();
        assert_eq!(rf_scenario_generate(1, &bounds, &mut s), RfStatus::Input);
        assert!(last_error().starts_with("max_order"), "{}", last_error());
    }
}

#[test]
fn smith_diagonal_of_a_small_matrix() {
    let m = [2i64, 4, 4, -6, 6, 12, 10, -4, -16];
    let mut d = [0i64; 3];
    unsafe {
        assert_eq!(rf_smith_diagonal(m.as_ptr(), 3, 3, d.as_mut_ptr()), RfStatus::Ok);
    }
    assert_eq!(d, [2, 6, 12]);
}

#[test]
fn smith_diagonal_overflow() {
    let m = [i64::MAX, 0, 0, i64::MAX - 1];
    let mut d = [0i64; 2];
    unsafe {
        assert_eq!(rf_smith_diagonal(m.as_ptr(), 2, 2, d.as_mut_ptr()), RfStatus::Overflow);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rigidform.h")).unwrap();
    for name in ["typedef struct RfScenario RfScenario", "RF_STATUS_OVERFLOW", "rf_run(", "rf_smith_diagonal(", "rf_last_error("] {
        assert!(header.contains(name), "missing {name}");
    }
}
