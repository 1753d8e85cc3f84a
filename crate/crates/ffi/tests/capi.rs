//! Exercises the C ABI through the exported extern "C" functions, including
//! handle lifecycles, status codes, and the last-error message.

use std::ffi::{CStr, CString};
use std::ptr;

use hm2rbm_ffi::*;

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(hm2rbm_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

fn take_string(raw: *mut std::ffi::c_char) -> String {
    assert!(!raw.is_null());
    let s = unsafe { CStr::from_ptr(raw).to_string_lossy().into_owned() };
    unsafe { hm2rbm_string_free(raw) };
    s
}

const FULL3: &str = r#"{"v": 3, "interactions": [
    {"set": [0,1,2], "weight": 1.0}, {"set": [0,1], "weight": -0.5},
    {"set": [0,2], "weight": 0.3}, {"set": [1,2], "weight": 0.8}
]}"#;

#[test]
fn full_pipeline_through_the_c_abi() {
    unsafe {
        let json = CString::new(FULL3).unwrap();
        let mut model: *mut Hm2RbmModel = ptr::null_mut();
        assert_eq!(hm2rbm_model_parse(json.as_ptr(), &mut model), Hm2RbmStatus::Ok);
        assert_eq!(hm2rbm_model_vars(model), 3);

        let mut rbm: *mut Hm2RbmRbm = ptr::null_mut();
        assert_eq!(
            hm2rbm_synthesize(model, 60.0, 1e-6, &mut rbm),
            Hm2RbmStatus::Ok
        );
        assert_eq!(hm2rbm_rbm_hidden_count(rbm), 3);

        let mut kl = f64::NAN;
        let mut tv = f64::NAN;
        let mut residual = f64::NAN;
        assert_eq!(
            hm2rbm_verify(model, rbm, &mut kl, &mut tv, &mut residual),
            Hm2RbmStatus::Ok
        );
        assert!(kl.abs() < 1e-9, "kl = {kl}");
        assert!(tv < 1e-9, "tv = {tv}");
        assert!(residual < 1e-6, "residual = {residual}");

        // Serialize, reparse, verify again: same machine.
        let mut raw: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hm2rbm_rbm_to_json(rbm, &mut raw), Hm2RbmStatus::Ok);
        let rbm_json = take_string(raw);
        let reparse_input = CString::new(rbm_json.clone()).unwrap();
        let mut rbm2: *mut Hm2RbmRbm = ptr::null_mut();
        assert_eq!(
            hm2rbm_rbm_parse(reparse_input.as_ptr(), &mut rbm2),
            Hm2RbmStatus::Ok
        );
        let mut raw2: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hm2rbm_rbm_to_json(rbm2, &mut raw2), Hm2RbmStatus::Ok);
        assert_eq!(take_string(raw2), rbm_json);

        let mut model_json_raw: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hm2rbm_model_to_json(model, &mut model_json_raw), Hm2RbmStatus::Ok);
        let model_json = take_string(model_json_raw);
        assert!(model_json.contains("\"v\": 3"));

        hm2rbm_rbm_free(rbm2);
        hm2rbm_rbm_free(rbm);
        hm2rbm_model_free(model);
    }
}

#[test]
fn parse_failures_set_status_and_message() {
    unsafe {
        let bad = CString::new("{ not json").unwrap();
        let mut model: *mut Hm2RbmModel = ptr::null_mut();
        assert_eq!(
            hm2rbm_model_parse(bad.as_ptr(), &mut model),
            Hm2RbmStatus::InputError
        );
        assert!(model.is_null());
        assert!(last_error().contains("invalid model file"));

        assert_eq!(
            hm2rbm_model_parse(ptr::null(), &mut model),
            Hm2RbmStatus::NullPointer
        );
        let json = CString::new(FULL3).unwrap();
        assert_eq!(
            hm2rbm_model_parse(json.as_ptr(), ptr::null_mut()),
            Hm2RbmStatus::NullPointer
        );
    }
}

#[test]
fn synthesis_precision_failures_report_status_three_semantics() {
    unsafe {
        let json = CString::new(FULL3).unwrap();
        let mut model: *mut Hm2RbmModel = ptr::null_mut();
        assert_eq!(hm2rbm_model_parse(json.as_ptr(), &mut model), Hm2RbmStatus::Ok);
        let mut rbm: *mut Hm2RbmRbm = ptr::null_mut();
        // An unreachable tolerance is a precision error, not an input error.
        assert_eq!(
            hm2rbm_synthesize(model, 60.0, 1e-30, &mut rbm),
            Hm2RbmStatus::PrecisionError
        );
        assert!(rbm.is_null());
        assert!(last_error().contains("residual"));
        hm2rbm_model_free(model);
    }
}

#[test]
fn verify_rejects_mismatched_handles() {
    unsafe {
        let model_json = CString::new(r#"{"v": 2, "interactions": []}"#).unwrap();
        let rbm_json =
            CString::new(r#"{"v": 3, "visible_bias": [0, 0, 0], "hidden": []}"#).unwrap();
        let mut model: *mut Hm2RbmModel = ptr::null_mut();
        let mut rbm: *mut Hm2RbmRbm = ptr::null_mut();
        assert_eq!(hm2rbm_model_parse(model_json.as_ptr(), &mut model), Hm2RbmStatus::Ok);
        assert_eq!(hm2rbm_rbm_parse(rbm_json.as_ptr(), &mut rbm), Hm2RbmStatus::Ok);
        assert_eq!(
            hm2rbm_verify(model, rbm, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            Hm2RbmStatus::InputError
        );
        hm2rbm_rbm_free(rbm);
        hm2rbm_model_free(model);
    }
}

#[test]
fn bounds_and_scalar_queries() {
    unsafe {
        let mut raw: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hm2rbm_bounds_csv(6, false, &mut raw), Hm2RbmStatus::Ok);
        let csv = take_string(raw);
        assert!(csv.starts_with("v,k,u_bound,"));
        assert!(csv.contains("\n4,4,6,"));

        assert_eq!(hm2rbm_bounds_csv(99, false, &mut raw), Hm2RbmStatus::InputError);

        let mut value = 0u64;
        assert_eq!(hm2rbm_u_bound(6, 6, false, &mut value), Hm2RbmStatus::Ok);
        assert_eq!(value, 21);
        assert_eq!(hm2rbm_u_bound(4, 9, false, &mut value), Hm2RbmStatus::InputError);

        assert_eq!(hm2rbm_param_lower_bound(20), 49932);
        assert_eq!(hm2rbm_param_lower_bound(0), 0);

        // Free functions tolerate null.
        hm2rbm_string_free(ptr::null_mut());
        hm2rbm_rbm_free(ptr::null_mut());
        hm2rbm_model_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_exists_and_names_the_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/hm2rbm.h"
    ))
    .expect("header generated by the build script");
    for symbol in [
        "hm2rbm_model_parse",
        "hm2rbm_synthesize",
        "hm2rbm_verify",
        "hm2rbm_bounds_csv",
        "hm2rbm_string_free",
        "Hm2RbmStatus",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
