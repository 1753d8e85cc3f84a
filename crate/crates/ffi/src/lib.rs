//! C ABI for the hm2rbm library.
//!
//! Conventions: objects are passed as opaque handles created by `_parse` /
//! `_synthesize` calls and released by the matching `_free`; every fallible
//! function returns a status code and writes its result through out-pointers;
//! the message for the last failure on the current thread is available from
//! [`hm2rbm_last_error_message`]. Strings returned through out-pointers are
//! owned by the caller and must be released with [`hm2rbm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hm2rbm::covering::{emit_tables, param_lower_bound, u_bound, BOUNDS_CSV_HEADER, DEFAULT_NODE_BUDGET};
use hm2rbm::error::Error;
use hm2rbm::files::{model_to_json, parse_model, parse_rbm, rbm_to_json};
use hm2rbm::models::{
    hierarchical_distribution, hierarchical_energy, kl_between_energies, rbm_free_energy,
    rbm_marginal, total_variation,
};
use hm2rbm::subsetpoly::{mobius_transform, VarSet};
use hm2rbm::synth::{default_plan, synthesize_rbm, HierarchicalModelSpec, RBMParams};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hm2RbmStatus {
    /// Success.
    Ok = 0,
    /// Invalid input: malformed JSON, out-of-range argument, mismatched sizes.
    InputError = 2,
    /// Synthesis could not reach the requested precision or cover the targets.
    PrecisionError = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    Utf8Error = 5,
}

/// Opaque handle to a hierarchical-model energy specification.
pub struct Hm2RbmModel(HierarchicalModelSpec);

/// Opaque handle to a set of RBM parameters.
pub struct Hm2RbmRbm(RBMParams);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: Hm2RbmStatus, message: String) -> Hm2RbmStatus {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
    status
}

fn fail_core(err: Error) -> Hm2RbmStatus {
    let status = match err {
        Error::ToleranceNotMet { .. }
        | Error::OmegaBelowFloor { .. }
        | Error::EscalationExhausted { .. }
        | Error::BracketFailed { .. }
        | Error::UncoveredInteraction { .. } => Hm2RbmStatus::PrecisionError,
        _ => Hm2RbmStatus::InputError,
    };
    fail(status, err.to_string())
}

/// Message describing the most recent failure on this thread.
///
/// The pointer stays valid until the next failing call on the same thread.
/// Never null; the message is empty if nothing has failed yet.
#[no_mangle]
pub extern "C" fn hm2rbm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, Hm2RbmStatus> {
    if ptr.is_null() {
        return Err(fail(Hm2RbmStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(Hm2RbmStatus::Utf8Error, "string argument is not UTF-8".into()))
}

fn give_string(out: *mut *mut c_char, value: String) -> Hm2RbmStatus {
    let replaced = value.replace('\0', " ");
    let cstring = CString::new(replaced).expect("nul bytes removed");
    unsafe {
        *out = cstring.into_raw();
    }
    Hm2RbmStatus::Ok
}

/// Parses a model JSON document into a handle.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable storage
/// for one pointer. On success `*out` owns the model and must be released with
/// [`hm2rbm_model_free`].
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_model_parse(
    json: *const c_char,
    out: *mut *mut Hm2RbmModel,
) -> Hm2RbmStatus {
    if out.is_null() {
        return fail(Hm2RbmStatus::NullPointer, "null out pointer".into());
    }
    let text = match read_utf8(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse_model(text) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(Hm2RbmModel(spec)));
            Hm2RbmStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail_core(e)
        }
    }
}

/// Releases a model handle. Passing null is a no-op.
///
/// # Safety
/// `model` must be null or a pointer previously returned by
/// [`hm2rbm_model_parse`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_model_free(model: *mut Hm2RbmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Serializes a model handle canonically (sorted keys, %.17g floats).
///
/// # Safety
/// `model` must be a live handle; `out` must point to writable storage for one
/// pointer. The returned string must be released with [`hm2rbm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_model_to_json(
    model: *const Hm2RbmModel,
    out: *mut *mut c_char,
) -> Hm2RbmStatus {
    if model.is_null() || out.is_null() {
        return fail(Hm2RbmStatus::NullPointer, "null argument".into());
    }
    give_string(out, model_to_json(&(*model).0))
}

/// Number of visible variables of a model handle.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_model_vars(model: *const Hm2RbmModel) -> u32 {
    if model.is_null() {
        return 0;
    }
    (*model).0.v() as u32
}

/// Parses an RBM JSON document into a handle.
///
/// # Safety
/// As [`hm2rbm_model_parse`]; release with [`hm2rbm_rbm_free`].
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_rbm_parse(
    json: *const c_char,
    out: *mut *mut Hm2RbmRbm,
) -> Hm2RbmStatus {
    if out.is_null() {
        return fail(Hm2RbmStatus::NullPointer, "null out pointer".into());
    }
    let text = match read_utf8(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse_rbm(text) {
        Ok(params) => {
            *out = Box::into_raw(Box::new(Hm2RbmRbm(params)));
            Hm2RbmStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail_core(e)
        }
    }
}

/// Releases an RBM handle. Passing null is a no-op.
///
/// # Safety
/// `rbm` must be null or a pointer previously returned by a successful call
/// that produced an RBM handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_rbm_free(rbm: *mut Hm2RbmRbm) {
    if !rbm.is_null() {
        drop(Box::from_raw(rbm));
    }
}

/// Serializes an RBM handle canonically.
///
/// # Safety
/// As [`hm2rbm_model_to_json`].
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_rbm_to_json(
    rbm: *const Hm2RbmRbm,
    out: *mut *mut c_char,
) -> Hm2RbmStatus {
    if rbm.is_null() || out.is_null() {
        return fail(Hm2RbmStatus::NullPointer, "null argument".into());
    }
    give_string(out, rbm_to_json(&(*rbm).0))
}

/// Number of hidden units of an RBM handle.
///
/// # Safety
/// `rbm` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_rbm_hidden_count(rbm: *const Hm2RbmRbm) -> u32 {
    if rbm.is_null() {
        return 0;
    }
    (*rbm).0.hidden_count() as u32
}

/// Compiles a model into RBM parameters along the default cover plan.
///
/// `omega` is the shared scale (escalated per unit when needed) and `tol` the
/// largest acceptable residual coefficient magnitude.
///
/// # Safety
/// `model` must be a live handle and `out` writable storage for one pointer.
/// On success `*out` must be released with [`hm2rbm_rbm_free`].
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_synthesize(
    model: *const Hm2RbmModel,
    omega: f64,
    tol: f64,
    out: *mut *mut Hm2RbmRbm,
) -> Hm2RbmStatus {
    if model.is_null() || out.is_null() {
        return fail(Hm2RbmStatus::NullPointer, "null argument".into());
    }
    let spec = &(*model).0;
    let result = default_plan(spec).and_then(|plan| synthesize_rbm(spec, &plan, omega, tol));
    match result {
        Ok((params, _report)) => {
            *out = Box::into_raw(Box::new(Hm2RbmRbm(params)));
            Hm2RbmStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail_core(e)
        }
    }
}

/// Compares a model's distribution against an RBM's visible marginal by exact
/// enumeration, writing the KL divergence, total variation distance, and the
/// largest coefficient residual over sets of size >= 2.
///
/// # Safety
/// `model` and `rbm` must be live handles; the three out-pointers must each be
/// null or point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_verify(
    model: *const Hm2RbmModel,
    rbm: *const Hm2RbmRbm,
    kl_out: *mut f64,
    tv_out: *mut f64,
    max_residual_out: *mut f64,
) -> Hm2RbmStatus {
    if model.is_null() || rbm.is_null() {
        return fail(Hm2RbmStatus::NullPointer, "null handle".into());
    }
    let spec = &(*model).0;
    let params = &(*rbm).0;
    if spec.v() != params.v() {
        return fail_core(Error::VariableCountMismatch {
            left: spec.v(),
            right: params.v(),
        });
    }
    let computed = (|| -> hm2rbm::Result<(f64, f64, f64)> {
        let target_energy = hierarchical_energy(spec)?;
        let free_energy = rbm_free_energy(params)?;
        let kl = kl_between_energies(&target_energy, &free_energy)?;
        let tv = total_variation(&hierarchical_distribution(spec)?, &rbm_marginal(params)?)?;
        let realized = mobius_transform(&free_energy);
        let target = spec.to_poly();
        let mut max_residual = 0.0f64;
        for bits in 0..(1u32 << spec.v()) {
            let s = VarSet::from_bits(bits).expect("within cap");
            if s.len() >= 2 {
                max_residual = max_residual.max((target.coeff(s) - realized.coeff(s)).abs());
            }
        }
        Ok((kl, tv, max_residual))
    })();
    match computed {
        Ok((kl, tv, max_residual)) => {
            if !kl_out.is_null() {
                *kl_out = kl;
            }
            if !tv_out.is_null() {
                *tv_out = tv;
            }
            if !max_residual_out.is_null() {
                *max_residual_out = max_residual;
            }
            Hm2RbmStatus::Ok
        }
        Err(e) => fail_core(e),
    }
}

/// Emits the hidden-unit bound table for `2 <= k <= v <= v_max` as CSV.
///
/// # Safety
/// `out` must point to writable storage for one pointer; release the string
/// with [`hm2rbm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_bounds_csv(
    v_max: u32,
    use_oracle: bool,
    out: *mut *mut c_char,
) -> Hm2RbmStatus {
    if out.is_null() {
        return fail(Hm2RbmStatus::NullPointer, "null out pointer".into());
    }
    match emit_tables(v_max as usize, use_oracle, DEFAULT_NODE_BUDGET) {
        Ok(rows) => {
            let mut csv = String::from(BOUNDS_CSV_HEADER);
            csv.push('\n');
            for row in rows {
                csv.push_str(&row.to_csv());
                csv.push('\n');
            }
            give_string(out, csv)
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail_core(e)
        }
    }
}

/// Hidden-unit upper bound `U(v, k)`; see the library documentation.
///
/// # Safety
/// `out` must be null or point to a writable u64.
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_u_bound(
    v: u32,
    k: u32,
    use_oracle: bool,
    out: *mut u64,
) -> Hm2RbmStatus {
    match u_bound(v as usize, k as usize, use_oracle) {
        Ok(value) => {
            if !out.is_null() {
                *out = value;
            }
            Hm2RbmStatus::Ok
        }
        Err(e) => fail_core(e),
    }
}

/// Parameter-counting lower bound on universal hidden-unit counts.
#[no_mangle]
pub extern "C" fn hm2rbm_param_lower_bound(v: u32) -> u64 {
    if v == 0 || v > 63 {
        return 0;
    }
    param_lower_bound(v as usize)
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer previously returned through one of this
/// library's out-parameters, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hm2rbm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
