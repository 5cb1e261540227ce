//! C ABI for the exact K-theory calculator.
//!
//! Objects are opaque handles created by [`bc_object_parse`] and released
//! with [`bc_object_free`]. Every function returns a [`BcStatus`]; on any
//! non-`Ok` status a human-readable message is available from
//! [`bc_last_error_message`] until the next call on the same thread.
//! Strings returned through out-pointers are owned by the caller and must
//! be released with [`bc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bootcat::object::{is_isomorphic, kk_groups, tensor_object};
use bootcat::parse::{parse_object, parse_spec_subset};
use bootcat::spectrum::{is_smashing, member, supp, supp_injective, LocalizingSubcat};
use bootcat::verify::{run_suite, Suite, VerifyConfig};
use bootcat::BootObject;

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BcStatus {
    Ok = 0,
    /// A verification suite ran and found a failing property.
    VerifyFailed = 1,
    /// The input expression, subset or suite name did not parse.
    ParseError = 2,
    /// A result component is nonzero but not representable exactly.
    Unrepresentable = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// Arguments were structurally invalid (wrong shapes, bad ranges).
    InvalidArgument = 5,
    /// An internal invariant failed.
    InternalError = 6,
}

/// Opaque handle to an object modeled by its K-theory.
pub struct BcObject {
    inner: BootObject,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let msg = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Message for the most recent non-Ok status on this thread, or null.
/// The pointer stays valid until the next call into this library from the
/// same thread.
#[no_mangle]
pub extern "C" fn bc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

fn guarded(body: impl FnOnce() -> BcStatus) -> BcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            BcStatus::InternalError
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BcStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(BcStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        BcStatus::InvalidArgument
    })
}

unsafe fn read_object<'a>(ptr: *const BcObject) -> Result<&'a BootObject, BcStatus> {
    if ptr.is_null() {
        set_error("null object handle");
        return Err(BcStatus::NullArgument);
    }
    Ok(&(*ptr).inner)
}

unsafe fn write_ptr<T>(out: *mut T, value: T) -> BcStatus {
    if out.is_null() {
        set_error("null out-pointer");
        return BcStatus::NullArgument;
    }
    *out = value;
    BcStatus::Ok
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Parse an object expression (e.g. `Z^2 + Z/12 [0] ; Z/8 [1]` or
/// `kappa(2)`) into a fresh handle.
///
/// # Safety
/// `expr` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn bc_object_parse(expr: *const c_char, out: *mut *mut BcObject) -> BcStatus {
    guarded(|| {
        let text = match read_str(expr) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_object(text) {
            Ok(parsed) => {
                let handle = Box::new(BcObject {
                    inner: parsed.realize(),
                });
                write_ptr(out, Box::into_raw(handle))
            }
            Err(e) => {
                set_error(e.to_string());
                BcStatus::ParseError
            }
        }
    })
}

/// Release a handle created by this library. Null is ignored.
///
/// # Safety
/// `obj` must be null or a pointer previously returned through an
/// out-parameter of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bc_object_free(obj: *mut BcObject) {
    if !obj.is_null() {
        drop(Box::from_raw(obj));
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string pointer previously returned by this
/// library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Canonical rendering of the object's K-theory.
///
/// # Safety
/// `obj` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_object_display(
    obj: *const BcObject,
    out: *mut *mut c_char,
) -> BcStatus {
    guarded(|| match read_object(obj) {
        Ok(o) => write_ptr(out, string_out(o.ktheory().to_string())),
        Err(s) => s,
    })
}

/// # Safety
/// `obj` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_object_is_compact(obj: *const BcObject, out: *mut bool) -> BcStatus {
    guarded(|| match read_object(obj) {
        Ok(o) => write_ptr(out, o.is_compact()),
        Err(s) => s,
    })
}

/// # Safety
/// `obj` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_object_suspend(
    obj: *const BcObject,
    out: *mut *mut BcObject,
) -> BcStatus {
    guarded(|| match read_object(obj) {
        Ok(o) => write_ptr(
            out,
            Box::into_raw(Box::new(BcObject { inner: o.suspend() })),
        ),
        Err(s) => s,
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_is_isomorphic(
    a: *const BcObject,
    b: *const BcObject,
    out: *mut bool,
) -> BcStatus {
    guarded(|| match (read_object(a), read_object(b)) {
        (Ok(x), Ok(y)) => write_ptr(out, is_isomorphic(x, y)),
        (Err(s), _) | (_, Err(s)) => s,
    })
}

/// K-theory of the tensor product as a fresh handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_tensor(
    a: *const BcObject,
    b: *const BcObject,
    out: *mut *mut BcObject,
) -> BcStatus {
    guarded(|| match (read_object(a), read_object(b)) {
        (Ok(x), Ok(y)) => write_ptr(
            out,
            Box::into_raw(Box::new(BcObject {
                inner: tensor_object(x, y),
            })),
        ),
        (Err(s), _) | (_, Err(s)) => s,
    })
}

/// KK-groups as JSON: {"deg0": ..., "deg1": ..., "unrepresentable": [...]}.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_kk_json(
    a: *const BcObject,
    b: *const BcObject,
    out: *mut *mut c_char,
) -> BcStatus {
    guarded(|| match (read_object(a), read_object(b)) {
        (Ok(x), Ok(y)) => {
            let kk = kk_groups(x, y);
            let payload = serde_json::json!({
                "deg0": kk.deg0.to_string(),
                "deg1": kk.deg1.to_string(),
                "unrepresentable": kk.unrepresentable_tags(),
            });
            write_ptr(out, string_out(payload.to_string()))
        }
        (Err(s), _) | (_, Err(s)) => s,
    })
}

/// Support of the object, rendered as "all" or "{2, 3}".
///
/// # Safety
/// `obj` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_support(obj: *const BcObject, out: *mut *mut c_char) -> BcStatus {
    guarded(|| match read_object(obj) {
        Ok(o) => write_ptr(out, string_out(supp(o).to_string())),
        Err(s) => s,
    })
}

/// Support through the minimal injective resolution.
///
/// # Safety
/// `obj` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_supp_injective(
    obj: *const BcObject,
    out: *mut *mut c_char,
) -> BcStatus {
    guarded(|| match read_object(obj) {
        Ok(o) => write_ptr(out, string_out(supp_injective(o).to_string())),
        Err(s) => s,
    })
}

/// Membership of the object in the localizing class of a subset given as
/// "all" or a comma list of points ("0,2,3").
///
/// # Safety
/// `obj` must be a live handle; `set` a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bc_member(
    obj: *const BcObject,
    set: *const c_char,
    out: *mut bool,
) -> BcStatus {
    guarded(|| {
        let o = match read_object(obj) {
            Ok(o) => o,
            Err(s) => return s,
        };
        let text = match read_str(set) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_spec_subset(text) {
            Ok(subset) => write_ptr(out, member(o, &LocalizingSubcat::new(subset))),
            Err(e) => {
                set_error(e.to_string());
                BcStatus::ParseError
            }
        }
    })
}

/// Whether the localizing class of the subset is smashing.
///
/// # Safety
/// `set` must be a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bc_is_smashing(set: *const c_char, out: *mut bool) -> BcStatus {
    guarded(|| {
        let text = match read_str(set) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_spec_subset(text) {
            Ok(subset) => write_ptr(out, is_smashing(&LocalizingSubcat::new(subset))),
            Err(e) => {
                set_error(e.to_string());
                BcStatus::ParseError
            }
        }
    })
}

/// Run a verification suite and write a JSON report. Returns Ok when every
/// check passed and VerifyFailed otherwise; the report is written in both
/// cases.
///
/// # Safety
/// `suite` must be a valid string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_verify_json(
    suite: *const c_char,
    seed: u64,
    prime_bound: u64,
    max_order: u64,
    corpus_size: usize,
    out: *mut *mut c_char,
) -> BcStatus {
    guarded(|| {
        let name = match read_str(suite) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let suite = match Suite::parse(name) {
            Ok(s) => s,
            Err(e) => {
                set_error(e.to_string());
                return BcStatus::ParseError;
            }
        };
        let cfg = VerifyConfig {
            seed,
            prime_bound,
            max_order,
            corpus_size,
        };
        let reports = run_suite(suite, &cfg);
        let all_pass = reports.iter().all(|r| r.all_pass());
        let payload = serde_json::json!({
            "pass": all_pass,
            "suites": reports.iter().map(|r| serde_json::json!({
                "suite": r.suite,
                "checks": r.checks.iter().map(|c| serde_json::json!({
                    "name": c.name,
                    "pass": c.pass,
                    "cases": c.cases,
                    "counterexample": c.counterexample,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        let status = write_ptr(out, string_out(payload.to_string()));
        if status != BcStatus::Ok {
            return status;
        }
        if all_pass {
            BcStatus::Ok
        } else {
            set_error("verification failures; see report");
            BcStatus::VerifyFailed
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> *mut BcObject {
        let c = CString::new(text).unwrap();
        let mut out: *mut BcObject = std::ptr::null_mut();
        let status = unsafe { bc_object_parse(c.as_ptr(), &mut out) };
        assert_eq!(status, BcStatus::Ok);
        assert!(!out.is_null());
        out
    }

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        unsafe { bc_string_free(ptr) };
        s
    }

    #[test]
    fn parse_display_free() {
        let obj = parse("Z^2 + Z/12 [0] ; Z/8 [1]");
        let mut s: *mut c_char = std::ptr::null_mut();
        assert_eq!(unsafe { bc_object_display(obj, &mut s) }, BcStatus::Ok);
        assert_eq!(take_string(s), "Z^2 + Z/12 [0] ; Z/8 [1]");
        unsafe { bc_object_free(obj) };
    }

    #[test]
    fn parse_error_reports_message() {
        let c = CString::new("Z/0").unwrap();
        let mut out: *mut BcObject = std::ptr::null_mut();
        let status = unsafe { bc_object_parse(c.as_ptr(), &mut out) };
        assert_eq!(status, BcStatus::ParseError);
        let msg = unsafe { CStr::from_ptr(bc_last_error_message()) }
            .to_str()
            .unwrap();
        assert!(msg.contains("at least 2"), "{msg}");
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut out: *mut BcObject = std::ptr::null_mut();
        assert_eq!(
            unsafe { bc_object_parse(std::ptr::null(), &mut out) },
            BcStatus::NullArgument
        );
        let mut flag = false;
        assert_eq!(
            unsafe { bc_object_is_compact(std::ptr::null(), &mut flag) },
            BcStatus::NullArgument
        );
    }

    #[test]
    fn kk_and_tensor_round_trip() {
        let a = parse("kappa(2)");
        let b = parse("kappa(2)");
        let mut s: *mut c_char = std::ptr::null_mut();
        assert_eq!(unsafe { bc_kk_json(a, b, &mut s) }, BcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["deg0"], "Z/2");
        assert_eq!(v["deg1"], "Z/2");

        let mut t: *mut BcObject = std::ptr::null_mut();
        assert_eq!(unsafe { bc_tensor(a, b, &mut t) }, BcStatus::Ok);
        let mut s: *mut c_char = std::ptr::null_mut();
        assert_eq!(unsafe { bc_object_display(t, &mut s) }, BcStatus::Ok);
        assert_eq!(take_string(s), "Z/2 [0] ; Z/2 [1]");
        unsafe {
            bc_object_free(a);
            bc_object_free(b);
            bc_object_free(t);
        }
    }

    #[test]
    fn membership_support_and_compactness() {
        let m = parse("moore(12)");
        let mut s: *mut c_char = std::ptr::null_mut();
        assert_eq!(unsafe { bc_support(m, &mut s) }, BcStatus::Ok);
        assert_eq!(take_string(s), "{2, 3}");

        let set = CString::new("2,3").unwrap();
        let mut inside = false;
        assert_eq!(
            unsafe { bc_member(m, set.as_ptr(), &mut inside) },
            BcStatus::Ok
        );
        assert!(inside);

        let mut compact = false;
        assert_eq!(
            unsafe { bc_object_is_compact(m, &mut compact) },
            BcStatus::Ok
        );
        assert!(compact);

        let iota = parse("iota(2)");
        assert_eq!(
            unsafe { bc_object_is_compact(iota, &mut compact) },
            BcStatus::Ok
        );
        assert!(!compact);

        let mut smash = true;
        let zero_set = CString::new("0").unwrap();
        assert_eq!(
            unsafe { bc_is_smashing(zero_set.as_ptr(), &mut smash) },
            BcStatus::Ok
        );
        assert!(!smash);

        unsafe {
            bc_object_free(m);
            bc_object_free(iota);
        }
    }

    #[test]
    fn suspension_and_isomorphism() {
        let a = parse("kappa(2)");
        let mut sa: *mut BcObject = std::ptr::null_mut();
        assert_eq!(unsafe { bc_object_suspend(a, &mut sa) }, BcStatus::Ok);
        let b = parse("Z/2 [1]");
        let mut iso = false;
        assert_eq!(unsafe { bc_is_isomorphic(sa, b, &mut iso) }, BcStatus::Ok);
        assert!(iso);
        assert_eq!(unsafe { bc_is_isomorphic(a, b, &mut iso) }, BcStatus::Ok);
        assert!(!iso);
        unsafe {
            bc_object_free(a);
            bc_object_free(sa);
            bc_object_free(b);
        }
    }

    #[test]
    fn verify_reports_json() {
        let suite = CString::new("smashing").unwrap();
        let mut s: *mut c_char = std::ptr::null_mut();
        let status = unsafe { bc_verify_json(suite.as_ptr(), 5, 5, 16, 24, &mut s) };
        assert_eq!(status, BcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["pass"], true);

        let bad = CString::new("spectral").unwrap();
        let status = unsafe { bc_verify_json(bad.as_ptr(), 0, 5, 16, 8, &mut s) };
        assert_eq!(status, BcStatus::ParseError);
    }
}
