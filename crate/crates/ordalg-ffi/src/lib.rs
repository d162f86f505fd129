//! C ABI for the workbench.
//!
//! Conventions: payloads cross the boundary as JSON strings in the same
//! schemas the CLI uses; step functions can also be held as opaque
//! handles. Functions returning pointers return null on failure and
//! record a message retrievable with [`ordalg_last_error_message`].
//! Strings returned by this library are owned by the caller and must be
//! released with [`ordalg_string_free`]; handles with
//! [`ordalg_step_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use ordalg::descriptors::{re_gap, GapInput};
use ordalg::idempotents::{extract_idempotent, indicator_poly, DiscUnion};
use ordalg::ntip::{ntip_run, verify_trace, AlgebraOracle, NtipTrace};
use ordalg::orderspace::{ClosedSet, SpacePresentation};
use ordalg::rational::Rat;
use ordalg::stepcalc::{NiceSet, StepFunction};

/// Success.
pub const ORDALG_OK: c_int = 0;
/// A domain error (precondition violated, named clause in the message).
pub const ORDALG_ERR_DOMAIN: c_int = 1;
/// Malformed input.
pub const ORDALG_ERR_PARSE: c_int = 2;
/// A null pointer argument.
pub const ORDALG_ERR_NULL: c_int = 3;
/// Trace verification failed; the clause is in the last error message.
pub const ORDALG_ERR_VERIFY: c_int = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
}

/// The message for the most recent failure on this thread. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ordalg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// An opaque step function handle.
pub struct OrdalgStep {
    inner: StepFunction,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, c_int> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(ORDALG_ERR_NULL);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        ORDALG_ERR_PARSE
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, c_int> {
    serde_json::from_str(s).map_err(|e| {
        set_error(&format!("parse error: {e}"));
        ORDALG_ERR_PARSE
    })
}

fn to_c_string<T: serde::Serialize>(value: &T) -> *mut c_char {
    let json = serde_json::to_string(value).expect("output serializes");
    CString::new(json)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn domain_err(e: ordalg::Error) -> c_int {
    set_error(&e.to_string());
    match e.exit_code() {
        2 => ORDALG_ERR_PARSE,
        _ => ORDALG_ERR_DOMAIN,
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by an `ordalg_*` function and
/// not yet freed; null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn ordalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a step function from JSON into an opaque handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ordalg_step_parse(json: *const c_char) -> *mut OrdalgStep {
    clear_error();
    let Ok(text) = read_str(json) else {
        return ptr::null_mut();
    };
    match parse_json::<StepFunction>(text) {
        Ok(inner) => Box::into_raw(Box::new(OrdalgStep { inner })),
        Err(_) => ptr::null_mut(),
    }
}

/// Serializes a handle back to JSON.
///
/// # Safety
/// `h` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ordalg_step_to_json(h: *const OrdalgStep) -> *mut c_char {
    clear_error();
    if h.is_null() {
        set_error("null handle");
        return ptr::null_mut();
    }
    to_c_string(&(*h).inner)
}

/// Releases a step handle.
///
/// # Safety
/// `h` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn ordalg_step_free(h: *mut OrdalgStep) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

unsafe fn binary_op(
    a: *const OrdalgStep,
    b: *const OrdalgStep,
    op: impl Fn(&StepFunction, &StepFunction) -> StepFunction,
) -> *mut OrdalgStep {
    clear_error();
    if a.is_null() || b.is_null() {
        set_error("null handle");
        return ptr::null_mut();
    }
    let inner = op(&(*a).inner, &(*b).inner);
    Box::into_raw(Box::new(OrdalgStep { inner }))
}

/// Pointwise sum of two step functions.
///
/// # Safety
/// Both handles must be live handles from this library.
#[no_mangle]
pub unsafe extern "C" fn ordalg_step_add(
    a: *const OrdalgStep,
    b: *const OrdalgStep,
) -> *mut OrdalgStep {
    binary_op(a, b, |x, y| x + y)
}

/// Pointwise difference of two step functions.
///
/// # Safety
/// Both handles must be live handles from this library.
#[no_mangle]
pub unsafe extern "C" fn ordalg_step_sub(
    a: *const OrdalgStep,
    b: *const OrdalgStep,
) -> *mut OrdalgStep {
    binary_op(a, b, |x, y| x - y)
}

/// Pointwise product of two step functions.
///
/// # Safety
/// Both handles must be live handles from this library.
#[no_mangle]
pub unsafe extern "C" fn ordalg_step_mul(
    a: *const OrdalgStep,
    b: *const OrdalgStep,
) -> *mut OrdalgStep {
    binary_op(a, b, |x, y| x * y)
}

/// The squared sup norm as a rational string.
///
/// # Safety
/// `h` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ordalg_step_sup_norm_sq(h: *const OrdalgStep) -> *mut c_char {
    clear_error();
    if h.is_null() {
        set_error("null handle");
        return ptr::null_mut();
    }
    let (norm_sq, _) = (*h).inner.sup_norm_sq();
    CString::new(norm_sq.to_string())
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Kernel of a closed set: input `{"space":…, "set":…?}`, output the
/// canonical kernel presentation.
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ordalg_kernel(json: *const c_char) -> *mut c_char {
    clear_error();
    let Ok(text) = read_str(json) else {
        return ptr::null_mut();
    };
    #[derive(serde::Deserialize)]
    struct Input {
        space: SpacePresentation,
        #[serde(default)]
        set: Option<ClosedSet>,
    }
    let Ok(input) = parse_json::<Input>(text) else {
        return ptr::null_mut();
    };
    let set = match input.set {
        Some(s) => match s.canonicalize(&input.space) {
            Ok(s) => s,
            Err(e) => {
                domain_err(e);
                return ptr::null_mut();
            }
        },
        None => input.space.whole_space(),
    };
    to_c_string(&set.kernel(&input.space))
}

/// `JMP_eps` of a step function; `eps` is a rational string.
///
/// # Safety
/// Both arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn ordalg_jmp(f_json: *const c_char, eps: *const c_char) -> *mut c_char {
    clear_error();
    let (Ok(f_text), Ok(eps_text)) = (read_str(f_json), read_str(eps)) else {
        return ptr::null_mut();
    };
    let Ok(f) = parse_json::<StepFunction>(f_text) else {
        return ptr::null_mut();
    };
    let eps: Rat = match eps_text.parse() {
        Ok(e) => e,
        Err(e) => {
            set_error(&format!("bad eps: {e}"));
            return ptr::null_mut();
        }
    };
    if eps <= Rat::zero() {
        set_error("eps must be positive");
        return ptr::null_mut();
    }
    to_c_string(&f.jmp(&eps))
}

/// Extracts the idempotent below level `b` (rational string); returns the
/// certificate JSON.
///
/// # Safety
/// Both arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn ordalg_extract_idempotent(
    h_json: *const c_char,
    b: *const c_char,
) -> *mut c_char {
    clear_error();
    let (Ok(h_text), Ok(b_text)) = (read_str(h_json), read_str(b)) else {
        return ptr::null_mut();
    };
    let Ok(h) = parse_json::<StepFunction>(h_text) else {
        return ptr::null_mut();
    };
    let b: Rat = match b_text.parse() {
        Ok(b) => b,
        Err(e) => {
            set_error(&format!("bad b: {e}"));
            return ptr::null_mut();
        }
    };
    match extract_idempotent(&h, &b) {
        Ok(cert) => to_c_string(&cert),
        Err(e) => {
            domain_err(e);
            ptr::null_mut()
        }
    }
}

/// A separating level for the real parts of a step function's values, or
/// JSON `null` when no two-sided gap exists.
///
/// # Safety
/// `h_json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ordalg_re_gap(h_json: *const c_char) -> *mut c_char {
    clear_error();
    let Ok(text) = read_str(h_json) else {
        return ptr::null_mut();
    };
    let Ok(h) = parse_json::<StepFunction>(text) else {
        return ptr::null_mut();
    };
    match re_gap(&GapInput::Values(h.values), None) {
        Ok(b) => to_c_string(&b),
        Err(e) => {
            domain_err(e);
            ptr::null_mut()
        }
    }
}

/// Runs the extraction pipeline; returns the full trace JSON.
///
/// # Safety
/// All arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn ordalg_ntip_run(
    oracle_json: *const c_char,
    nice_json: *const c_char,
    q: *const c_char,
) -> *mut c_char {
    clear_error();
    let (Ok(o_text), Ok(n_text), Ok(q_text)) =
        (read_str(oracle_json), read_str(nice_json), read_str(q))
    else {
        return ptr::null_mut();
    };
    let Ok(oracle) = parse_json::<AlgebraOracle>(o_text) else {
        return ptr::null_mut();
    };
    if let Err(e) = oracle.validate() {
        domain_err(e);
        return ptr::null_mut();
    }
    let Ok(nice) = parse_json::<NiceSet>(n_text) else {
        return ptr::null_mut();
    };
    let q: Rat = match q_text.parse() {
        Ok(q) => q,
        Err(e) => {
            set_error(&format!("bad q: {e}"));
            return ptr::null_mut();
        }
    };
    match ntip_run(&oracle, &nice, &q) {
        Ok(trace) => to_c_string(&trace),
        Err(e) => {
            domain_err(e);
            ptr::null_mut()
        }
    }
}

/// Replays a trace against an oracle. Returns `ORDALG_OK` when verified;
/// `ORDALG_ERR_VERIFY` puts the failing clause in the last error message.
///
/// # Safety
/// Both arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn ordalg_verify_trace(
    trace_json: *const c_char,
    oracle_json: *const c_char,
) -> c_int {
    clear_error();
    let (t_text, o_text) = match (read_str(trace_json), read_str(oracle_json)) {
        (Ok(t), Ok(o)) => (t, o),
        (Err(c), _) | (_, Err(c)) => return c,
    };
    let trace = match parse_json::<NtipTrace>(t_text) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let oracle = match parse_json::<AlgebraOracle>(o_text) {
        Ok(o) => o,
        Err(c) => return c,
    };
    match verify_trace(&trace, &oracle) {
        Ok(()) => ORDALG_OK,
        Err(clause) => {
            set_error(&clause);
            ORDALG_ERR_VERIFY
        }
    }
}

/// Certified polynomial indicator witness on separated disc unions;
/// `tol_sq` is a rational string.
///
/// # Safety
/// All arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn ordalg_indicator_poly(
    k0_json: *const c_char,
    k1_json: *const c_char,
    tol_sq: *const c_char,
    max_degree: c_int,
) -> *mut c_char {
    clear_error();
    let (Ok(k0_text), Ok(k1_text), Ok(tol_text)) =
        (read_str(k0_json), read_str(k1_json), read_str(tol_sq))
    else {
        return ptr::null_mut();
    };
    let (Ok(k0), Ok(k1)) = (
        parse_json::<DiscUnion>(k0_text),
        parse_json::<DiscUnion>(k1_text),
    ) else {
        return ptr::null_mut();
    };
    let tol: Rat = match tol_text.parse() {
        Ok(t) => t,
        Err(e) => {
            set_error(&format!("bad tolSq: {e}"));
            return ptr::null_mut();
        }
    };
    if tol <= Rat::zero() || max_degree < 0 {
        set_error("tolSq must be positive and max_degree non-negative");
        return ptr::null_mut();
    }
    match indicator_poly(&k0, &k1, &tol, max_degree as usize) {
        Ok(w) => to_c_string(&w),
        Err(e) => {
            domain_err(e);
            ptr::null_mut()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn step_handle_round_trip() {
        let json = c(r#"{"breaks":["1/3"],"values":[{"re":"-1","im":"0"},{"re":"1","im":"0"}]}"#);
        unsafe {
            let h = ordalg_step_parse(json.as_ptr());
            assert!(!h.is_null());
            let out = ordalg_step_to_json(h);
            let text = CStr::from_ptr(out).to_str().unwrap().to_string();
            assert!(text.contains("1/3"));
            ordalg_string_free(out);

            let prod = ordalg_step_mul(h, h);
            let norm = ordalg_step_sup_norm_sq(prod);
            assert_eq!(CStr::from_ptr(norm).to_str().unwrap(), "1");
            ordalg_string_free(norm);
            ordalg_step_free(prod);
            ordalg_step_free(h);
        }
    }

    #[test]
    fn parse_failures_set_the_error() {
        let bad = c("{not json");
        unsafe {
            let h = ordalg_step_parse(bad.as_ptr());
            assert!(h.is_null());
            let msg = CStr::from_ptr(ordalg_last_error_message())
                .to_str()
                .unwrap();
            assert!(msg.contains("parse error"));
        }
    }

    #[test]
    fn kernel_of_a_chain_is_empty() {
        let json = c(r#"{"space":{"kind":"chain","n":5}}"#);
        unsafe {
            let out = ordalg_kernel(json.as_ptr());
            assert!(!out.is_null());
            assert_eq!(
                CStr::from_ptr(out).to_str().unwrap(),
                r#"{"components":[]}"#
            );
            ordalg_string_free(out);
        }
    }

    #[test]
    fn pipeline_and_verification_through_the_abi() {
        let oracle = c(
            r#"{"kind":"breakpoints","coords":["1/4","1/2","3/4","1/8","3/8","5/8","7/8","1/16","3/16","5/16","7/16","9/16","11/16","13/16","15/16","1/32","3/32","5/32","7/32","9/32","11/32","13/32","15/32","17/32","19/32","21/32","23/32","25/32","27/32","29/32","31/32","1/64","3/64","5/64","7/64","9/64","11/64","13/64","15/64","17/64","19/64","21/64","23/64","25/64","27/64","29/64","31/64","33/64","35/64","37/64","39/64","41/64","43/64","45/64","47/64","49/64","51/64","53/64","55/64","57/64","59/64","61/64","63/64","1/3"]}"#,
        );
        let nice = c(
            r#"{"coords":["1/4","1/2","3/4","1/8","3/8","5/8","7/8","1/16","3/16","5/16","7/16","9/16","11/16","13/16","15/16","1/32","3/32","5/32","7/32","9/32","11/32","13/32","15/32","17/32","19/32","21/32","23/32","25/32","27/32","29/32","31/32","1/64","3/64","5/64","7/64","9/64","11/64","13/64","15/64","17/64","19/64","21/64","23/64","25/64","27/64","29/64","31/64","33/64","35/64","37/64","39/64","41/64","43/64","45/64","47/64","49/64","51/64","53/64","55/64","57/64","59/64","61/64","63/64"]}"#,
        );
        let q = c("1/3");
        unsafe {
            let out = ordalg_ntip_run(oracle.as_ptr(), nice.as_ptr(), q.as_ptr());
            assert!(
                !out.is_null(),
                "{:?}",
                CStr::from_ptr(ordalg_last_error_message())
            );
            let trace = CStr::from_ptr(out).to_str().unwrap().to_string();
            let trace_c = c(&trace);
            assert_eq!(
                ordalg_verify_trace(trace_c.as_ptr(), oracle.as_ptr()),
                ORDALG_OK
            );
            ordalg_string_free(out);
        }
    }
}
