//! C interface to the big-O decision library.
//!
//! Automata are opaque handles created by `maxplus_automaton_from_json` or
//! `maxplus_automaton_load` and released with `maxplus_automaton_free`.
//! Every fallible call returns a `MaxplusStatus`; on failure the message is
//! available from `maxplus_last_error` until the next call on the same
//! thread. Strings returned through out-parameters are owned by the caller
//! and must be released with `maxplus_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use maxplus_core::cli::verdict_json;
use maxplus_core::decision::{decide_bigo, DecideOptions, SearchMethod};
use maxplus_core::{format, Error, MaxPlusAutomaton};

/// Opaque automaton handle.
pub struct MaxplusAutomaton(MaxPlusAutomaton);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxplusStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidAutomaton = 4,
    CapExceeded = 5,
    IoError = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxplusMethod {
    Exhaustive = 0,
    Tractable = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MaxplusStatus {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::UnknownLetter(_) => MaxplusStatus::ParseError,
        Error::InvalidAutomaton(_) | Error::AlphabetMismatch(_) | Error::LetterOutOfRange(_) => {
            MaxplusStatus::InvalidAutomaton
        }
        Error::CapExceeded { .. } => MaxplusStatus::CapExceeded,
        Error::Io(_) => MaxplusStatus::IoError,
        _ => MaxplusStatus::Internal,
    }
}

struct Failure(MaxplusStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic; clears the last error on success.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MaxplusStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MaxplusStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MaxplusStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MaxplusStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MaxplusStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn aut_arg<'a>(p: *const MaxplusAutomaton, what: &str) -> Result<&'a MaxPlusAutomaton, Failure> {
    p.as_ref()
        .map(|h| &h.0)
        .ok_or_else(|| Failure(MaxplusStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(MaxplusStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(MaxplusStatus::Internal, "string contains a NUL byte".into()))
}

fn options(method: MaxplusMethod) -> DecideOptions {
    DecideOptions {
        method: match method {
            MaxplusMethod::Exhaustive => SearchMethod::Exhaustive,
            MaxplusMethod::Tractable => SearchMethod::Tractable,
        },
        ..DecideOptions::default()
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn maxplus_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an automaton from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxplus_automaton_from_json(
    json: *const c_char,
    out: *mut *mut MaxplusAutomaton,
) -> MaxplusStatus {
    guard(|| {
        out_arg(out, "out")?;
        let aut = format::from_json(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(MaxplusAutomaton(aut)));
        Ok(())
    })
}

/// Loads an automaton from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxplus_automaton_load(path: *const c_char, out: *mut *mut MaxplusAutomaton) -> MaxplusStatus {
    guard(|| {
        out_arg(out, "out")?;
        let aut = format::load(str_arg(path, "path")?)?;
        *out = Box::into_raw(Box::new(MaxplusAutomaton(aut)));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `aut` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn maxplus_automaton_free(aut: *mut MaxplusAutomaton) {
    if !aut.is_null() {
        drop(Box::from_raw(aut));
    }
}

/// Number of states, or 0 for a null handle.
///
/// # Safety
/// `aut` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxplus_automaton_num_states(aut: *const MaxplusAutomaton) -> usize {
    aut.as_ref().map_or(0, |h| h.0.num_states())
}

/// Serialises an automaton back to JSON.
///
/// # Safety
/// `aut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxplus_automaton_to_json(aut: *const MaxplusAutomaton, out: *mut *mut c_char) -> MaxplusStatus {
    guard(|| {
        out_arg(out, "out")?;
        let text = format::to_json(aut_arg(aut, "aut")?)?;
        *out = to_c_string(text)?;
        Ok(())
    })
}

/// Evaluates the automaton on a word in run-length syntax, e.g. `"(a^2 b)^3"`.
/// The value is written as a decimal string, or `"-inf"` for rejected words.
///
/// # Safety
/// `aut` must be a live handle, `word` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxplus_eval(
    aut: *const MaxplusAutomaton,
    word: *const c_char,
    out: *mut *mut c_char,
) -> MaxplusStatus {
    guard(|| {
        out_arg(out, "out")?;
        let aut = aut_arg(aut, "aut")?;
        let w = aut.alphabet().parse_word(str_arg(word, "word")?)?;
        *out = to_c_string(aut.evaluate_rle(&w)?.to_string())?;
        Ok(())
    })
}

/// Decides whether `a` is big-O of `b`; writes 1 (big-O) or 0 to `is_bigo`.
///
/// # Safety
/// `a`, `b` must be live handles and `is_bigo` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxplus_check(
    a: *const MaxplusAutomaton,
    b: *const MaxplusAutomaton,
    method: MaxplusMethod,
    is_bigo: *mut c_int,
) -> MaxplusStatus {
    guard(|| {
        out_arg(is_bigo, "is_bigo")?;
        let verdict = decide_bigo(aut_arg(a, "a")?, aut_arg(b, "b")?, &options(method))?;
        *is_bigo = c_int::from(verdict.is_bigo());
        Ok(())
    })
}

/// Like `maxplus_check`, but writes the full verdict as a JSON document.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxplus_check_json(
    a: *const MaxplusAutomaton,
    b: *const MaxplusAutomaton,
    method: MaxplusMethod,
    out: *mut *mut c_char,
) -> MaxplusStatus {
    guard(|| {
        out_arg(out, "out")?;
        let a = aut_arg(a, "a")?;
        let verdict = decide_bigo(a, aut_arg(b, "b")?, &options(method))?;
        *out = to_c_string(verdict_json(&verdict, a).to_string())?;
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn maxplus_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
