//! C interface to `hierctl`.
//!
//! Automata cross the boundary as opaque `HcAutomaton` handles created by
//! [`hc_automaton_parse`] and released with [`hc_automaton_free`]. Every
//! fallible call returns an [`HcStatus`]; on failure the message is
//! available from [`hc_last_error`] until the next call on the same thread.
//! Strings handed out by the library are released with [`hc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hierctl::check::{check_property, over_plant};
use hierctl::gadgets::GadgetKind;
use hierctl::oracle::{OracleInputs, OracleProperty};
use hierctl::{parse_automaton_with, sct, serialize_automaton, Automaton, Error, ParseOptions, Verdict};

/// Opaque automaton handle.
pub struct HcAutomaton {
    inner: Automaton,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The automaton text does not parse.
    Parse = 3,
    /// Mismatched alphabets, violated preconditions and the like.
    Invalid = 4,
    /// An argument is out of range, e.g. an unknown property code.
    BadArgument = 5,
    /// The library panicked; this is a bug.
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcVerdict {
    Holds = 0,
    Violated = 1,
    Inconclusive = 2,
}

/// Property codes accepted by [`hc_check`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcProperty {
    Oc = 0,
    Loc = 1,
    Moc = 2,
    Observer = 3,
    Lcc = 4,
    Controllability = 5,
    Observability = 6,
    Normality = 7,
    Relobs = 8,
    Nonconflicting = 9,
}

/// Reduction codes accepted by [`hc_gadget`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcGadget {
    Oc = 0,
    Moc = 1,
    Loc = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: HcStatus, message: impl Into<String>) -> HcStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> HcStatus {
    let status = match e {
        Error::Syntax { .. } | Error::Duplicate { .. } | Error::Unknown { .. } | Error::InvalidEventName(_) => {
            HcStatus::Parse
        }
        _ => HcStatus::Invalid,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning a panic into `HcStatus::Internal`.
fn guarded(f: impl FnOnce() -> HcStatus) -> HcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(HcStatus::Internal, "internal error"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, HcStatus> {
    if p.is_null() {
        return Err(fail(HcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(HcStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn handle<'a>(p: *const HcAutomaton, what: &str) -> Result<&'a Automaton, HcStatus> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| fail(HcStatus::NullPointer, format!("null {what}")))
}

unsafe fn give_automaton(out: *mut *mut HcAutomaton, a: Automaton) {
    *out = Box::into_raw(Box::new(HcAutomaton { inner: a }));
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> HcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            HcStatus::Ok
        }
        Err(_) => fail(HcStatus::Internal, "string contains a nul byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Parses an automaton in `.saut` text form.
///
/// # Safety
/// `source` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_automaton_parse(
    source: *const c_char,
    allow_reserved: bool,
    out: *mut *mut HcAutomaton,
) -> HcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(HcStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let source = try_status!(text(source));
        match parse_automaton_with(source, ParseOptions { allow_reserved }) {
            Ok(a) => {
                give_automaton(out, a);
                HcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `a` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hc_automaton_free(a: *mut HcAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of states, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_automaton_num_states(a: *const HcAutomaton) -> usize {
    a.as_ref().map_or(0, |h| h.inner.num_states())
}

/// Writes the `.saut` text of `a` to `*out`; free it with [`hc_string_free`].
///
/// # Safety
/// `a` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_automaton_to_saut(a: *const HcAutomaton, out: *mut *mut c_char) -> HcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(HcStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let a = try_status!(handle(a, "automaton"));
        give_string(out, serialize_automaton(a))
    })
}

fn property(code: u32) -> Option<OracleProperty> {
    use OracleProperty::*;
    [
        Oc,
        Loc,
        Moc,
        Observer,
        Lcc,
        Controllability,
        Observability,
        Normality,
        Relobs,
        Nonconflicting,
    ]
    .get(code as usize)
    .copied()
}

/// Decides a property (an `HcProperty` code). `spec` and `ambient` may be
/// null when the property does not use them; a specification over part of
/// the plant alphabet stands for its composition with the plant. When
/// `witness_json` is not null it receives the violation witness as JSON,
/// or null if there is none.
///
/// # Safety
/// Handles must be live or null as documented; `verdict` must be valid and
/// `witness_json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn hc_check(
    property_code: u32,
    plant: *const HcAutomaton,
    spec: *const HcAutomaton,
    ambient: *const HcAutomaton,
    budget: usize,
    verdict: *mut HcVerdict,
    witness_json: *mut *mut c_char,
) -> HcStatus {
    guarded(|| {
        if verdict.is_null() {
            return fail(HcStatus::NullPointer, "null verdict pointer");
        }
        if !witness_json.is_null() {
            *witness_json = ptr::null_mut();
        }
        let Some(p) = property(property_code) else {
            return fail(HcStatus::BadArgument, format!("unknown property code {property_code}"));
        };
        let g = try_status!(handle(plant, "plant"));
        let lift = |x: *const HcAutomaton| -> Result<Option<Automaton>, HcStatus> {
            match x.as_ref() {
                None => Ok(None),
                Some(h) => over_plant(h.inner.clone(), g).map(Some).map_err(from_error),
            }
        };
        let k = try_status!(lift(spec));
        let c = try_status!(lift(ambient));
        let inputs = OracleInputs {
            plant: g,
            spec: k.as_ref(),
            ambient: c.as_ref(),
        };
        let v = match check_property(p, inputs, budget) {
            Ok(v) => v,
            Err(e) => return from_error(e),
        };
        *verdict = match &v {
            Verdict::Holds => HcVerdict::Holds,
            Verdict::Violated(_) => HcVerdict::Violated,
            Verdict::Inconclusive(_) => HcVerdict::Inconclusive,
        };
        if let (Some(w), false) = (v.witness(), witness_json.is_null()) {
            let json = serde_json::to_string(w).expect("witness serializes");
            return give_string(witness_json, json);
        }
        HcStatus::Ok
    })
}

/// Supremal normal sublanguage of the prefix-closed `spec` within the
/// plant's generated language.
///
/// # Safety
/// Handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hc_sup_normal(
    spec: *const HcAutomaton,
    plant: *const HcAutomaton,
    out: *mut *mut HcAutomaton,
) -> HcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(HcStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let g = try_status!(handle(plant, "plant"));
        let k = try_status!(handle(spec, "spec"));
        let k = try_status!(over_plant(k.clone(), g).map_err(from_error));
        match sct::sup_normal_closed(&k, g) {
            Ok(r) => {
                give_automaton(out, r);
                HcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Builds the reduction plant (an `HcGadget` code) from an all-marked NFA.
///
/// # Safety
/// `input` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hc_gadget(kind: u32, input: *const HcAutomaton, out: *mut *mut HcAutomaton) -> HcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(HcStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let kind = match kind {
            0 => GadgetKind::Oc,
            1 => GadgetKind::Moc,
            2 => GadgetKind::Loc,
            _ => return fail(HcStatus::BadArgument, format!("unknown gadget code {kind}")),
        };
        let a = try_status!(handle(input, "input"));
        match kind.build(a) {
            Ok(b) => {
                give_automaton(out, b);
                HcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
