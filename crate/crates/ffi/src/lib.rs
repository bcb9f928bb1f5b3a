//! C ABI over `semiso`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns a
//! [`SemisoStatus`] and writes its result through an out pointer; the message
//! of the most recent failure on the calling thread is available from
//! [`semiso_last_error`]. Field elements are passed as their index, i.e. the
//! little-endian base-p digits of the coefficient vector.
//!
//! Strings returned by the library are owned by the caller and must be freed
//! with [`semiso_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use semiso::code::{ccz_equivalent_planar, EquivalenceVerdict, SearchCaps};
use semiso::fmap::PolyMap;
use semiso::gf::{Elem, Field, FieldSpec};
use semiso::planar::{is_planar_bruteforce, lmptb};
use semiso::repro::{self, ReproConfig};
use semiso::semifield::Presemifield;
use semiso::Error;

/// Result code of every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemisoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    FieldMismatch = 5,
    NotPlanar = 6,
    ZeroDivisors = 7,
    CapExceeded = 8,
    /// A Rust panic was caught at the boundary.
    Internal = 9,
}

/// Outcome of an equivalence test.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemisoVerdictKind {
    Equivalent = 0,
    Inequivalent = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SemisoNuclei {
    pub left: usize,
    pub middle: usize,
    pub right: usize,
    pub nucleus: usize,
    /// Number of elements found by the α search.
    pub alpha_count: usize,
}

/// Opaque finite field.
pub struct SemisoField(Field);
/// Opaque polynomial map over a field.
pub struct SemisoPoly(PolyMap);
/// Opaque equivalence verdict.
pub struct SemisoVerdict(EquivalenceVerdict);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SemisoStatus {
    match e {
        Error::Parse { .. } | Error::BadModulus(_) | Error::NotPrime(_) => SemisoStatus::Parse,
        Error::FieldMismatch | Error::IncompatibleCodes(_) => SemisoStatus::FieldMismatch,
        Error::NotPlanar => SemisoStatus::NotPlanar,
        Error::ZeroDivisors => SemisoStatus::ZeroDivisors,
        Error::DimensionCap { .. } | Error::FieldTooLarge { .. } => SemisoStatus::CapExceeded,
        _ => SemisoStatus::InvalidArgument,
    }
}

struct Fail(SemisoStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> SemisoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SemisoStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            SemisoStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(SemisoStatus::NullPointer, "null pointer argument".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(SemisoStatus::NullPointer, "null output pointer".into()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(SemisoStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SemisoStatus::InvalidUtf8, "string is not UTF-8".into()))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn elem(field: &Field, index: u32) -> Result<Elem, Fail> {
    let e = Elem(index);
    if field.contains(e) {
        Ok(e)
    } else {
        Err(Fail(
            SemisoStatus::InvalidArgument,
            format!("element index {index} is outside the field"),
        ))
    }
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn semiso_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn semiso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Field from a spec such as `p=3 n=6 mod=[-1,-1,1,0,-1,0,1]`; a null spec
/// gives the canonical field.
///
/// # Safety
/// `spec` must be null or a nul-terminated string; `out_field` must be writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_field_new(
    spec: *const c_char,
    out_field: *mut *mut SemisoField,
) -> SemisoStatus {
    guard(|| {
        let slot = out(out_field)?;
        let spec = if spec.is_null() {
            FieldSpec::canonical()
        } else {
            text(spec)?.parse::<FieldSpec>()?
        };
        *slot = Box::into_raw(Box::new(SemisoField(Field::new(spec))));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from [`semiso_field_new`].
#[no_mangle]
pub unsafe extern "C" fn semiso_field_free(field: *mut SemisoField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn semiso_field_order(field: *const SemisoField) -> u64 {
    field.as_ref().map_or(0, |f| f.0.order() as u64)
}

/// Index of the generator ξ (the class of x).
///
/// # Safety
/// `field` must be a live field handle.
#[no_mangle]
pub unsafe extern "C" fn semiso_field_generator(field: *const SemisoField) -> u32 {
    field.as_ref().map_or(0, |f| f.0.generator().0)
}

/// # Safety
/// `field` must be a live handle, `a` and `b` valid element indices and
/// `out_elem` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_field_mul(
    field: *const SemisoField,
    a: u32,
    b: u32,
    out_elem: *mut u32,
) -> SemisoStatus {
    guard(|| {
        let f = &deref(field)?.0;
        let (a, b) = (elem(f, a)?, elem(f, b)?);
        *out(out_elem)? = f.mul(a, b).0;
        Ok(())
    })
}

/// Multiplicative order of a nonzero element.
///
/// # Safety
/// `field` must be a live handle and `out_order` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_field_element_order(
    field: *const SemisoField,
    a: u32,
    out_order: *mut u64,
) -> SemisoStatus {
    guard(|| {
        let f = &deref(field)?.0;
        *out(out_order)? = f.element_order(elem(f, a)?)?;
        Ok(())
    })
}

/// Parses `[c0,...]`, an integer, or `xi^k` (canonical field only).
///
/// # Safety
/// `field` must be a live handle, `s` a nul-terminated string and
/// `out_elem` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_field_parse_element(
    field: *const SemisoField,
    s: *const c_char,
    out_elem: *mut u32,
) -> SemisoStatus {
    guard(|| {
        let f = &deref(field)?.0;
        *out(out_elem)? = f.parse_element(text(s)?)?.0;
        Ok(())
    })
}

/// Parses a polynomial such as `x^10 - x^2` over `field`.
///
/// # Safety
/// `field` must be a live handle, `s` a nul-terminated string and `out_poly`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_poly_parse(
    field: *const SemisoField,
    s: *const c_char,
    out_poly: *mut *mut SemisoPoly,
) -> SemisoStatus {
    guard(|| {
        let f = &deref(field)?.0;
        let slot = out(out_poly)?;
        let p = PolyMap::parse(f, text(s)?)?;
        *slot = Box::into_raw(Box::new(SemisoPoly(p)));
        Ok(())
    })
}

/// The LMPTB planar polynomial over `F_{q^(2m)}`.
///
/// # Safety
/// `field` must be a live handle and `out_poly` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_poly_lmptb(
    field: *const SemisoField,
    q: u64,
    m: usize,
    out_poly: *mut *mut SemisoPoly,
) -> SemisoStatus {
    guard(|| {
        let f = &deref(field)?.0;
        let slot = out(out_poly)?;
        *slot = Box::into_raw(Box::new(SemisoPoly(lmptb(f, q, m)?)));
        Ok(())
    })
}

/// # Safety
/// `poly` must be null or a polynomial handle.
#[no_mangle]
pub unsafe extern "C" fn semiso_poly_free(poly: *mut SemisoPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Human-readable form, e.g. `x^270 - x^246 + ...`; null on a null handle.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn semiso_poly_to_string(poly: *const SemisoPoly) -> *mut c_char {
    match poly.as_ref() {
        Some(p) => owned_string(p.0.to_human()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `poly` must be a live handle and `out_elem` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_poly_eval(
    poly: *const SemisoPoly,
    x: u32,
    out_elem: *mut u32,
) -> SemisoStatus {
    guard(|| {
        let p = &deref(poly)?.0;
        *out(out_elem)? = p.evaluate(elem(p.field(), x)?).0;
        Ok(())
    })
}

/// Brute-force planarity.
///
/// # Safety
/// `poly` must be a live handle and `out_planar` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_poly_is_planar(
    poly: *const SemisoPoly,
    out_planar: *mut bool,
) -> SemisoStatus {
    guard(|| {
        let p = &deref(poly)?.0;
        *out(out_planar)? = is_planar_bruteforce(p);
        Ok(())
    })
}

/// Nuclei sizes and α count of the semifield obtained from the planar DO
/// polynomial `poly` at base point `a`.
///
/// # Safety
/// `poly` must be a live handle and `out_nuclei` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_semifield_nuclei(
    poly: *const SemisoPoly,
    a: u32,
    out_nuclei: *mut SemisoNuclei,
) -> SemisoStatus {
    guard(|| {
        let p = &deref(poly)?.0;
        let slot = out(out_nuclei)?;
        let s = Presemifield::from_planar(p)?.to_semifield(elem(p.field(), a)?)?;
        *slot = SemisoNuclei {
            left: s.nucleus_left().len(),
            middle: s.nucleus_middle().len(),
            right: s.nucleus_right().len(),
            nucleus: s.nucleus().len(),
            alpha_count: s.alpha_search()?.len(),
        };
        Ok(())
    })
}

/// Planar polynomial of the isotope `x ⊙ y = (λ ⋆ x) ⋆ y`, where `⋆` is the
/// semifield built from `poly` at base point `a`.
///
/// # Safety
/// `poly` must be a live handle and `out_poly` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_semifield_isotope(
    poly: *const SemisoPoly,
    a: u32,
    lambda: u32,
    out_poly: *mut *mut SemisoPoly,
) -> SemisoStatus {
    guard(|| {
        let p = &deref(poly)?.0;
        let slot = out(out_poly)?;
        let s = Presemifield::from_planar(p)?.to_semifield(elem(p.field(), a)?)?;
        let g = s.isotope_scale(elem(p.field(), lambda)?)?.diagonal();
        *slot = Box::into_raw(Box::new(SemisoPoly(g)));
        Ok(())
    })
}

/// CCZ equivalence of two planar functions. `max_nodes == 0` and
/// `timeout_secs <= 0` select the defaults.
///
/// # Safety
/// `f` and `g` must be live handles and `out_verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_ccz_equivalent(
    f: *const SemisoPoly,
    g: *const SemisoPoly,
    max_nodes: u64,
    timeout_secs: f64,
    out_verdict: *mut *mut SemisoVerdict,
) -> SemisoStatus {
    guard(|| {
        let (f, g) = (&deref(f)?.0, &deref(g)?.0);
        let slot = out(out_verdict)?;
        let mut caps = SearchCaps::default();
        if max_nodes > 0 {
            caps.max_nodes = max_nodes;
        }
        if timeout_secs > 0.0 {
            caps.timeout_secs = Some(timeout_secs);
        }
        let v = ccz_equivalent_planar(f, g, &caps)?;
        *slot = Box::into_raw(Box::new(SemisoVerdict(v)));
        Ok(())
    })
}

/// # Safety
/// `v` must be null or a verdict handle.
#[no_mangle]
pub unsafe extern "C" fn semiso_verdict_free(v: *mut SemisoVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn semiso_verdict_kind(v: *const SemisoVerdict) -> SemisoVerdictKind {
    match v.as_ref().map(|v| &v.0) {
        Some(EquivalenceVerdict::Equivalent { .. }) => SemisoVerdictKind::Equivalent,
        Some(EquivalenceVerdict::Inequivalent { .. }) => SemisoVerdictKind::Inequivalent,
        _ => SemisoVerdictKind::Unknown,
    }
}

/// Full verdict with certificate or witness, as JSON.
///
/// # Safety
/// `v` must be null or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn semiso_verdict_to_json(v: *const SemisoVerdict) -> *mut c_char {
    match v.as_ref() {
        Some(v) => owned_string(serde_json::to_string(&v.0).expect("verdict serializes")),
        None => ptr::null_mut(),
    }
}

/// Runs the full worked example and returns the JSON report. `lambda_index`
/// selects the power of λ used for the isotope (1 for the reference run).
///
/// # Safety
/// `out_json` and `out_all_met` must be writable.
#[no_mangle]
pub unsafe extern "C" fn semiso_repro_run(
    lambda_index: u64,
    out_json: *mut *mut c_char,
    out_all_met: *mut bool,
) -> SemisoStatus {
    guard(|| {
        let json_slot = out(out_json)?;
        let met_slot = out(out_all_met)?;
        let config = ReproConfig {
            lambda_index,
            ..ReproConfig::default()
        };
        let report = repro::run(&config)?;
        *met_slot = report.all_expectations_met;
        *json_slot = owned_string(serde_json::to_string(&report).expect("report serializes"));
        Ok(())
    })
}
