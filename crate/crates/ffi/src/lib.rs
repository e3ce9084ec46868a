//! C ABI over `dfstab`.
//!
//! Models and reports are opaque heap handles released with their `_free`
//! function. Every call returns a [`DfsStatus`]; on failure the message is
//! available from [`dfs_last_error_message`] until the next failing call on
//! the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dfstab::lindblad::{evolve_with, DensityMatrix, EvolveOptions};
use dfstab::metrology::run_protocol;
use dfstab::model::{load_model, parse_model, PresetParams};
use dfstab::{verify_theorem_16, verify_theorem_7, verify_vec_theorem, CodeKind, Error, Ket, LindbladModel, C64};

/// Call status. Values 0 to 4 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfsStatus {
    Ok = 0,
    /// The check ran and its verdict is negative.
    Negative = 1,
    Parse = 2,
    Numerical = 3,
    NotRepresentable = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfsKind {
    Dfs = 0,
    Sdfs = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfsFormalism {
    Zeta = 0,
    Vec = 1,
}

/// Opaque model handle.
pub struct DfsModel {
    inner: LindbladModel,
}

/// Opaque report handle: verdict plus `key = value` text.
pub struct DfsReport {
    passed: bool,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> DfsStatus {
    match dfstab::cli::exit_code(e) {
        2 => DfsStatus::Parse,
        4 => DfsStatus::NotRepresentable,
        _ => DfsStatus::Numerical,
    }
}

struct Fail(DfsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(DfsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<DfsStatus, Fail>) -> DfsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            DfsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(DfsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn model_ref<'a>(m: *const DfsModel) -> Result<&'a LindbladModel, Fail> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("model"))
}

fn kind_of(k: DfsKind) -> CodeKind {
    match k {
        DfsKind::Dfs => CodeKind::Dfs,
        DfsKind::Sdfs => CodeKind::Sdfs,
    }
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn report(passed: bool, text: String) -> DfsReport {
    DfsReport { passed, text: CString::new(text.replace('\0', " ")).expect("interior nul removed") }
}

/// Message of the last failed call on this thread, or null. Valid until the next failure.
#[no_mangle]
pub extern "C" fn dfs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a model file or builds a preset (`example1`, `example2`, `example_hl`) with `r` and `gamma`.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dfs_model_load(spec: *const c_char, r: f64, gamma: f64, out: *mut *mut DfsModel) -> DfsStatus {
    guard(|| {
        let spec = read_str(spec, "spec")?;
        let params = PresetParams { r, gamma, ..PresetParams::default() };
        let inner = load_model(spec, &params).map_err(|e| Fail(DfsStatus::Parse, e.to_string()))?;
        emit(out, DfsModel { inner })?;
        Ok(DfsStatus::Ok)
    })
}

/// Parses model JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dfs_model_parse_json(json: *const c_char, out: *mut *mut DfsModel) -> DfsStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let inner = parse_model(text).map_err(|e| Fail(DfsStatus::Parse, e.to_string()))?;
        emit(out, DfsModel { inner })?;
        Ok(DfsStatus::Ok)
    })
}

/// # Safety
/// `model` must come from a `dfs_model_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dfs_model_free(model: *mut DfsModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Qubit count, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dfs_model_n_qubits(model: *const DfsModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.n_qubits())
}

/// Builds the stabilizers and verifies the code. Returns `OK` or `NEGATIVE`; the report is written either way.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dfs_check(model: *const DfsModel, kind: DfsKind, out: *mut *mut DfsReport) -> DfsStatus {
    guard(|| {
        let r = verify_theorem_7(model_ref(model)?, kind_of(kind))?;
        let passed = r.passed();
        emit(out, report(passed, r.to_key_value()))?;
        Ok(if passed { DfsStatus::Ok } else { DfsStatus::Negative })
    })
}

/// Encodes the stabilizers in the chosen formalism and tests dual membership.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dfs_encode(
    model: *const DfsModel,
    formalism: DfsFormalism,
    kind: DfsKind,
    out: *mut *mut DfsReport,
) -> DfsStatus {
    guard(|| {
        let m = model_ref(model)?;
        let (exists, text) = match formalism {
            DfsFormalism::Zeta => {
                let r = verify_theorem_16(m, kind_of(kind))?;
                (r.exists, r.to_key_value())
            }
            DfsFormalism::Vec => {
                let r = verify_vec_theorem(m, kind_of(kind))?;
                (r.exists, r.to_key_value())
            }
        };
        emit(out, report(exists, text))?;
        Ok(if exists { DfsStatus::Ok } else { DfsStatus::Negative })
    })
}

/// Runs the probing protocol for `n = 1..=n_max`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dfs_metrology(model: *const DfsModel, n_max: usize, out: *mut *mut DfsReport) -> DfsStatus {
    guard(|| {
        let r = run_protocol(model_ref(model)?, n_max)?;
        emit(out, report(r.hl_achievable, r.to_key_value()))?;
        Ok(if r.hl_achievable { DfsStatus::Ok } else { DfsStatus::Negative })
    })
}

/// Evolves the pure state with amplitudes `re[i] + i im[i]` to time `t`; writes the minimum purity seen.
/// A nonpositive `dt` selects the model default.
///
/// # Safety
/// `re` and `im` must each point to `len` doubles; `min_purity` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dfs_simulate_purity(
    model: *const DfsModel,
    re: *const f64,
    im: *const f64,
    len: usize,
    t: f64,
    dt: f64,
    min_purity: *mut f64,
) -> DfsStatus {
    guard(|| {
        let m = model_ref(model)?;
        if re.is_null() || im.is_null() {
            return Err(null("amplitude array"));
        }
        if min_purity.is_null() {
            return Err(null("min_purity"));
        }
        if len != m.dim() {
            return Err(Fail(DfsStatus::InvalidArgument, format!("{len} amplitudes for dimension {}", m.dim())));
        }
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let psi = Ket::from_iterator(len, re.iter().zip(im).map(|(a, b)| C64::new(*a, *b)));
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Fail(DfsStatus::InvalidArgument, "state has zero or non-finite norm".into()));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Fail(DfsStatus::InvalidArgument, format!("t = {t} must be finite and nonnegative")));
        }
        let rho = DensityMatrix::pure(&(psi / C64::new(norm, 0.0)))?;
        let dt = if dt > 0.0 { dt } else { m.default_dt() };
        let options = EvolveOptions { sample_every: 1, keep_states: false };
        let traj = evolve_with(m, &rho, t, dt, options)?;
        *min_purity = traj.min_purity();
        Ok(DfsStatus::Ok)
    })
}

/// Verdict stored in the report; false for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dfs_report_passed(report: *const DfsReport) -> bool {
    report.as_ref().is_some_and(|r| r.passed)
}

/// `key = value` text, owned by the report.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dfs_report_text(report: *const DfsReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// # Safety
/// `report` must come from a `dfs_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dfs_report_free(report: *mut DfsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
