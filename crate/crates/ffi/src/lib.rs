//! C interface to rigidform.
//!
//! Scenarios and reports cross the boundary as opaque handles and every call
//! returns an [`RfStatus`]. On failure a message is kept per thread and can be
//! read with [`rf_last_error`]. Strings handed out by the library must be
//! released with [`rf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rigidform::cli::scenario::bundled;
use rigidform::cli::{generate_instance, run_scenario, Bounds, Report, RunOptions, Scenario, DEFAULT_BUDGET};
use rigidform::znf::int::to_i64;
use rigidform::znf::{smith_normal_form, IntMatrix};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The scenario or arguments were rejected; see `rf_last_error`.
    Input = 3,
    /// A result does not fit the output type.
    Overflow = 4,
    Panic = 5,
}

pub struct RfScenario(Scenario);

pub struct RfReport(Report);

/// Size caps for `rf_scenario_generate`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RfBounds {
    pub max_order: u32,
    pub max_rank: u32,
    pub max_places: u32,
    pub max_modulus: u64,
    pub negative_control: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RfRunOptions {
    pub seed: u64,
    /// Zero keeps the scenario's own budget.
    pub budget: u64,
    pub fail_fast: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(RfStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RfStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(RfStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure(RfStatus::Input, "text contains a nul byte".into()))
}

/// Message describing the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn rf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a TOML scenario.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid place to store a handle.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_parse(text: *const c_char, out: *mut *mut RfScenario) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = Scenario::parse(read_str(text, "text")?).map_err(|e| Failure(RfStatus::Input, e.to_string()))?;
        write_out(out, RfScenario(s));
        Ok(())
    })
}

/// Load a scenario shipped with the library, such as `c2-sign-torus`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid place to store a handle.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_bundled(name: *const c_char, out: *mut *mut RfScenario) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        let s = bundled(name).ok_or_else(|| Failure(RfStatus::Input, format!("no bundled scenario named '{name}'")))?;
        write_out(out, RfScenario(s));
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn rf_bounds_default() -> RfBounds {
    let b = Bounds::default();
    RfBounds {
        max_order: b.max_order as u32,
        max_rank: b.max_rank as u32,
        max_places: b.max_places as u32,
        max_modulus: b.max_modulus,
        negative_control: b.negative_control,
    }
}

/// Generate a random scenario. A null `bounds` means the defaults.
///
/// # Safety
/// `bounds` must be null or valid, and `out` a valid place to store a handle.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_generate(seed: u64, bounds: *const RfBounds, out: *mut *mut RfScenario) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let b = if bounds.is_null() { rf_bounds_default() } else { *bounds };
        let bounds = Bounds {
            max_order: b.max_order as usize,
            max_rank: b.max_rank as usize,
            max_places: b.max_places as usize,
            max_modulus: b.max_modulus,
            negative_control: b.negative_control,
        };
        let s = generate_instance(seed, &bounds).map_err(|e| Failure(RfStatus::Input, e.to_string()))?;
        write_out(out, RfScenario(s));
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle and `out` a valid place to store a string.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_to_toml(scenario: *const RfScenario, out: *mut *mut c_char) -> RfStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c_string(s.0.to_toml())?;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_free(scenario: *mut RfScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Run every operation of a scenario. A report is produced whether or not the
/// checks pass; inspect it with `rf_report_passed`. A null `options` means
/// seed 1 and the scenario's budget.
///
/// # Safety
/// `scenario` must be a live handle, `options` null or valid, and `out` a valid place to store a handle.
#[no_mangle]
pub unsafe extern "C" fn rf_run(scenario: *const RfScenario, options: *const RfRunOptions, out: *mut *mut RfReport) -> RfStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let o = options.as_ref().copied().unwrap_or(RfRunOptions { seed: 1, budget: 0, fail_fast: false });
        let opts = RunOptions {
            seed: o.seed,
            budget: (o.budget != 0).then_some(o.budget),
            fail_fast: o.fail_fast,
            timing: false,
        };
        let report = run_scenario(&s.0, &opts).map_err(|e| Failure(RfStatus::Input, e.to_string()))?;
        write_out(out, RfReport(report));
        Ok(())
    })
}

/// Budget used when neither the scenario nor the options set one.
#[no_mangle]
pub extern "C" fn rf_default_budget() -> u64 {
    DEFAULT_BUDGET
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_report_passed(report: *const RfReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.passed)
}

/// Number of operation results in the report.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_report_len(report: *const RfReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.results.len())
}

/// # Safety
/// `report` must be a live handle and `out` a valid place to store a string.
#[no_mangle]
pub unsafe extern "C" fn rf_report_to_toml(report: *const RfReport, out: *mut *mut c_char) -> RfStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c_string(r.0.to_toml())?;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rf_report_free(report: *mut RfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Smith normal form diagonal of a row-major `rows × cols` matrix, written as
/// `min(rows, cols)` entries to `diagonal`.
///
/// # Safety
/// `entries` must hold `rows * cols` values and `diagonal` room for `min(rows, cols)`.
#[no_mangle]
pub unsafe extern "C" fn rf_smith_diagonal(entries: *const i64, rows: usize, cols: usize, diagonal: *mut i64) -> RfStatus {
    guard(|| {
        if rows == 0 || cols == 0 {
            return Ok(());
        }
        if entries.is_null() {
            return Err(null("entries"));
        }
        if diagonal.is_null() {
            return Err(null("diagonal"));
        }
        let flat = std::slice::from_raw_parts(entries, rows * cols);
        let m = IntMatrix::from_rows(&flat.chunks(cols).map(<[i64]>::to_vec).collect::<Vec<_>>());
        let d = smith_normal_form(&m).diagonal();
        let values = d
            .iter()
            .map(|x| to_i64(x).ok_or_else(|| Failure(RfStatus::Overflow, format!("invariant factor {x} exceeds i64"))))
            .collect::<Result<Vec<_>, _>>()?;
        ptr::copy_nonoverlapping(values.as_ptr(), diagonal, values.len());
        Ok(())
    })
}
