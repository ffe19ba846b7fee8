//! C ABI over `xorprot`.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns an [`XpStatus`]; on failure a message is
//! available from [`xp_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xorprot::bounds::{self, RingClass};
use xorprot::coding::Combo;
use xorprot::evaluate::{evaluate, Evaluation, Heuristic};
use xorprot::model::{self, Instance};
use xorprot::power::PowerParams;
use xorprot::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Parse = 3,
    Instance = 4,
    Unreachable = 5,
    Survivability = 6,
    Contract = 7,
    Domain = 8,
    OracleGuard = 9,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XpHeuristic {
    Osh = 0,
    Ww = 1,
    Wp = 2,
    Pw = 3,
    Pp = 4,
    Oracle = 5,
    Conventional = 6,
    Analytic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XpRingClass {
    Odd1 = 0,
    Odd2 = 1,
    Even1 = 2,
    Even2 = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct XpPowerReport {
    pub p_total: f64,
    pub p1_conventional: f64,
    pub p2_reduction: f64,
    pub savings_fraction: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct XpClosedForm {
    pub p_conventional: f64,
    pub p_coded: f64,
    pub savings_fraction: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct XpBounds {
    pub conventional_lower: f64,
    pub nc_lower_pairwise: f64,
    pub nc_lower_characteristic: f64,
}

/// Opaque network instance.
pub struct XpInstance(Instance);

/// Opaque result of one design strategy.
pub struct XpAnalysis {
    evaluation: Evaluation,
    bounds: Option<XpBounds>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> XpStatus {
    match e {
        Error::Parse { .. } => XpStatus::Parse,
        Error::Instance(_) => XpStatus::Instance,
        Error::Unreachable { .. } => XpStatus::Unreachable,
        Error::Survivability { .. } => XpStatus::Survivability,
        Error::Contract(_) => XpStatus::Contract,
        Error::Domain(_) => XpStatus::Domain,
        Error::OracleGuard(_) => XpStatus::OracleGuard,
        Error::Usage(_) => XpStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and panics for `xp_last_error`.
fn guard(f: impl FnOnce() -> Result<(), (XpStatus, String)>) -> XpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            XpStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            XpStatus::Panic
        }
    }
}

fn lib<T>(r: xorprot::Result<T>) -> Result<T, (XpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (XpStatus, String) {
    (XpStatus::NullArgument, format!("`{name}` is null"))
}

/// # Safety
/// `out` must be valid for writes.
unsafe fn put<T>(out: *mut T, value: T, name: &str) -> Result<(), (XpStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    unsafe { out.write(value) };
    Ok(())
}

fn params(p_port: f64, p_transponder: f64, capacity: f64) -> Result<PowerParams, (XpStatus, String)> {
    lib(PowerParams::new(p_port, p_transponder, capacity))
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn xp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Full mesh on `n` nodes with all-pairs demands of `volume` Gbps.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_generate_mesh(
    n: usize,
    volume: f64,
    out: *mut *mut XpInstance,
) -> XpStatus {
    guard(|| {
        let inst = lib(model::generate_full_mesh(n, volume))?;
        unsafe { put(out, Box::into_raw(Box::new(XpInstance(inst))), "out") }
    })
}

/// Ring on `n` nodes with all-pairs demands of `volume` Gbps.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_generate_ring(
    n: usize,
    volume: f64,
    out: *mut *mut XpInstance,
) -> XpStatus {
    guard(|| {
        let inst = lib(model::generate_ring(n, volume))?;
        unsafe { put(out, Box::into_raw(Box::new(XpInstance(inst))), "out") }
    })
}

/// Parses the line-oriented instance format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_parse(text: *const c_char, out: *mut *mut XpInstance) -> XpStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| (XpStatus::InvalidArgument, "text is not UTF-8".to_string()))?;
        let inst = lib(model::load_instance(text))?;
        unsafe { put(out, Box::into_raw(Box::new(XpInstance(inst))), "out") }
    })
}

/// Serializes an instance; release the string with `xp_string_free`.
///
/// # Safety
/// `inst` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_to_text(inst: *const XpInstance, out: *mut *mut c_char) -> XpStatus {
    guard(|| {
        let inst = unsafe { inst.as_ref() }.ok_or_else(|| null("inst"))?;
        let text = CString::new(inst.0.to_text()).unwrap_or_default();
        unsafe { put(out, text.into_raw(), "out") }
    })
}

/// Replaces the power parameters of an instance.
///
/// # Safety
/// `inst` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_set_power(
    inst: *mut XpInstance,
    p_port: f64,
    p_transponder: f64,
    wavelength_capacity: f64,
) -> XpStatus {
    guard(|| {
        let inst = unsafe { inst.as_mut() }.ok_or_else(|| null("inst"))?;
        let p = params(p_port, p_transponder, wavelength_capacity)?;
        inst.0 = inst.0.clone().with_params(p);
        Ok(())
    })
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_node_count(inst: *const XpInstance) -> usize {
    unsafe { inst.as_ref() }.map_or(0, |i| i.0.topology().node_count())
}

/// Demand count, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_demand_count(inst: *const XpInstance) -> usize {
    unsafe { inst.as_ref() }.map_or(0, |i| i.0.demands().len())
}

/// # Safety
/// `inst` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xp_instance_free(inst: *mut XpInstance) {
    if !inst.is_null() {
        drop(unsafe { Box::from_raw(inst) });
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn xp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

fn heuristic(h: XpHeuristic) -> Heuristic {
    match h {
        XpHeuristic::Osh => Heuristic::Osh,
        XpHeuristic::Ww => Heuristic::Fixed(Combo::WW),
        XpHeuristic::Wp => Heuristic::Fixed(Combo::WP),
        XpHeuristic::Pw => Heuristic::Fixed(Combo::PW),
        XpHeuristic::Pp => Heuristic::Fixed(Combo::PP),
        XpHeuristic::Oracle => Heuristic::Oracle,
        XpHeuristic::Conventional => Heuristic::Conventional,
        XpHeuristic::Analytic => Heuristic::Analytic,
    }
}

/// Routes, codes and evaluates `inst` with one strategy.
///
/// # Safety
/// `inst` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_analyze(
    inst: *const XpInstance,
    strategy: XpHeuristic,
    budget: usize,
    out: *mut *mut XpAnalysis,
) -> XpStatus {
    guard(|| {
        let inst = unsafe { inst.as_ref() }.ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let evaluation = lib(evaluate(&inst.0, heuristic(strategy), budget))?;
        let bounds = if evaluation.heuristic == Heuristic::Analytic {
            None
        } else {
            let b = lib(bounds::bound_nc(&inst.0, &evaluation.assignment))?;
            Some(XpBounds {
                conventional_lower: b.conventional_lower,
                nc_lower_pairwise: b.nc_lower_pairwise,
                nc_lower_characteristic: b.nc_lower_characteristic,
            })
        };
        unsafe { put(out, Box::into_raw(Box::new(XpAnalysis { evaluation, bounds })), "out") }
    })
}

/// # Safety
/// `a` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_analysis_power(a: *const XpAnalysis, out: *mut XpPowerReport) -> XpStatus {
    guard(|| {
        let a = unsafe { a.as_ref() }.ok_or_else(|| null("analysis"))?;
        let r = a.evaluation.report;
        let report = XpPowerReport {
            p_total: r.p_total,
            p1_conventional: r.p1_conventional,
            p2_reduction: r.p2_reduction,
            savings_fraction: r.savings_fraction,
        };
        unsafe { put(out, report, "out") }
    })
}

/// Lower bounds for the analysed assignment; `Domain` for the analytic strategy.
///
/// # Safety
/// `a` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_analysis_bounds(a: *const XpAnalysis, out: *mut XpBounds) -> XpStatus {
    guard(|| {
        let a = unsafe { a.as_ref() }.ok_or_else(|| null("analysis"))?;
        let b = a.bounds.ok_or_else(|| {
            (XpStatus::Domain, "closed-form analyses carry no assignment bounds".to_string())
        })?;
        unsafe { put(out, b, "out") }
    })
}

/// Number of coded demand pairs, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn xp_analysis_pair_count(a: *const XpAnalysis) -> usize {
    unsafe { a.as_ref() }.map_or(0, |a| a.evaluation.assignment.pairs().len())
}

/// Total shared links over all coded pairs, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn xp_analysis_shared_hops(a: *const XpAnalysis) -> usize {
    unsafe { a.as_ref() }.map_or(0, |a| a.evaluation.assignment.total_shared_hops())
}

/// # Safety
/// `a` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xp_analysis_free(a: *mut XpAnalysis) {
    if !a.is_null() {
        drop(unsafe { Box::from_raw(a) });
    }
}

fn closed(form: bounds::ClosedForm) -> XpClosedForm {
    XpClosedForm {
        p_conventional: form.p_conventional,
        p_coded: form.p_coded,
        savings_fraction: form.savings_fraction,
    }
}

/// Closed-form full-mesh power.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_mesh_power(
    n: usize,
    volume: f64,
    p_port: f64,
    p_transponder: f64,
    wavelength_capacity: f64,
    out: *mut XpClosedForm,
) -> XpStatus {
    guard(|| {
        let p = params(p_port, p_transponder, wavelength_capacity)?;
        let form = lib(bounds::mesh_power(n, volume, &p))?;
        unsafe { put(out, closed(form), "out") }
    })
}

/// Closed-form ring power with protection-protection coding.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_ring_power(
    n: usize,
    volume: f64,
    p_port: f64,
    p_transponder: f64,
    wavelength_capacity: f64,
    out: *mut XpClosedForm,
) -> XpStatus {
    guard(|| {
        let p = params(p_port, p_transponder, wavelength_capacity)?;
        let form = lib(bounds::ring_power(n, volume, &p))?;
        unsafe { put(out, closed(form), "out") }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_ring_classify(n: usize, out: *mut XpRingClass) -> XpStatus {
    guard(|| {
        let class = match lib(bounds::ring_classify(n))? {
            RingClass::Odd1 => XpRingClass::Odd1,
            RingClass::Odd2 => XpRingClass::Odd2,
            RingClass::Even1 => XpRingClass::Even1,
            RingClass::Even2 => XpRingClass::Even2,
        };
        unsafe { put(out, class, "out") }
    })
}

/// Shared hops of the ring closed form; `Domain` if the value exceeds 64 bits.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_ring_shared_hops(n: usize, out: *mut u64) -> XpStatus {
    guard(|| {
        let hops = lib(bounds::ring_shared_hops(n))?;
        let hops = u64::try_from(hops)
            .map_err(|_| (XpStatus::Domain, format!("shared hops of a {n}-ring overflow 64 bits")))?;
        unsafe { put(out, hops, "out") }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xp_mesh_fluctuation(n: usize, out: *mut f64) -> XpStatus {
    guard(|| {
        let eps = lib(bounds::mesh_fluctuation(n))?;
        unsafe { put(out, eps, "out") }
    })
}
