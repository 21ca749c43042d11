//! C ABI over `qrotlearn`.
//!
//! Every fallible function returns a [`QrlStatus`] and writes results through
//! out-pointers. Reports and memory distributions are opaque handles owned by
//! the caller and released with the matching `_free` function. The message of
//! the most recent error on the calling thread is available from
//! [`qrl_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qrotlearn::heisenberg::heisenberg_entanglement_fidelity;
use qrotlearn::memory_dynamics::{complementary_step_with, persistence, thermal_advantage_threshold, KernelForm, MemoryDistribution};
use qrotlearn::mo_benchmark::mo_optimal_fidelity;
use qrotlearn::quantum_optimal::{optimal_fidelity, Problem, Regime, RegimeReport};
use qrotlearn::spin_algebra::SpinLabel;
use qrotlearn::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrlStatus {
    Ok = 0,
    NullPointer = 1,
    /// Spin, magnetic index, angle or problem number outside its domain.
    InvalidArgument = 2,
    Infeasible = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Regime tag of an optimal-fidelity report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrlRegime {
    Case1 = 0,
    Case2Mixture = 1,
    Case3 = 2,
    J1AnomalousProblem2 = 3,
    MeasureAndOperate = 4,
}

/// Recycling kernel selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrlKernel {
    LeadingOrder = 0,
    Exact = 1,
}

/// Opaque optimal-fidelity report.
pub struct QrlReport(RegimeReport);

/// Opaque memory population vector, ordered `m = j … −j`.
pub struct QrlMemory(MemoryDistribution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QrlStatus {
    match err {
        Error::InvalidQuantumNumbers(_)
        | Error::InvalidMagneticIndex { .. }
        | Error::InapplicableCase { .. }
        | Error::OutOfRange { .. } => QrlStatus::InvalidArgument,
        Error::Infeasible(_) => QrlStatus::Infeasible,
        Error::DimensionMismatch { .. } | Error::ConstraintViolation(_) | Error::Numerical(_) => QrlStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QrlStatus, String)>) -> QrlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside qrotlearn".into());
            QrlStatus::Panic
        }
    }
}

fn lib<T>(r: qrotlearn::Result<T>) -> Result<T, (QrlStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (QrlStatus, String) {
    (QrlStatus::NullPointer, format!("{name} is null"))
}

fn problem(n: u8) -> Result<Problem, (QrlStatus, String)> {
    lib(Problem::from_index(n))
}

fn spin(two_j: u32) -> Result<SpinLabel, (QrlStatus, String)> {
    if two_j == 0 {
        return Err((QrlStatus::InvalidArgument, "two_j must be at least 1".into()));
    }
    Ok(SpinLabel::new(two_j))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), (QrlStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn qrl_status_string(status: QrlStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        QrlStatus::Ok => b"ok\0",
        QrlStatus::NullPointer => b"null pointer\0",
        QrlStatus::InvalidArgument => b"invalid argument\0",
        QrlStatus::Infeasible => b"infeasible\0",
        QrlStatus::Numerical => b"numerical failure\0",
        QrlStatus::BufferTooSmall => b"buffer too small\0",
        QrlStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread, or null if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qrl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Optimal learning strategy with a quantum memory. `problem` is 1 or 2.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qrl_optimal_fidelity(two_j: u32, theta: f64, problem_index: u8, out: *mut *mut QrlReport) -> QrlStatus {
    guard(|| {
        let report = lib(optimal_fidelity(spin(two_j)?, theta, problem(problem_index)?))?;
        write(out, Box::into_raw(Box::new(QrlReport(report))), "out")
    })
}

/// Optimal measure-and-operate benchmark. `problem` is 1 or 2.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qrl_mo_optimal_fidelity(two_j: u32, theta: f64, problem_index: u8, out: *mut *mut QrlReport) -> QrlStatus {
    guard(|| {
        let report = lib(mo_optimal_fidelity(spin(two_j)?, theta, problem(problem_index)?))?;
        write(out, Box::into_raw(Box::new(QrlReport(report))), "out")
    })
}

/// Average fidelity over pure inputs; NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrl_report_fidelity(report: *const QrlReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.fidelity)
}

/// Entanglement fidelity; NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrl_report_entanglement_fidelity(report: *const QrlReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.entanglement_fidelity)
}

/// Twice the optimal memory magnetic number.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrl_report_optimal_two_m(report: *const QrlReport, out: *mut i32) -> QrlStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        write(out, r.0.optimal_two_m, "out")
    })
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrl_report_regime(report: *const QrlReport, out: *mut QrlRegime) -> QrlStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let regime = match r.0.regime {
            Regime::Case1 => QrlRegime::Case1,
            Regime::Case2Mixture => QrlRegime::Case2Mixture,
            Regime::Case3 => QrlRegime::Case3,
            Regime::J1AnomalousProblem2 => QrlRegime::J1AnomalousProblem2,
            Regime::MeasureAndOperate => QrlRegime::MeasureAndOperate,
        };
        write(out, regime, "out")
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrl_report_free(report: *mut QrlReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Entanglement fidelity of the Heisenberg-coupling learner with the memory in `|j, j⟩`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrl_heisenberg_fidelity(two_j: u32, theta: f64, out: *mut f64) -> QrlStatus {
    guard(|| {
        if !theta.is_finite() {
            return Err((QrlStatus::InvalidArgument, format!("theta = {theta} is not finite")));
        }
        write(out, heisenberg_entanglement_fidelity(spin(two_j)?, theta, None), "out")
    })
}

/// Memory prepared in `|j, m⟩`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qrl_memory_new(two_j: u32, two_m: i32, out: *mut *mut QrlMemory) -> QrlStatus {
    guard(|| {
        let d = lib(MemoryDistribution::point_mass(spin(two_j)?, two_m))?;
        write(out, Box::into_raw(Box::new(QrlMemory(d))), "out")
    })
}

/// Applies one use of the recycling channel in place.
///
/// # Safety
/// `memory` must be a live handle not aliased elsewhere during the call.
#[no_mangle]
pub unsafe extern "C" fn qrl_memory_step(memory: *mut QrlMemory, theta: f64, kernel: QrlKernel) -> QrlStatus {
    guard(|| {
        let m = memory.as_mut().ok_or_else(|| null("memory"))?;
        let form = match kernel {
            QrlKernel::LeadingOrder => KernelForm::LeadingOrder,
            QrlKernel::Exact => KernelForm::Exact,
        };
        m.0 = lib(complementary_step_with(form, m.0.spin(), theta, &m.0))?;
        Ok(())
    })
}

/// Number of populations, `2j + 1`; zero for a null handle.
///
/// # Safety
/// `memory` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrl_memory_len(memory: *const QrlMemory) -> usize {
    memory.as_ref().map_or(0, |m| m.0.probabilities().len())
}

/// Copies the populations into `buf`, ordered `m = j … −j`.
///
/// # Safety
/// `memory` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qrl_memory_probabilities(memory: *const QrlMemory, buf: *mut f64, len: usize) -> QrlStatus {
    guard(|| {
        let m = memory.as_ref().ok_or_else(|| null("memory"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let p = m.0.probabilities();
        if len < p.len() {
            return Err((QrlStatus::BufferTooSmall, format!("need {} entries, got {len}", p.len())));
        }
        ptr::copy_nonoverlapping(p.as_ptr(), buf, p.len());
        Ok(())
    })
}

/// Releases a memory handle. Null is ignored.
///
/// # Safety
/// `memory` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrl_memory_free(memory: *mut QrlMemory) {
    if !memory.is_null() {
        drop(Box::from_raw(memory));
    }
}

/// Number of recycled uses that stay above the measure-and-operate benchmark.
/// `capped` is set when the search reached `t_max`.
///
/// # Safety
/// `steps` and `capped` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrl_persistence(two_j: u32, theta: f64, t_max: usize, steps: *mut usize, capped: *mut bool) -> QrlStatus {
    guard(|| {
        if steps.is_null() || capped.is_null() {
            return Err(null("steps/capped"));
        }
        let p = lib(persistence(spin(two_j)?, theta, t_max))?;
        write(steps, p.horizon.steps, "steps")?;
        write(capped, p.horizon.capped, "capped")
    })
}

/// Inverse temperature above which a thermal memory beats the benchmark.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrl_thermal_threshold(two_j: u32, theta: f64, out: *mut f64) -> QrlStatus {
    guard(|| write(out, lib(thermal_advantage_threshold(spin(two_j)?, theta))?, "out"))
}
