use std::f64::consts::PI;
use std::ffi::CStr;
use std::ptr;

use qrotlearn_ffi::*;

#[test]
fn optimal_report_round_trip() {
    let mut report = ptr::null_mut();
    let status = unsafe { qrl_optimal_fidelity(3, PI, 1, &mut report) };
    assert_eq!(status, QrlStatus::Ok);
    let f = unsafe { qrl_report_fidelity(report) };
    assert!((f - 17.0 / 24.0).abs() < 1e-12);
    let mut two_m = 0;
    assert_eq!(unsafe { qrl_report_optimal_two_m(report, &mut two_m) }, QrlStatus::Ok);
    let mut regime = QrlRegime::MeasureAndOperate;
    assert_eq!(unsafe { qrl_report_regime(report, &mut regime) }, QrlStatus::Ok);
    assert_ne!(regime, QrlRegime::MeasureAndOperate);
    unsafe { qrl_report_free(report) };

    let mut mo = ptr::null_mut();
    assert_eq!(unsafe { qrl_mo_optimal_fidelity(3, PI, 1, &mut mo) }, QrlStatus::Ok);
    assert!((unsafe { qrl_report_fidelity(mo) } - 29.0 / 45.0).abs() < 1e-12);
    unsafe { qrl_report_free(mo) };
}

#[test]
fn errors_set_status_and_message() {
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { qrl_optimal_fidelity(3, 7.0, 1, &mut report) }, QrlStatus::InvalidArgument);
    assert!(report.is_null());
    let msg = unsafe { CStr::from_ptr(qrl_last_error_message()) }.to_str().unwrap();
    assert!(msg.contains("theta"), "{msg}");

    assert_eq!(unsafe { qrl_optimal_fidelity(3, 1.0, 9, &mut report) }, QrlStatus::InvalidArgument);
    assert_eq!(unsafe { qrl_optimal_fidelity(0, 1.0, 1, &mut report) }, QrlStatus::InvalidArgument);
    assert_eq!(unsafe { qrl_optimal_fidelity(3, 1.0, 1, ptr::null_mut()) }, QrlStatus::NullPointer);
    assert_eq!(unsafe { qrl_thermal_threshold(1, PI, &mut 0.0) }, QrlStatus::Infeasible);
    assert!(unsafe { qrl_report_fidelity(ptr::null()) }.is_nan());
    unsafe { qrl_report_free(ptr::null_mut()) };
}

#[test]
fn status_strings_are_static() {
    let s = unsafe { CStr::from_ptr(qrl_status_string(QrlStatus::BufferTooSmall)) };
    assert_eq!(s.to_str().unwrap(), "buffer too small");
}

#[test]
fn memory_steps_and_copies() {
    let mut mem = ptr::null_mut();
    assert_eq!(unsafe { qrl_memory_new(4, 4, &mut mem) }, QrlStatus::Ok);
    assert_eq!(unsafe { qrl_memory_len(mem) }, 5);
    for _ in 0..3 {
        assert_eq!(unsafe { qrl_memory_step(mem, PI, QrlKernel::Exact) }, QrlStatus::Ok);
    }
    let mut short = [0.0; 4];
    assert_eq!(unsafe { qrl_memory_probabilities(mem, short.as_mut_ptr(), short.len()) }, QrlStatus::BufferTooSmall);
    let mut p = [0.0; 5];
    assert_eq!(unsafe { qrl_memory_probabilities(mem, p.as_mut_ptr(), p.len()) }, QrlStatus::Ok);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(p[0] < 1.0 && p[1] > 0.0);
    unsafe { qrl_memory_free(mem) };

    assert_eq!(unsafe { qrl_memory_new(4, 3, &mut mem) }, QrlStatus::InvalidArgument);
}

#[test]
fn scalar_entry_points() {
    let mut f = 0.0;
    assert_eq!(unsafe { qrl_heisenberg_fidelity(2, 1.0, &mut f) }, QrlStatus::Ok);
    assert!(f > 0.0 && f <= 1.0);
    assert_eq!(unsafe { qrl_heisenberg_fidelity(2, f64::NAN, &mut f) }, QrlStatus::InvalidArgument);

    let (mut steps, mut capped) = (0usize, true);
    assert_eq!(unsafe { qrl_persistence(200, PI, 10_000, &mut steps, &mut capped) }, QrlStatus::Ok);
    assert_eq!((steps, capped), (50, false));

    let mut g = 0.0;
    assert_eq!(unsafe { qrl_thermal_threshold(1000, PI, &mut g) }, QrlStatus::Ok);
    assert!((0.52..=0.58).contains(&g));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qrotlearn.h")).unwrap();
    for name in [
        "qrl_status_string",
        "qrl_last_error_message",
        "qrl_optimal_fidelity",
        "qrl_mo_optimal_fidelity",
        "qrl_report_fidelity",
        "qrl_report_entanglement_fidelity",
        "qrl_report_optimal_two_m",
        "qrl_report_regime",
        "qrl_report_free",
        "qrl_heisenberg_fidelity",
        "qrl_memory_new",
        "qrl_memory_step",
        "qrl_memory_len",
        "qrl_memory_probabilities",
        "qrl_memory_free",
        "qrl_persistence",
        "qrl_thermal_threshold",
        "typedef struct QrlReport QrlReport",
        "typedef struct QrlMemory QrlMemory",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
