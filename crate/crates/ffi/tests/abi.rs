use std::ffi::{c_char, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use cnoidal_ffi::*;

fn figure_kdv_kdv() -> CnoidalPhysical {
    CnoidalPhysical {
        mu0: 1.0,
        mu1: 0.25,
        a: 1.0,
        b: -1.0,
        c: 1.5,
    }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let needed = unsafe { cnoidal_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(needed > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn cnoidal_handle_lifecycle() {
    let phys = figure_kdv_kdv();
    let mut sol = ptr::null_mut();
    let st = unsafe { cnoidal_solution_cnoidal(CNOIDAL_KDV_KDV, &phys, 2.0, 0.5, 1, &mut sol) };
    assert_eq!(st, CnoidalStatus::Ok);
    assert!(!sol.is_null());

    let mut p = std::mem::MaybeUninit::<CnoidalParams>::uninit();
    assert_eq!(
        unsafe { cnoidal_solution_params(sol, p.as_mut_ptr()) },
        CnoidalStatus::Ok
    );
    let p = unsafe { p.assume_init() };
    assert_eq!(p.system, CNOIDAL_KDV_KDV);
    assert_eq!(p.shift, 0.625);
    assert_eq!(p.omega, -21.0 / 64.0);
    assert!((p.r - 13f64.sqrt() / 4.0).abs() < 1e-15);

    let (mut f, mut g) = (0.0, 0.0);
    assert_eq!(
        unsafe { cnoidal_solution_profiles(sol, 0.0, &mut f, &mut g) },
        CnoidalStatus::Ok
    );
    assert_eq!(f, p.d0 + p.d2);
    let (mut ur, mut ui, mut v) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { cnoidal_solution_fields(sol, 0.0, 0.0, &mut ur, &mut ui, &mut v) },
        CnoidalStatus::Ok
    );
    assert_eq!((ur, ui, v), (f, 0.0, g));

    let mut rep = CnoidalReport {
        passed: false,
        max_abs: 0.0,
        rms: 0.0,
        tolerance: 0.0,
        worst_location: 0.0,
    };
    assert_eq!(
        unsafe { cnoidal_verify_coefficients(sol, 1e-9, &mut rep) },
        CnoidalStatus::Ok
    );
    assert!(rep.passed);
    assert_eq!(
        unsafe { cnoidal_verify_ode(sol, 257, 1e-8, &mut rep) },
        CnoidalStatus::Ok
    );
    assert!(rep.passed);
    unsafe { cnoidal_solution_free(sol) };
}

#[test]
fn infeasible_branch_reports_domain_error() {
    let phys = figure_kdv_kdv();
    let mut sol = ptr::null_mut();
    let st = unsafe { cnoidal_solution_cnoidal(CNOIDAL_KDV_KDV, &phys, 2.0, 0.5, -1, &mut sol) };
    assert_eq!(st, CnoidalStatus::Domain);
    assert!(sol.is_null());
    assert!(last_error().contains("lambda^2"));
}

#[test]
fn bad_arguments() {
    let phys = figure_kdv_kdv();
    let mut sol = ptr::null_mut();
    assert_eq!(
        unsafe { cnoidal_solution_cnoidal(9, &phys, 2.0, 0.5, 1, &mut sol) },
        CnoidalStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cnoidal_solution_cnoidal(0, &phys, 2.0, 0.5, 0, &mut sol) },
        CnoidalStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cnoidal_solution_cnoidal(0, ptr::null(), 2.0, 0.5, 1, &mut sol) },
        CnoidalStatus::NullPointer
    );
    assert_eq!(
        unsafe { cnoidal_complete_k(0.5, ptr::null_mut()) },
        CnoidalStatus::NullPointer
    );
    let mut k = 0.0;
    assert_eq!(
        unsafe { cnoidal_complete_k(1.0, &mut k) },
        CnoidalStatus::Domain
    );
    unsafe { cnoidal_solution_free(ptr::null_mut()) };
}

#[test]
fn last_error_truncates_and_reports_length() {
    let mut k = 0.0;
    assert_eq!(
        unsafe { cnoidal_complete_k(2.0, &mut k) },
        CnoidalStatus::Domain
    );
    let full = unsafe { cnoidal_last_error(ptr::null_mut(), 0) };
    let mut buf = [1 as c_char; 4];
    assert_eq!(
        unsafe { cnoidal_last_error(buf.as_mut_ptr(), buf.len()) },
        full
    );
    assert_eq!(buf[3], 0);
}

#[test]
fn errors_are_per_thread() {
    let mut k = 0.0;
    assert_eq!(
        unsafe { cnoidal_complete_k(2.0, &mut k) },
        CnoidalStatus::Domain
    );
    let other = std::thread::spawn(|| unsafe { cnoidal_last_error(ptr::null_mut(), 0) })
        .join()
        .unwrap();
    assert_eq!(other, 0);
}

#[test]
fn kernel_entry_points() {
    let mut k = 0.0;
    assert_eq!(
        unsafe { cnoidal_complete_k(0.0, &mut k) },
        CnoidalStatus::Ok
    );
    assert_eq!(k, std::f64::consts::FRAC_PI_2);
    let (mut sn, mut cn, mut dn) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { cnoidal_jacobi(0.7, 1.0, &mut sn, &mut cn, &mut dn) },
        CnoidalStatus::Ok
    );
    assert!((sn - 0.7f64.tanh()).abs() < 1e-15);
    assert_eq!(cn, dn);
}

#[test]
fn semi_trivial_and_solitary_handles() {
    let phys = figure_kdv_kdv();
    let free = CnoidalFree {
        h2: 1.0,
        m: 0.5,
        sigma: 2.0,
        ..cnoidal_free_default()
    };
    let mut sol = ptr::null_mut();
    assert_eq!(
        unsafe { cnoidal_solution_semi_trivial(CNOIDAL_KDV_KDV, &phys, 3, &free, &mut sol) },
        CnoidalStatus::Ok
    );
    let mut res = CnoidalPropagation {
        linf_error_u: 0.0,
        linf_error_v: 0.0,
        conserved_drift: 0.0,
        steps: 0,
    };
    assert_eq!(
        unsafe { cnoidal_simulate(sol, 64, 1e-3, 0.05, true, &mut res) },
        CnoidalStatus::Ok
    );
    assert!(res.linf_error_v < 1e-9 && res.steps == 60, "{res:?}");
    unsafe { cnoidal_solution_free(sol) };

    assert_eq!(
        unsafe { cnoidal_solution_semi_trivial(CNOIDAL_KDV_KDV, &phys, 9, &free, &mut sol) },
        CnoidalStatus::Config
    );
    assert_eq!(
        unsafe { cnoidal_solution_solitary(CNOIDAL_KDV_KDV, &phys, 2.0, 1, &mut sol) },
        CnoidalStatus::Ok
    );
    let mut res2 = res;
    assert_eq!(
        unsafe { cnoidal_simulate(sol, 64, 1e-3, 0.05, true, &mut res2) },
        CnoidalStatus::Config
    );
    unsafe { cnoidal_solution_free(sol) };
}

#[test]
fn status_messages_are_static_strings() {
    for code in 0..=11 {
        let s = unsafe { CStr::from_ptr(cnoidal_status_message(code)) };
        assert!(!s.to_bytes().is_empty());
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cnoidal.h"))
            .unwrap();
    for name in [
        "cnoidal_status_message",
        "cnoidal_last_error",
        "cnoidal_complete_k",
        "cnoidal_jacobi",
        "cnoidal_solution_cnoidal",
        "cnoidal_solution_solitary",
        "cnoidal_solution_semi_trivial",
        "cnoidal_free_default",
        "cnoidal_solution_free",
        "cnoidal_solution_params",
        "cnoidal_solution_profiles",
        "cnoidal_solution_fields",
        "cnoidal_verify_coefficients",
        "cnoidal_verify_ode",
        "cnoidal_simulate",
        "typedef struct CnoidalSolution CnoidalSolution",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        return;
    };
    if !cc.status.success() {
        return;
    }
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cnoidal.h");
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-std=c99"])
        .arg(&header)
        .status()
        .unwrap();
    assert!(status.success());
}
