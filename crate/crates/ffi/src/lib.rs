//! C ABI over the `cnoidal` library.
//!
//! Solutions are opaque heap handles created by one of the
//! `cnoidal_solution_*` constructors and released with
//! [`cnoidal_solution_free`]. Every fallible function returns a
//! [`CnoidalStatus`]; on failure the message is kept per thread and can be
//! read with [`cnoidal_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cnoidal::elliptic::{complete_k, jacobi_triple, Modulus};
use cnoidal::model::{PhysicalParams, SystemKind};
use cnoidal::simulate::{run_propagation, SpectralConfig};
use cnoidal::solutions::{
    cnoidal_params, evaluate_fields, evaluate_profiles, semi_trivial, solitary_limit,
    AsTravelingWave, FreeParams, RSign, SolitaryBranch, TravelingWave,
};
use cnoidal::verify::{verify_coefficients, verify_ode, ResidualReport};
use cnoidal::Error;

pub const CNOIDAL_KDV_KDV: c_int = 0;
pub const CNOIDAL_BBM_BBM: c_int = 1;
pub const CNOIDAL_KDV_BBM: c_int = 2;
pub const CNOIDAL_BBM_KDV: c_int = 3;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnoidalStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numerical = 4,
    Constraint = 5,
    Stencil = 6,
    Degenerate = 7,
    Config = 8,
    Stability = 9,
    Panic = 10,
}

impl From<&Error> for CnoidalStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => CnoidalStatus::Domain,
            Error::Numerical(_) => CnoidalStatus::Numerical,
            Error::Constraint(_) => CnoidalStatus::Constraint,
            Error::Stencil(_) => CnoidalStatus::Stencil,
            Error::Degenerate(_) => CnoidalStatus::Degenerate,
            Error::Config(_) => CnoidalStatus::Config,
            Error::Stability(_) => CnoidalStatus::Stability,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalPhysical {
    pub mu0: f64,
    pub mu1: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Free parameters of the semi-trivial families.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalFree {
    pub h0: f64,
    pub d0: f64,
    pub h2: f64,
    pub shift: f64,
    pub omega: f64,
    pub m: f64,
    pub sigma: f64,
}

/// Parameter vector of a solution. `r` is NaN for semi-trivial families.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalParams {
    pub system: c_int,
    pub shift: f64,
    pub omega: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub m: f64,
    pub r: f64,
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalReport {
    pub passed: bool,
    pub max_abs: f64,
    pub rms: f64,
    pub tolerance: f64,
    pub worst_location: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalPropagation {
    pub linf_error_u: f64,
    pub linf_error_v: f64,
    pub conserved_drift: f64,
    pub steps: u64,
}

/// Opaque solution handle.
pub struct CnoidalSolution {
    wave: TravelingWave,
    r: Option<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), CnoidalStatus>) -> CnoidalStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CnoidalStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic".into());
            CnoidalStatus::Panic
        }
    }
}

fn fail(e: Error) -> CnoidalStatus {
    let status = CnoidalStatus::from(&e);
    set_last_error(e.to_string());
    status
}

fn invalid(msg: &str) -> CnoidalStatus {
    set_last_error(msg.to_string());
    CnoidalStatus::InvalidArgument
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, CnoidalStatus> {
    p.as_mut().ok_or_else(|| {
        set_last_error(format!("{name} is null"));
        CnoidalStatus::NullPointer
    })
}

unsafe fn input<'a, T>(p: *const T, name: &str) -> Result<&'a T, CnoidalStatus> {
    p.as_ref().ok_or_else(|| {
        set_last_error(format!("{name} is null"));
        CnoidalStatus::NullPointer
    })
}

fn system(kind: c_int) -> Result<SystemKind, CnoidalStatus> {
    match kind {
        CNOIDAL_KDV_KDV => Ok(SystemKind::SchrodingerKdVKdV),
        CNOIDAL_BBM_BBM => Ok(SystemKind::SchrodingerBBMBBM),
        CNOIDAL_KDV_BBM => Ok(SystemKind::SchrodingerKdVBBM),
        CNOIDAL_BBM_KDV => Ok(SystemKind::SchrodingerBBMKdV),
        _ => Err(invalid(&format!("unknown system code {kind}"))),
    }
}

fn system_code(kind: SystemKind) -> c_int {
    match kind {
        SystemKind::SchrodingerKdVKdV => CNOIDAL_KDV_KDV,
        SystemKind::SchrodingerBBMBBM => CNOIDAL_BBM_BBM,
        SystemKind::SchrodingerKdVBBM => CNOIDAL_KDV_BBM,
        SystemKind::SchrodingerBBMKdV => CNOIDAL_BBM_KDV,
    }
}

fn sign(s: c_int) -> Result<RSign, CnoidalStatus> {
    match s {
        1 => Ok(RSign::Plus),
        -1 => Ok(RSign::Minus),
        _ => Err(invalid(&format!("sign must be +1 or -1, got {s}"))),
    }
}

fn physical(p: &CnoidalPhysical) -> PhysicalParams {
    PhysicalParams {
        mu0: p.mu0,
        mu1: p.mu1,
        a: p.a,
        b: p.b,
        c: p.c,
    }
}

fn report(r: &ResidualReport) -> CnoidalReport {
    CnoidalReport {
        passed: r.passed,
        max_abs: r.max_abs,
        rms: r.rms,
        tolerance: r.tolerance,
        worst_location: r.worst_location,
    }
}

fn emit(out_handle: &mut *mut CnoidalSolution, sol: CnoidalSolution) {
    *out_handle = Box::into_raw(Box::new(sol));
}

/// Static description of a [`CnoidalStatus`] value.
#[no_mangle]
pub extern "C" fn cnoidal_status_message(status: c_int) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid argument\0",
        3 => b"parameters outside the domain of the formula\0",
        4 => b"numerically degenerate parameters\0",
        5 => b"family precondition violated\0",
        6 => b"invalid finite-difference step\0",
        7 => b"degenerate solution\0",
        8 => b"invalid configuration\0",
        9 => b"simulation became unstable\0",
        10 => b"internal error\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`) and returns the length the full message needs,
/// including the terminator; 0 when there is no message.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(msg) = slot.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Complete elliptic integral `K(m)` for modulus `m`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_complete_k(m: f64, out_k: *mut f64) -> CnoidalStatus {
    guard(|| {
        let dst = out(out_k, "out_k")?;
        *dst = Modulus::new(m).and_then(complete_k).map_err(fail)?;
        Ok(())
    })
}

/// `sn`, `cn`, `dn` at argument `u` and modulus `m`.
///
/// # Safety
/// Output pointers must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_jacobi(
    u: f64,
    m: f64,
    sn: *mut f64,
    cn: *mut f64,
    dn: *mut f64,
) -> CnoidalStatus {
    guard(|| {
        let (sn, cn, dn) = (out(sn, "sn")?, out(cn, "cn")?, out(dn, "dn")?);
        let t = Modulus::new(m)
            .and_then(|m| jacobi_triple(u, m))
            .map_err(fail)?;
        (*sn, *cn, *dn) = (t.sn, t.cn, t.dn);
        Ok(())
    })
}

/// Cnoidal member of `system` on the `R` branch `sign` (+1 or −1).
///
/// # Safety
/// `phys` must point to a valid struct and `out_sol` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_solution_cnoidal(
    system_kind: c_int,
    phys: *const CnoidalPhysical,
    sigma: f64,
    m: f64,
    r_sign: c_int,
    out_sol: *mut *mut CnoidalSolution,
) -> CnoidalStatus {
    guard(|| {
        let dst = out(out_sol, "out_sol")?;
        *dst = ptr::null_mut();
        let phys = physical(input(phys, "phys")?);
        let kind = system(system_kind)?;
        let sign = sign(r_sign)?;
        let sol = Modulus::new(m)
            .and_then(|m| cnoidal_params(kind, &phys, sigma, m, sign))
            .map_err(fail)?;
        emit(
            dst,
            CnoidalSolution {
                wave: sol.traveling_wave(),
                r: Some(sol.r),
            },
        );
        Ok(())
    })
}

/// Solitary limit; `r_sign` +1 selects `m = R = 1`, −1 selects `m = −R = 1`.
///
/// # Safety
/// As for [`cnoidal_solution_cnoidal`].
#[no_mangle]
pub unsafe extern "C" fn cnoidal_solution_solitary(
    system_kind: c_int,
    phys: *const CnoidalPhysical,
    sigma: f64,
    r_sign: c_int,
    out_sol: *mut *mut CnoidalSolution,
) -> CnoidalStatus {
    guard(|| {
        let dst = out(out_sol, "out_sol")?;
        *dst = ptr::null_mut();
        let phys = physical(input(phys, "phys")?);
        let kind = system(system_kind)?;
        let sign = sign(r_sign)?;
        let sol = solitary_limit(kind, &phys, sigma, SolitaryBranch::from(sign)).map_err(fail)?;
        emit(
            dst,
            CnoidalSolution {
                wave: sol.traveling_wave(),
                r: Some(sign.value()),
            },
        );
        Ok(())
    })
}

/// Semi-trivial family `family` (numbered from 1).
///
/// # Safety
/// `phys` and `free` must point to valid structs; `out_sol` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_solution_semi_trivial(
    system_kind: c_int,
    phys: *const CnoidalPhysical,
    family: u32,
    free: *const CnoidalFree,
    out_sol: *mut *mut CnoidalSolution,
) -> CnoidalStatus {
    guard(|| {
        let dst = out(out_sol, "out_sol")?;
        *dst = ptr::null_mut();
        let phys = physical(input(phys, "phys")?);
        let f = input(free, "free")?;
        let free = FreeParams {
            h0: f.h0,
            d0: f.d0,
            h2: f.h2,
            shift: f.shift,
            omega: f.omega,
            m: f.m,
            sigma: f.sigma,
        };
        let kind = system(system_kind)?;
        let sol = semi_trivial(kind, &phys, &free, family as usize).map_err(fail)?;
        emit(
            dst,
            CnoidalSolution {
                wave: sol.traveling_wave(),
                r: None,
            },
        );
        Ok(())
    })
}

/// Default free parameters of the semi-trivial families.
#[no_mangle]
pub extern "C" fn cnoidal_free_default() -> CnoidalFree {
    let f = FreeParams::default();
    CnoidalFree {
        h0: f.h0,
        d0: f.d0,
        h2: f.h2,
        shift: f.shift,
        omega: f.omega,
        m: f.m,
        sigma: f.sigma,
    }
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sol` must be null or a handle returned by a constructor and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_solution_free(sol: *mut CnoidalSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `sol` must be a live handle; `out_params` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_solution_params(
    sol: *const CnoidalSolution,
    out_params: *mut CnoidalParams,
) -> CnoidalStatus {
    guard(|| {
        let s = input(sol, "sol")?;
        let dst = out(out_params, "out_params")?;
        let (w, p) = (s.wave.wave, s.wave.prof);
        *dst = CnoidalParams {
            system: system_code(s.wave.kind),
            shift: w.shift,
            omega: w.omega,
            sigma: w.sigma,
            lambda: w.lambda,
            m: w.m.value(),
            r: s.r.unwrap_or(f64::NAN),
            d0: p.d0,
            d1: p.d1,
            d2: p.d2,
            h0: p.h0,
            h1: p.h1,
            h2: p.h2,
        };
        Ok(())
    })
}

/// Profiles `f(ξ)`, `g(ξ)`.
///
/// # Safety
/// `sol` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_solution_profiles(
    sol: *const CnoidalSolution,
    xi: f64,
    f: *mut f64,
    g: *mut f64,
) -> CnoidalStatus {
    guard(|| {
        let s = input(sol, "sol")?;
        let (f, g) = (out(f, "f")?, out(g, "g")?);
        (*f, *g) = evaluate_profiles(&s.wave, xi).map_err(fail)?;
        Ok(())
    })
}

/// Fields `u(x, t)` (real and imaginary parts) and `v(x, t)`.
///
/// # Safety
/// `sol` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_solution_fields(
    sol: *const CnoidalSolution,
    x: f64,
    t: f64,
    u_re: *mut f64,
    u_im: *mut f64,
    v: *mut f64,
) -> CnoidalStatus {
    guard(|| {
        let s = input(sol, "sol")?;
        let (u_re, u_im, v) = (out(u_re, "u_re")?, out(u_im, "u_im")?, out(v, "v")?);
        let (u, vv) = evaluate_fields(&s.wave, x, t).map_err(fail)?;
        (*u_re, *u_im, *v) = (u.re, u.im, vv);
        Ok(())
    })
}

/// Scaled coefficient residuals.
///
/// # Safety
/// `sol` must be a live handle; `out_report` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_verify_coefficients(
    sol: *const CnoidalSolution,
    tolerance: f64,
    out_report: *mut CnoidalReport,
) -> CnoidalStatus {
    guard(|| {
        let s = input(sol, "sol")?;
        let dst = out(out_report, "out_report")?;
        *dst = report(&verify_coefficients(&s.wave, tolerance));
        Ok(())
    })
}

/// Scaled ODE residuals at `n_points` points over one period.
///
/// # Safety
/// `sol` must be a live handle; `out_report` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_verify_ode(
    sol: *const CnoidalSolution,
    n_points: usize,
    tolerance: f64,
    out_report: *mut CnoidalReport,
) -> CnoidalStatus {
    guard(|| {
        let s = input(sol, "sol")?;
        let dst = out(out_report, "out_report")?;
        *dst = report(&verify_ode(&s.wave, n_points, tolerance).map_err(fail)?);
        Ok(())
    })
}

/// Propagates the solution over one period with `n_modes` Fourier modes.
///
/// # Safety
/// `sol` must be a live handle; `out_result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cnoidal_simulate(
    sol: *const CnoidalSolution,
    n_modes: usize,
    dt: f64,
    t_end: f64,
    dealias: bool,
    out_result: *mut CnoidalPropagation,
) -> CnoidalStatus {
    guard(|| {
        let s = input(sol, "sol")?;
        let dst = out(out_result, "out_result")?;
        let mut cfg = SpectralConfig::for_solution(&s.wave, n_modes, dt, t_end).map_err(fail)?;
        cfg.dealias = dealias;
        let rep = run_propagation(&s.wave, &cfg).map_err(fail)?;
        *dst = CnoidalPropagation {
            linf_error_u: rep.linf_error_u,
            linf_error_v: rep.linf_error_v,
            conserved_drift: rep.conserved_drift,
            steps: rep.steps as u64,
        };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_mapping_is_total() {
        let all = [
            Error::Domain(String::new()),
            Error::Numerical(String::new()),
            Error::Constraint(String::new()),
            Error::Stencil(String::new()),
            Error::Degenerate(String::new()),
            Error::Config(String::new()),
            Error::Stability(String::new()),
        ];
        let codes: std::collections::BTreeSet<i32> =
            all.iter().map(|e| CnoidalStatus::from(e) as i32).collect();
        assert_eq!(codes.len(), all.len());
        assert!(!codes.contains(&0));
    }

    #[test]
    fn system_codes_round_trip() {
        for kind in SystemKind::ALL {
            assert_eq!(system(system_code(kind)).unwrap(), kind);
        }
        assert_eq!(system(7), Err(CnoidalStatus::InvalidArgument));
    }
}
