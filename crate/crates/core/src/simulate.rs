//! Fourier pseudo-spectral propagation of exact initial data.
//!
//! The `u` field is evolved in the gauge `w = e^{−iβx}u`, which is periodic
//! on one profile period when `β = B`; its spectrum lives on the shifted
//! wavenumbers `k + β`. Time stepping is classical RK4, switched to the
//! integrating-factor form when the linear symbol is stiff on the grid.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PhysicalParams, SystemKind};
use crate::solutions::{evaluate_fields, AsTravelingWave, TravelingWave};

/// Blow-up threshold relative to the initial norm.
pub const BLOWUP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub n_modes: usize,
    pub domain_length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    /// Number of equally spaced output times after `t = 0`.
    pub outputs: usize,
    /// Gauge wavenumber `β`; `None` uses the solution's `B`.
    pub gauge: Option<f64>,
}

impl SpectralConfig {
    /// One fundamental period of `sol` as the domain.
    pub fn for_solution<S: AsTravelingWave + ?Sized>(
        sol: &S,
        n_modes: usize,
        dt: f64,
        t_end: f64,
    ) -> Result<Self> {
        let domain_length = sol.traveling_wave().period().ok_or_else(|| {
            Error::Config("solitary profiles are not periodic; pass a domain length".into())
        })?;
        Ok(Self {
            n_modes,
            domain_length,
            dt,
            t_end,
            dealias: true,
            outputs: 20,
            gauge: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_modes.is_power_of_two() || self.n_modes < 16 {
            return Err(Error::Config(format!(
                "n_modes must be a power of two >= 16, got {}",
                self.n_modes
            )));
        }
        if !(self.domain_length > 0.0 && self.domain_length.is_finite()) {
            return Err(Error::Config(format!(
                "domain length must be positive, got {}",
                self.domain_length
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::Config(format!(
                "t_end = {} must be at least dt = {}",
                self.t_end, self.dt
            )));
        }
        if self.outputs == 0 {
            return Err(Error::Config("outputs must be at least 1".into()));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        let n = (self.t_end / self.dt).round().max(1.0) as usize;
        n.div_ceil(self.outputs) * self.outputs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationReport {
    pub linf_error_u: f64,
    pub linf_error_v: f64,
    pub times: Vec<f64>,
    pub errors_over_time: Vec<(f64, f64)>,
    /// Largest drift of the spatial mean of `v` from its initial value.
    pub conserved_drift: f64,
    pub mass_drift_over_time: Vec<f64>,
    pub steps: usize,
    pub dt: f64,
    pub integrating_factor: bool,
}

impl PropagationReport {
    /// Time series with columns `t, err_u_linf, err_v_linf, mass_drift`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,err_u_linf,err_v_linf,mass_drift")?;
        for ((t, (eu, ev)), md) in self
            .times
            .iter()
            .zip(&self.errors_over_time)
            .zip(&self.mass_drift_over_time)
        {
            writeln!(out, "{t:.16e},{eu:.16e},{ev:.16e},{md:.16e}")?;
        }
        Ok(())
    }
}

/// Largest drift of the mean of `v` across stored states.
pub fn conservation_probe<S: AsRef<[f64]>>(states: &[S]) -> f64 {
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len().max(1) as f64;
    let Some(first) = states.first() else {
        return 0.0;
    };
    let m0 = mean(first.as_ref());
    states
        .iter()
        .map(|s| (mean(s.as_ref()) - m0).abs())
        .fold(0.0, f64::max)
}

/// Fields on the grid in physical space.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub x: Vec<f64>,
    pub u: Vec<Complex64>,
    pub v: Vec<f64>,
    pub t: f64,
}

struct Solver {
    n: usize,
    kind: SystemKind,
    phys: PhysicalParams,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Shifted wavenumbers `k + β` for `w`.
    kappa: Vec<f64>,
    k: Vec<f64>,
    lin_w: Vec<Complex64>,
    lin_v: Vec<Complex64>,
    mask: Vec<f64>,
    integrating_factor: bool,
}

impl Solver {
    fn new(kind: SystemKind, phys: PhysicalParams, cfg: &SpectralConfig, beta: f64) -> Self {
        let n = cfg.n_modes;
        let mut planner = FftPlanner::new();
        let k0 = 2.0 * PI / cfg.domain_length;
        let index = |j: usize| {
            if j <= n / 2 {
                j as f64
            } else {
                j as f64 - n as f64
            }
        };
        let k: Vec<f64> = (0..n).map(|j| k0 * index(j)).collect();
        let kappa: Vec<f64> = k.iter().map(|kk| kk + beta).collect();
        let PhysicalParams { mu0, a, b, c, .. } = phys;
        let lin_w = kappa
            .iter()
            .map(|&q| {
                if kind.u_is_kdv() {
                    Complex64::new(0.0, -mu0 * q + a * q.powi(3) + b * q * q)
                } else {
                    Complex64::new(0.0, (-mu0 * q + b * q * q) / (1.0 + a * q * q))
                }
            })
            .collect::<Vec<_>>();
        let lin_v = k
            .iter()
            .map(|&q| {
                if kind.v_is_kdv() {
                    Complex64::new(0.0, c * q.powi(3) - q)
                } else {
                    Complex64::new(0.0, -q / (1.0 + c * q * q))
                }
            })
            .collect::<Vec<_>>();
        let cutoff = n as f64 / 3.0;
        let mask = (0..n)
            .map(|j| {
                if !cfg.dealias || index(j).abs() < cutoff {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let stiff = lin_w
            .iter()
            .chain(&lin_v)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            * cfg.dt;
        Self {
            n,
            kind,
            phys,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            kappa,
            k,
            lin_w,
            lin_v,
            mask,
            integrating_factor: stiff > 1.0,
        }
    }

    fn to_physical(&self, hat: &[Complex64]) -> Vec<Complex64> {
        let scale = 1.0 / self.n as f64;
        let mut buf: Vec<Complex64> = hat
            .iter()
            .zip(&self.mask)
            .map(|(z, m)| z * (m * scale))
            .collect();
        self.inv.process(&mut buf);
        buf
    }

    fn to_spectral(&self, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        self.fwd.process(&mut buf);
        buf
    }

    /// Nonlinear and forcing parts of the right-hand side.
    fn nonlinear(
        &self,
        w_hat: &[Complex64],
        v_hat: &[Complex64],
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let PhysicalParams { mu1, a, c, .. } = self.phys;
        let w = self.to_physical(w_hat);
        let v = self.to_physical(v_hat);
        let wv_hat = self.to_spectral(w.iter().zip(&v).map(|(wi, vi)| wi * vi.re).collect());
        let flux_hat = self.to_spectral(
            w.iter()
                .zip(&v)
                .map(|(wi, vi)| Complex64::new(0.5 * vi.re * vi.re + 0.5 * wi.norm_sqr(), 0.0))
                .collect(),
        );
        let i = Complex64::i();
        let nw = (0..self.n)
            .map(|j| {
                let q = self.kappa[j];
                let mut z = -(i * q + i * mu1) * wv_hat[j];
                if !self.kind.u_is_kdv() {
                    z /= 1.0 + a * q * q;
                }
                z * self.mask[j]
            })
            .collect();
        let nv = (0..self.n)
            .map(|j| {
                let q = self.k[j];
                let mut z = -i * q * flux_hat[j];
                if !self.kind.v_is_kdv() {
                    z /= 1.0 + c * q * q;
                }
                z * self.mask[j]
            })
            .collect();
        (nw, nv)
    }

    fn rhs(&self, w_hat: &[Complex64], v_hat: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let (mut nw, mut nv) = self.nonlinear(w_hat, v_hat);
        if !self.integrating_factor {
            for j in 0..self.n {
                nw[j] += self.lin_w[j] * w_hat[j];
                nv[j] += self.lin_v[j] * v_hat[j];
            }
        }
        (nw, nv)
    }

    fn step(&self, w: &mut [Complex64], v: &mut [Complex64], dt: f64) {
        let axpy = |y: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
            y.iter().zip(k).map(|(a, b)| a + b * s).collect()
        };
        if self.integrating_factor {
            let half_w: Vec<Complex64> =
                self.lin_w.iter().map(|l| (l * (0.5 * dt)).exp()).collect();
            let half_v: Vec<Complex64> =
                self.lin_v.iter().map(|l| (l * (0.5 * dt)).exp()).collect();
            let prop = |y: &[Complex64], e: &[Complex64]| -> Vec<Complex64> {
                y.iter().zip(e).map(|(a, b)| a * b).collect()
            };
            let (k1w, k1v) = self.rhs(w, v);
            let (k2w, k2v) = self.rhs(
                &prop(&axpy(w, &k1w, 0.5 * dt), &half_w),
                &prop(&axpy(v, &k1v, 0.5 * dt), &half_v),
            );
            let ew = prop(w, &half_w);
            let ev = prop(v, &half_v);
            let (k3w, k3v) = self.rhs(&axpy(&ew, &k2w, 0.5 * dt), &axpy(&ev, &k2v, 0.5 * dt));
            let (k4w, k4v) = self.rhs(
                &prop(&axpy(&ew, &k3w, dt), &half_w),
                &prop(&axpy(&ev, &k3v, dt), &half_v),
            );
            for j in 0..self.n {
                let (e1, e2) = (half_w[j], half_w[j] * half_w[j]);
                w[j] = e2 * w[j] + dt / 6.0 * (e2 * k1w[j] + 2.0 * e1 * (k2w[j] + k3w[j]) + k4w[j]);
                let (e1, e2) = (half_v[j], half_v[j] * half_v[j]);
                v[j] = e2 * v[j] + dt / 6.0 * (e2 * k1v[j] + 2.0 * e1 * (k2v[j] + k3v[j]) + k4v[j]);
            }
        } else {
            let (k1w, k1v) = self.rhs(w, v);
            let (k2w, k2v) = self.rhs(&axpy(w, &k1w, 0.5 * dt), &axpy(v, &k1v, 0.5 * dt));
            let (k3w, k3v) = self.rhs(&axpy(w, &k2w, 0.5 * dt), &axpy(v, &k2v, 0.5 * dt));
            let (k4w, k4v) = self.rhs(&axpy(w, &k3w, dt), &axpy(v, &k3v, dt));
            for j in 0..self.n {
                w[j] += dt / 6.0 * (k1w[j] + 2.0 * (k2w[j] + k3w[j]) + k4w[j]);
                v[j] += dt / 6.0 * (k1v[j] + 2.0 * (k2v[j] + k3v[j]) + k4v[j]);
            }
        }
    }
}

fn norm(w: &[Complex64], v: &[Complex64]) -> f64 {
    w.iter().chain(v).map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

struct Run {
    report: PropagationReport,
    last: FieldState,
}

fn propagate(tw: &TravelingWave, cfg: &SpectralConfig) -> Result<Run> {
    cfg.validate()?;
    let beta = cfg.gauge.unwrap_or(tw.wave.shift);
    let solver = Solver::new(tw.kind, tw.phys, cfg, beta);
    let n = cfg.n_modes;
    let x: Vec<f64> = (0..n)
        .map(|j| cfg.domain_length * j as f64 / n as f64)
        .collect();
    let gauge: Vec<Complex64> = x
        .iter()
        .map(|&xx| Complex64::from_polar(1.0, beta * xx))
        .collect();

    let exact = |t: f64| -> Result<(Vec<Complex64>, Vec<f64>)> {
        let mut u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for &xx in &x {
            let (uu, vv) = evaluate_fields(tw, xx, t)?;
            u.push(uu);
            v.push(vv);
        }
        Ok((u, v))
    };

    let (u0, v0) = exact(0.0)?;
    let mut w_hat = solver.to_spectral(u0.iter().zip(&gauge).map(|(u, g)| u * g.conj()).collect());
    let mut v_hat = solver.to_spectral(v0.iter().map(|&v| Complex64::new(v, 0.0)).collect());
    let norm0 = norm(&w_hat, &v_hat);
    let mass0 = v_hat[0].re / n as f64;

    let steps = cfg.steps();
    let dt = cfg.t_end / steps as f64;
    let every = steps / cfg.outputs;
    let mut times = vec![0.0];
    let mut errors = Vec::with_capacity(cfg.outputs + 1);
    let mut drift = vec![0.0];
    let mut last = FieldState {
        x: x.clone(),
        u: u0.clone(),
        v: v0.clone(),
        t: 0.0,
    };

    let measure =
        |w_hat: &[Complex64], v_hat: &[Complex64], t: f64| -> Result<(f64, f64, FieldState)> {
            let (ue, ve) = exact(t)?;
            let scale = 1.0 / n as f64;
            let mut w = w_hat.to_vec();
            solver.inv.process(&mut w);
            let mut v = v_hat.to_vec();
            solver.inv.process(&mut v);
            let u: Vec<Complex64> = w.iter().zip(&gauge).map(|(w, g)| w * g * scale).collect();
            let v: Vec<f64> = v.iter().map(|z| z.re * scale).collect();
            let eu = u
                .iter()
                .zip(&ue)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let ev = v
                .iter()
                .zip(&ve)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok((
                eu,
                ev,
                FieldState {
                    x: x.clone(),
                    u,
                    v,
                    t,
                },
            ))
        };
    let (eu, ev, _) = measure(&w_hat, &v_hat, 0.0)?;
    errors.push((eu, ev));

    for s in 1..=steps {
        solver.step(&mut w_hat, &mut v_hat, dt);
        let nrm = norm(&w_hat, &v_hat);
        if !nrm.is_finite() || nrm > BLOWUP_FACTOR * norm0 {
            return Err(Error::Stability(format!(
                "solution norm {nrm:e} exceeds {BLOWUP_FACTOR} x initial {norm0:e} at t = {}",
                s as f64 * dt
            )));
        }
        if s % every == 0 {
            let t = s as f64 * dt;
            let (eu, ev, state) = measure(&w_hat, &v_hat, t)?;
            times.push(t);
            errors.push((eu, ev));
            drift.push((v_hat[0].re / n as f64 - mass0).abs());
            last = state;
        }
    }

    let report = PropagationReport {
        linf_error_u: errors.iter().map(|e| e.0).fold(0.0, f64::max),
        linf_error_v: errors.iter().map(|e| e.1).fold(0.0, f64::max),
        times,
        errors_over_time: errors,
        conserved_drift: drift.iter().copied().fold(0.0, f64::max),
        mass_drift_over_time: drift,
        steps,
        dt,
        integrating_factor: solver.integrating_factor,
    };
    Ok(Run { report, last })
}

/// Evolves the exact initial data of `sol` and compares with the exact translate.
pub fn run_propagation<S: AsTravelingWave + ?Sized>(
    sol: &S,
    cfg: &SpectralConfig,
) -> Result<PropagationReport> {
    propagate(&sol.traveling_wave(), cfg).map(|r| r.report)
}

/// Like [`run_propagation`], also returning the fields at `t_end`.
pub fn run_propagation_with_state<S: AsTravelingWave + ?Sized>(
    sol: &S,
    cfg: &SpectralConfig,
) -> Result<(PropagationReport, FieldState)> {
    propagate(&sol.traveling_wave(), cfg).map(|r| (r.report, r.last))
}

/// Self-convergence of the time integrator under repeated halving of `dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtConvergence {
    pub dts: Vec<f64>,
    /// `max |U_dt − U_{dt/2}|` at `t_end` for each consecutive pair.
    pub differences: Vec<f64>,
    /// `log₂` of consecutive difference ratios.
    pub slopes: Vec<f64>,
    /// L∞ errors against the exact solution at each `dt`.
    pub errors: Vec<f64>,
}

impl DtConvergence {
    pub fn slope(&self) -> f64 {
        self.slopes.last().copied().unwrap_or(f64::NAN)
    }
}

/// Runs `cfg` at `dt, dt/2, …, dt/2^(levels−1)` in parallel and measures the time-stepping order.
pub fn dt_convergence<S: AsTravelingWave + Sync + ?Sized>(
    sol: &S,
    cfg: &SpectralConfig,
    levels: usize,
) -> Result<DtConvergence> {
    if levels < 3 {
        return Err(Error::Config(format!(
            "dt convergence needs at least 3 levels, got {levels}"
        )));
    }
    let dts: Vec<f64> = (0..levels).map(|i| cfg.dt / f64::from(1u32 << i)).collect();
    let runs: Vec<(PropagationReport, FieldState)> = dts
        .par_iter()
        .map(|&dt| {
            let cfg = SpectralConfig {
                dt,
                outputs: 1,
                ..*cfg
            };
            run_propagation_with_state(sol, &cfg)
        })
        .collect::<Result<_>>()?;
    let differences: Vec<f64> = runs
        .windows(2)
        .map(|p| {
            let du = p[0]
                .1
                .u
                .iter()
                .zip(&p[1].1.u)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let dv = p[0]
                .1
                .v
                .iter()
                .zip(&p[1].1.v)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            du.max(dv)
        })
        .collect();
    let slopes = differences
        .windows(2)
        .map(|d| (d[0] / d[1]).log2())
        .collect();
    let errors = runs
        .iter()
        .map(|r| r.0.linf_error_u.max(r.0.linf_error_v))
        .collect();
    Ok(DtConvergence {
        dts,
        differences,
        slopes,
        errors,
    })
}
