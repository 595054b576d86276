//! Residual and convergence checks on constructed solutions.
//!
//! Every check is deterministic and returns a report rather than an error
//! when the check itself fails; errors are reserved for inputs on which a
//! check cannot be run at all.

use std::env;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::Modulus;
use crate::error::{Error, Result};
use crate::model::{
    coefficient_set, ode_residual_terms, pde_residuals, PhysicalParams, SampleGrid, SystemKind,
    WaveParams,
};
use crate::solutions::{
    cnoidal_params, evaluate_profiles, ratio_law, solitary_limit, AsTravelingWave, RSign,
    SolitaryBranch, TravelingWave,
};

/// Environment variable holding tolerance overrides.
pub const TOLERANCE_ENV: &str = "CNOIDAL_TOL";

/// Sweep used by [`verify_limit`].
pub const LIMIT_SWEEP: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// Pass/fail thresholds of the check battery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub coefficients: f64,
    pub ode: f64,
    pub pde: f64,
    pub ratio: f64,
    pub pde_slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            coefficients: 1e-9,
            ode: 1e-8,
            pde: 1e-5,
            ratio: 1e-12,
            pde_slope: 3.5,
        }
    }
}

impl Tolerances {
    /// Applies an override string: either one number for every residual
    /// tolerance, or comma-separated `key=value` pairs with keys
    /// `coefficients`, `ode`, `pde`, `ratio`, `pde_slope`.
    pub fn apply_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(all) = spec.parse::<f64>() {
            check_tolerance("tolerance", all)?;
            self.coefficients = all;
            self.ode = all;
            self.pde = all;
            self.ratio = all;
            return Ok(self);
        }
        for pair in spec.split(',') {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                Error::Config(format!("tolerance override `{pair}` is not key=value"))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Config(format!("tolerance `{}` is not a number", value.trim()))
            })?;
            check_tolerance(key.trim(), value)?;
            match key.trim() {
                "coefficients" | "coeff" => self.coefficients = value,
                "ode" => self.ode = value,
                "pde" => self.pde = value,
                "ratio" => self.ratio = value,
                "pde_slope" | "slope" => self.pde_slope = value,
                other => return Err(Error::Config(format!("unknown tolerance key `{other}`"))),
            }
        }
        Ok(self)
    }

    /// Defaults with the overrides from the environment applied.
    pub fn from_env() -> Result<Self> {
        match env::var(TOLERANCE_ENV) {
            Ok(spec) => Self::default().apply_overrides(&spec),
            Err(env::VarError::NotPresent) => Ok(Self::default()),
            Err(e) => Err(Error::Config(format!("{TOLERANCE_ENV}: {e}"))),
        }
    }
}

fn check_tolerance(key: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "tolerance {key} must be positive and finite, got {value}"
        )))
    }
}

/// Outcome of one residual check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub passed: bool,
    pub max_abs: f64,
    pub rms: f64,
    pub tolerance: f64,
    /// `ξ` of the worst sample, or `10·j + q` for a coefficient check.
    pub worst_location: f64,
    #[serde(skip)]
    pub grid_size: usize,
}

impl ResidualReport {
    fn from_samples(
        check: &str,
        samples: impl IntoIterator<Item = (f64, f64)>,
        tolerance: f64,
    ) -> Self {
        let mut max_abs = 0.0_f64;
        let mut worst_location = 0.0;
        let mut sum_sq = 0.0;
        let mut n = 0usize;
        let mut finite = true;
        for (loc, r) in samples {
            let r = r.abs();
            finite &= r.is_finite();
            if !max_abs.is_nan() && (n == 0 || r > max_abs || r.is_nan()) {
                max_abs = r;
                worst_location = loc;
            }
            sum_sq += r * r;
            n += 1;
        }
        let rms = if n == 0 {
            0.0
        } else {
            (sum_sq / n as f64).sqrt()
        };
        Self {
            check: check.to_string(),
            passed: finite && max_abs <= tolerance,
            max_abs,
            rms,
            tolerance,
            worst_location,
            grid_size: n,
        }
    }
}

/// All thirteen `k_{j,q}` scaled by their largest term.
pub fn verify_coefficients<S: AsTravelingWave + ?Sized>(sol: &S, tolerance: f64) -> ResidualReport {
    let tw = sol.traveling_wave();
    let set = coefficient_set(tw.kind, &tw.phys, &tw.prof, &tw.wave);
    ResidualReport::from_samples(
        "coefficients",
        set.iter()
            .map(|((j, q), e)| (f64::from(10 * j + q), e.scaled())),
        tolerance,
    )
}

/// Equispaced `ξ` samples over the verification window of `sol`.
pub fn verification_window<S: AsTravelingWave + ?Sized>(sol: &S, n_points: usize) -> Vec<f64> {
    let (lo, hi) = sol.traveling_wave().window();
    let n = n_points.max(2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Scaled ODE residuals at `n_points` equispaced points over one period
/// (or `±10/λ` for a solitary profile).
pub fn verify_ode<S: AsTravelingWave + ?Sized>(
    sol: &S,
    n_points: usize,
    tolerance: f64,
) -> Result<ResidualReport> {
    if n_points < 3 {
        return Err(Error::Config(format!(
            "verify_ode needs at least 3 points, got {n_points}"
        )));
    }
    let tw = sol.traveling_wave();
    let mut samples = Vec::with_capacity(n_points);
    for xi in verification_window(&tw, n_points) {
        let terms = ode_residual_terms(tw.kind, &tw.phys, &tw.prof, &tw.wave, xi)?;
        let worst = terms.iter().map(|e| e.scaled().abs()).fold(0.0, f64::max);
        samples.push((xi, worst));
    }
    let mut report = ResidualReport::from_samples("ode", samples, tolerance);
    report.grid_size = n_points;
    Ok(report)
}

/// Absolute finite-difference PDE residuals together with their order of convergence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeReport {
    #[serde(flatten)]
    pub residual: ResidualReport,
    /// `log₂` of the residual ratio between step `slope_h` and `slope_h/2`.
    pub slope: f64,
    pub slope_h: f64,
    pub min_slope: f64,
}

impl PdeReport {
    pub fn passed(&self) -> bool {
        self.residual.passed && self.slope >= self.min_slope
    }
}

/// Exact fields about `(x₀, t₀)` as functions of the offsets `(x − x₀, t − t₀)`.
///
/// The phase at the centre is factored out so that neighbouring stencil
/// samples differ only through the small offsets.
fn local_fields(
    tw: &TravelingWave,
    xi0: f64,
    t0: f64,
) -> (
    impl Fn(f64, f64) -> Complex64 + '_,
    impl Fn(f64, f64) -> f64 + '_,
) {
    let WaveParams {
        shift,
        omega,
        sigma,
        ..
    } = tw.wave;
    let carrier = Complex64::from_polar(1.0, omega * t0 + shift * xi0);
    let u = move |dx: f64, dt: f64| {
        let dxi = dx - sigma * dt;
        let f = evaluate_profiles(tw, xi0 + dxi)
            .map(|p| p.0)
            .unwrap_or(f64::NAN);
        carrier * Complex64::from_polar(1.0, omega * dt + shift * dxi) * f
    };
    let v = move |dx: f64, dt: f64| {
        evaluate_profiles(tw, xi0 + dx - sigma * dt)
            .map(|p| p.1)
            .unwrap_or(f64::NAN)
    };
    (u, v)
}

fn max_pde_residual<S: AsTravelingWave + ?Sized>(
    sol: &S,
    grid: &SampleGrid,
    h: f64,
) -> Result<Vec<(f64, f64)>> {
    let tw = sol.traveling_wave();
    grid.xi
        .iter()
        .map(|&xi| {
            let (u, v) = local_fields(&tw, xi, grid.t);
            let r = pde_residuals(tw.kind, &tw.phys, &u, &v, 0.0, 0.0, h)?;
            Ok((xi, r.ru.norm().max(r.rv.abs())))
        })
        .collect()
}

/// Step at which the truncation error dominates round-off for `sol`:
/// a fifth of the shortest length scale among `1/λ`, `1/|B|` and `1/|ω|`.
pub fn slope_step<S: AsTravelingWave + ?Sized>(sol: &S) -> f64 {
    let w = sol.traveling_wave().wave;
    let rate = [
        w.lambda,
        w.shift.abs(),
        w.omega.abs(),
        w.sigma.abs() * w.lambda,
        1.0,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    0.2 / rate
}

/// PDE residuals at step `h`, plus the order of convergence measured by
/// halving [`slope_step`].
pub fn verify_pde<S: AsTravelingWave + ?Sized>(
    sol: &S,
    grid: &SampleGrid,
    h: f64,
    tol: &Tolerances,
) -> Result<PdeReport> {
    let samples = max_pde_residual(sol, grid, h)?;
    let mut residual = ResidualReport::from_samples("pde", samples, tol.pde);
    residual.grid_size = grid.len();
    let hs = slope_step(sol);
    let coarse = max_of(&max_pde_residual(sol, grid, hs)?);
    let fine = max_of(&max_pde_residual(sol, grid, hs / 2.0)?);
    let slope = if coarse == 0.0 && fine == 0.0 {
        f64::INFINITY
    } else {
        (coarse / fine).log2()
    };
    Ok(PdeReport {
        residual,
        slope,
        slope_h: hs,
        min_slope: tol.pde_slope,
    })
}

fn max_of(samples: &[(f64, f64)]) -> f64 {
    samples.iter().map(|s| s.1).fold(0.0, f64::max)
}

/// `|h₂/d₂ − ratio law|`.
pub fn verify_ratio<S: AsTravelingWave + ?Sized>(
    sol: &S,
    tolerance: f64,
) -> Result<ResidualReport> {
    let tw = sol.traveling_wave();
    if tw.prof.d2 == 0.0 {
        return Err(Error::Degenerate(format!(
            "{}: d2 = 0, ratio h2/d2 is undefined",
            tw.kind
        )));
    }
    let want = ratio_law(tw.kind, &tw.phys, tw.wave.sigma);
    let got = tw.prof.h2 / tw.prof.d2;
    let mut report = ResidualReport::from_samples("ratio", [(0.0, got - want)], tolerance);
    report.grid_size = 1;
    Ok(report)
}

/// Approach of a cnoidal family to its solitary limit as `m → 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: SystemKind,
    pub sign: RSign,
    pub m_values: Vec<f64>,
    /// Largest coefficient gap at each `m`, relative to the largest limit coefficient.
    pub gaps: Vec<f64>,
    /// `sup_ξ |f_m − f_lim| + sup_ξ |g_m − g_lim|` over `ξ ∈ [−5/λ, 5/λ]`.
    pub profile_gaps: Vec<f64>,
    /// Largest `|ω_m − ω_lim|` across the sweep.
    pub omega_gap: f64,
    /// Least-squares slope of `log gap` against `log(1 − m)`.
    pub slope: f64,
}

impl ConvergenceReport {
    pub fn monotone(&self) -> bool {
        self.gaps.windows(2).all(|w| w[1] < w[0])
            && self.profile_gaps.windows(2).all(|w| w[1] < w[0])
    }

    pub fn final_gap(&self) -> f64 {
        self.gaps.last().copied().unwrap_or(f64::NAN)
    }
}

/// Sweeps `m` toward 1 and compares the cnoidal coefficients with the solitary branch of `sign`.
pub fn verify_limit(
    kind: SystemKind,
    phys: &PhysicalParams,
    sigma: f64,
    sign: RSign,
) -> Result<ConvergenceReport> {
    let lim = solitary_limit(kind, phys, sigma, SolitaryBranch::from(sign))?;
    let lim_tw = lim.traveling_wave();
    let lim_vals = [
        lim.shift, lim.omega, lim.lambda, lim.d0, lim.d2, lim.h0, lim.h2,
    ];
    let reference = lim_vals.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut gaps = Vec::new();
    let mut profile_gaps = Vec::new();
    let mut omega_gap = 0.0_f64;
    for &k in &LIMIT_SWEEP {
        let sol = cnoidal_params(kind, phys, sigma, Modulus::new(k)?, sign)?;
        let p = sol.prof;
        let vals = [
            sol.wave.shift,
            sol.wave.omega,
            sol.wave.lambda,
            p.d0,
            p.d2,
            p.h0,
            p.h2,
        ];
        let gap = vals
            .iter()
            .zip(&lim_vals)
            .map(|(x, y)| (x - y).abs() / y.abs().max(reference))
            .fold(0.0, f64::max);
        gaps.push(gap);
        omega_gap = omega_gap.max((sol.wave.omega - lim.omega).abs());

        let half = 5.0 / lim.lambda;
        let mut sup_f = 0.0_f64;
        let mut sup_g = 0.0_f64;
        for i in 0..=400 {
            let xi = -half + 2.0 * half * f64::from(i) / 400.0;
            let (fm, gm) = evaluate_profiles(&sol, xi)?;
            let (fl, gl) = evaluate_profiles(&lim_tw, xi)?;
            sup_f = sup_f.max((fm - fl).abs());
            sup_g = sup_g.max((gm - gl).abs());
        }
        profile_gaps.push(sup_f + sup_g);
    }
    let xs: Vec<f64> = LIMIT_SWEEP.iter().map(|k| (1.0 - k).ln()).collect();
    let ys: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    Ok(ConvergenceReport {
        kind,
        sign,
        m_values: LIMIT_SWEEP.to_vec(),
        gaps,
        profile_gaps,
        omega_gap,
        slope: least_squares_slope(&xs, &ys),
    })
}

/// Slope of the least-squares line through `(xs, ys)`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PhysicalParams, ProfileCoeffs};
    use crate::solutions::{cnoidal_params, figure_set, semi_trivial, FreeParams};

    fn figure(kind: SystemKind) -> crate::solutions::CnoidalSolution {
        let (p, s) = figure_set(kind);
        cnoidal_params(kind, &p, s, Modulus::new(0.5).unwrap(), RSign::Plus).unwrap()
    }

    #[test]
    fn tolerance_overrides() {
        let t = Tolerances::default().apply_overrides("1e-6").unwrap();
        assert_eq!(
            (t.coefficients, t.ode, t.pde, t.ratio),
            (1e-6, 1e-6, 1e-6, 1e-6)
        );
        let t = Tolerances::default()
            .apply_overrides("ode=1e-7, pde_slope=3")
            .unwrap();
        assert_eq!(t.ode, 1e-7);
        assert_eq!(t.pde_slope, 3.0);
        assert_eq!(t.coefficients, 1e-9);
        assert!(Tolerances::default().apply_overrides("bogus=1").is_err());
        assert!(Tolerances::default().apply_overrides("ode=-1").is_err());
        assert!(Tolerances::default().apply_overrides("ode").is_err());
    }

    #[test]
    fn coefficient_check_passes_and_localizes_perturbation() {
        let mut sol = figure(SystemKind::SchrodingerKdVKdV);
        let rep = verify_coefficients(&sol, 1e-9);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.grid_size, 13);
        sol.prof.d2 += 1e-3;
        let rep = verify_coefficients(&sol, 1e-9);
        assert!(!rep.passed);
        assert_eq!((rep.worst_location / 10.0).floor(), 3.0);
    }

    #[test]
    fn zero_profile_passes_trivially() {
        let sol = figure(SystemKind::SchrodingerBBMBBM);
        let zero = TravelingWave {
            prof: ProfileCoeffs::default(),
            ..sol.traveling_wave()
        };
        assert!(verify_coefficients(&zero, 1e-9).passed);
        assert!(verify_ode(&zero, 17, 1e-8).unwrap().passed);
        assert!(matches!(
            verify_ratio(&zero, 1e-12),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn ode_check_detects_perturbation() {
        let mut sol = figure(SystemKind::SchrodingerKdVBBM);
        assert!(verify_ode(&sol, 257, 1e-8).unwrap().passed);
        sol.prof.h0 += 1e-3;
        assert!(!verify_ode(&sol, 257, 1e-8).unwrap().passed);
        assert!(verify_ode(&sol, 2, 1e-8).is_err());
    }

    #[test]
    fn ratio_check_on_figure_sets() {
        for kind in SystemKind::ALL {
            assert!(verify_ratio(&figure(kind), 1e-12).unwrap().passed, "{kind}");
        }
    }

    #[test]
    fn ratio_is_sigma_free_for_kdv_kdv_only() {
        let p = PhysicalParams {
            mu0: 1.0,
            mu1: 0.25,
            a: 1.0,
            b: -1.0,
            c: 1.5,
        };
        assert_eq!(
            ratio_law(SystemKind::SchrodingerKdVKdV, &p, 1.0),
            ratio_law(SystemKind::SchrodingerKdVKdV, &p, 2.0)
        );
        assert_ne!(
            ratio_law(SystemKind::SchrodingerBBMKdV, &p, 0.5),
            ratio_law(SystemKind::SchrodingerBBMKdV, &p, 1.0)
        );
    }

    #[test]
    fn pde_check_constant_state() {
        let (p, _) = figure_set(SystemKind::SchrodingerKdVKdV);
        let sol =
            semi_trivial(SystemKind::SchrodingerKdVKdV, &p, &FreeParams::default(), 1).unwrap();
        let grid = SampleGrid::new(vec![0.0, 0.5, 1.0], 0.3, sol.wave.sigma).unwrap();
        let rep = verify_pde(&sol, &grid, 1e-3, &Tolerances::default()).unwrap();
        assert_eq!(rep.residual.max_abs, 0.0);
        assert!(rep.passed());
        assert!(matches!(
            verify_pde(&sol, &grid, 0.0, &Tolerances::default()),
            Err(Error::Stencil(_))
        ));
    }

    #[test]
    fn pde_check_figure_solution() {
        let sol = figure(SystemKind::SchrodingerKdVKdV);
        let x: Vec<f64> = (0..9).map(|i| f64::from(i) * 1.7).collect();
        let grid = SampleGrid::new(x, 0.4, sol.wave.sigma).unwrap();
        let rep = verify_pde(&sol, &grid, 1e-3, &Tolerances::default()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!((rep.slope - 4.0).abs() < 0.5, "{}", rep.slope);
    }

    #[test]
    fn limit_gaps_decrease() {
        let (p, s) = figure_set(SystemKind::SchrodingerKdVKdV);
        let rep = verify_limit(SystemKind::SchrodingerKdVKdV, &p, s, RSign::Plus).unwrap();
        assert!(rep.monotone(), "{rep:?}");
        assert_eq!(rep.omega_gap, 0.0);
        assert!(rep.final_gap() <= 1e-3);
        assert!(verify_limit(SystemKind::SchrodingerKdVKdV, &p, s, RSign::Minus).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let sol = figure(SystemKind::SchrodingerBBMKdV);
        assert_eq!(
            verify_ode(&sol, 101, 1e-8).unwrap(),
            verify_ode(&sol, 101, 1e-8).unwrap()
        );
    }

    #[test]
    fn least_squares_on_a_line() {
        assert!((least_squares_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-15);
    }
}
