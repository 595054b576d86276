//! Closed-form traveling waves: the cnoidal families (both `R` branches),
//! their solitary limits, the synchronization conditions and the catalog of
//! trivial and semi-trivial solutions.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{complete_k, jacobi_triple, Modulus};
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, ProfileCoeffs, SystemKind, WaveParams};

/// Relative size below which a closed-form denominator counts as singular.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Tolerance of the `h₂/d₂` consistency check run by the constructors.
pub const RATIO_TOLERANCE: f64 = 1e-12;

/// Branch of `R = ±√(m⁴ − m² + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl RSign {
    pub const BOTH: [RSign; 2] = [RSign::Plus, RSign::Minus];

    pub fn value(self) -> f64 {
        match self {
            RSign::Plus => 1.0,
            RSign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == 1.0 {
            Ok(RSign::Plus)
        } else if v == -1.0 {
            Ok(RSign::Minus)
        } else {
            Err(Error::Config(format!("R sign must be +1 or -1, got {v}")))
        }
    }
}

impl fmt::Display for RSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RSign::Plus => "+",
            RSign::Minus => "-",
        })
    }
}

/// `m = R = 1` (tilde coefficients) or `m = −R = 1` (bar coefficients).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolitaryBranch {
    #[serde(rename = "mR1")]
    MR1,
    #[serde(rename = "mNegR1")]
    MNegR1,
}

impl SolitaryBranch {
    pub fn sign(self) -> RSign {
        match self {
            SolitaryBranch::MR1 => RSign::Plus,
            SolitaryBranch::MNegR1 => RSign::Minus,
        }
    }
}

impl From<RSign> for SolitaryBranch {
    fn from(s: RSign) -> Self {
        match s {
            RSign::Plus => SolitaryBranch::MR1,
            RSign::Minus => SolitaryBranch::MNegR1,
        }
    }
}

/// A fully specified traveling wave of one system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelingWave {
    pub kind: SystemKind,
    pub phys: PhysicalParams,
    pub wave: WaveParams,
    pub prof: ProfileCoeffs,
}

impl TravelingWave {
    /// Fundamental period of `(f, g)` in `ξ`, or `None` for a solitary (`m = 1`) profile.
    pub fn period(&self) -> Option<f64> {
        if self.wave.m.value() >= 1.0 {
            return None;
        }
        let k = complete_k(self.wave.m).ok()?;
        let quarter_periods = if self.prof.d1 != 0.0 || self.prof.h1 != 0.0 {
            4.0
        } else {
            2.0
        };
        Some(quarter_periods * k / self.wave.lambda)
    }

    /// `ξ` window used for sampling: one period, or `±10/λ` for a solitary profile.
    pub fn window(&self) -> (f64, f64) {
        match self.period() {
            Some(p) => (0.0, p),
            None => (-10.0 / self.wave.lambda, 10.0 / self.wave.lambda),
        }
    }
}

/// Anything that can be viewed as a [`TravelingWave`].
pub trait AsTravelingWave {
    fn traveling_wave(&self) -> TravelingWave;
}

impl AsTravelingWave for TravelingWave {
    fn traveling_wave(&self) -> TravelingWave {
        *self
    }
}

/// One member of a cnoidal family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CnoidalSolution {
    pub kind: SystemKind,
    pub phys: PhysicalParams,
    pub wave: WaveParams,
    pub prof: ProfileCoeffs,
    #[serde(rename = "R")]
    pub r: f64,
}

impl CnoidalSolution {
    pub fn sign(&self) -> RSign {
        if self.r >= 0.0 {
            RSign::Plus
        } else {
            RSign::Minus
        }
    }
}

impl AsTravelingWave for CnoidalSolution {
    fn traveling_wave(&self) -> TravelingWave {
        TravelingWave {
            kind: self.kind,
            phys: self.phys,
            wave: self.wave,
            prof: self.prof,
        }
    }
}

/// Solitary limit: `f = d₀ + d₂ sech²(λξ)`, `g = h₀ + h₂ sech²(λξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitarySolution {
    pub kind: SystemKind,
    pub branch: SolitaryBranch,
    pub phys: PhysicalParams,
    #[serde(rename = "B")]
    pub shift: f64,
    pub omega: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub d0: f64,
    pub d2: f64,
    pub h0: f64,
    pub h2: f64,
}

impl AsTravelingWave for SolitarySolution {
    fn traveling_wave(&self) -> TravelingWave {
        TravelingWave {
            kind: self.kind,
            phys: self.phys,
            wave: WaveParams {
                shift: self.shift,
                omega: self.omega,
                sigma: self.sigma,
                lambda: self.lambda,
                m: Modulus::new(1.0).expect("unit modulus"),
            },
            prof: ProfileCoeffs {
                d0: self.d0,
                d1: 0.0,
                d2: self.d2,
                h0: self.h0,
                h1: 0.0,
                h2: self.h2,
            },
        }
    }
}

/// One entry of the trivial/semi-trivial catalog (families numbered from 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiTrivialSolution {
    pub kind: SystemKind,
    pub family: usize,
    pub free: BTreeMap<String, f64>,
    pub derived: BTreeMap<String, f64>,
    pub phys: PhysicalParams,
    pub wave: WaveParams,
    pub prof: ProfileCoeffs,
}

impl AsTravelingWave for SemiTrivialSolution {
    fn traveling_wave(&self) -> TravelingWave {
        TravelingWave {
            kind: self.kind,
            phys: self.phys,
            wave: self.wave,
            prof: self.prof,
        }
    }
}

/// `sign·√(m⁴ − m² + 1)`.
pub fn big_r(m: Modulus, sign: RSign) -> f64 {
    let k2 = m.parameter();
    sign.value() * (k2 * k2 - k2 + 1.0).sqrt()
}

/// Outcome of the per-system admissibility test for a wave speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub kind: SystemKind,
    pub sigma: f64,
    pub valid: bool,
    /// The inequality that must hold, in words.
    pub constraint: String,
    /// The `R` branch on which `λ² > 0`; `None` when `λ²` vanishes on both.
    pub feasible_sign: Option<RSign>,
}

/// Checks the wave-speed range of `kind` and which `R` branch gives `λ² > 0`.
pub fn validity(kind: SystemKind, phys: &PhysicalParams, sigma: f64) -> ValidityReport {
    let PhysicalParams { a, c, .. } = *phys;
    let (valid, constraint) = match kind {
        SystemKind::SchrodingerKdVKdV => (
            2.0 * c > a && sigma > 0.0,
            "2c > a0 and sigma > 0".to_string(),
        ),
        SystemKind::SchrodingerBBMBBM => (
            2.0 * c > a && sigma > 0.0,
            "2c > a1 and sigma > 0".to_string(),
        ),
        SystemKind::SchrodingerKdVBBM => (
            sigma > a / (2.0 * c),
            format!("sigma > a0/(2c) = {}", a / (2.0 * c)),
        ),
        SystemKind::SchrodingerBBMKdV => (
            sigma > 0.0 && sigma < 2.0 * c / a,
            format!("0 < sigma < 2c/a1 = {}", 2.0 * c / a),
        ),
    };
    let feasible_sign = if valid && phys.validate().is_ok() {
        let x = lambda_sq_times_r(kind, phys, sigma);
        if x > 0.0 {
            Some(RSign::Plus)
        } else if x < 0.0 {
            Some(RSign::Minus)
        } else {
            None
        }
    } else {
        None
    };
    ValidityReport {
        kind,
        sigma,
        valid: valid && sigma.is_finite(),
        constraint,
        feasible_sign,
    }
}

/// `h₂/d₂` of every cnoidal and solitary member of the family.
pub fn ratio_law(kind: SystemKind, phys: &PhysicalParams, sigma: f64) -> f64 {
    let PhysicalParams { a, c, .. } = *phys;
    match kind {
        SystemKind::SchrodingerKdVKdV | SystemKind::SchrodingerBBMBBM => (a / (2.0 * c - a)).sqrt(),
        SystemKind::SchrodingerKdVBBM => (a / (2.0 * c * sigma - a)).sqrt(),
        SystemKind::SchrodingerBBMKdV => (a * sigma / (2.0 * c - a * sigma)).sqrt(),
    }
}

/// `N` of the KdV-dispersed families.
fn n_kdv(p: &PhysicalParams) -> f64 {
    let PhysicalParams { mu0, mu1, a, b, .. } = *p;
    3.0 * a * a * mu1 * mu1 - 2.0 * a * b * mu1 - 4.0 * a * mu0 - b * b + 4.0 * a
}

/// `Q` of the BBM-dispersed families.
#[rustfmt::skip]
fn q_bbm(p: &PhysicalParams, s: f64) -> f64 {
    let PhysicalParams { mu0, mu1, a, b, .. } = *p;
    let (a2, a3, mu1_2) = (a * a, a * a * a, mu1 * mu1);
    4.0 * a3 * mu1_2 * mu1_2 * s - 4.0 * a2 * b * mu1_2 * mu1 * s - a2 * mu0 * mu0 * mu1_2
        - 4.0 * a2 * mu0 * mu1_2 * s + 8.0 * a2 * mu1_2 * s + 2.0 * a * b * mu0 * mu1 - 4.0 * a * b * mu1 * s
        - 4.0 * a * mu0 * s + 4.0 * a * s - b * b
}

fn e_bbm(p: &PhysicalParams) -> f64 {
    p.a * p.mu1 * p.mu1 + 1.0
}

/// `B` and `ω` of the cnoidal and solitary families.
fn shift_and_omega(kind: SystemKind, p: &PhysicalParams, s: f64) -> (f64, f64) {
    let PhysicalParams { mu0, mu1, a, b, .. } = *p;
    if kind.u_is_kdv() {
        (
            (a * mu1 - b) / (2.0 * a),
            -(a * mu1 * mu1 - mu1 * b - mu0 + s) * mu1,
        )
    } else {
        let e = e_bbm(p);
        (
            (a * mu0 * mu1 - b) / (2.0 * a * s * e),
            -(a * mu1 * mu1 * s - b * mu1 - mu0 + s) * mu1 / e,
        )
    }
}

/// The family's singular denominator (`a − c`, `a − cσ` or `aσ − c`) and its scale.
fn family_denominator(kind: SystemKind, p: &PhysicalParams, s: f64) -> (f64, f64, &'static str) {
    let PhysicalParams { a, c, .. } = *p;
    match kind {
        SystemKind::SchrodingerKdVKdV | SystemKind::SchrodingerBBMBBM => {
            (a - c, a.abs().max(c.abs()), "a - c")
        }
        SystemKind::SchrodingerKdVBBM => (a - c * s, a.abs().max((c * s).abs()), "a - c*sigma"),
        SystemKind::SchrodingerBBMKdV => (a * s - c, (a * s).abs().max(c.abs()), "a*sigma - c"),
    }
}

fn check_denominator(kind: SystemKind, p: &PhysicalParams, s: f64) -> Result<()> {
    let (den, scale, name) = family_denominator(kind, p, s);
    if den.abs() <= DEGENERACY_TOLERANCE * scale {
        return Err(Error::Numerical(format!(
            "{kind}: denominator {name} = {den:e} is numerically zero"
        )));
    }
    Ok(())
}

/// `λ²·R`, which is `m`-independent; its sign selects the feasible branch.
fn lambda_sq_times_r(kind: SystemKind, p: &PhysicalParams, s: f64) -> f64 {
    let PhysicalParams { a, c, .. } = *p;
    match kind {
        SystemKind::SchrodingerKdVKdV => n_kdv(p) / (16.0 * a * (a - c)),
        SystemKind::SchrodingerKdVBBM => n_kdv(p) / (16.0 * a * (a - c * s)),
        SystemKind::SchrodingerBBMBBM => {
            let e = e_bbm(p);
            q_bbm(p, s) / (-16.0 * a * s * s * (a - c) * e * e)
        }
        SystemKind::SchrodingerBBMKdV => {
            let e = e_bbm(p);
            q_bbm(p, s) / (16.0 * a * s * e * e * (a * s - c))
        }
    }
}

/// Raw closed-form values before feasibility checks.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ClosedForm {
    shift: f64,
    omega: f64,
    d0: f64,
    d2: f64,
    h0: f64,
    h2: f64,
    lambda_sq: f64,
}

#[rustfmt::skip]
fn cnoidal_closed_form(kind: SystemKind, p: &PhysicalParams, s: f64, m: Modulus, rr: f64) -> ClosedForm {
    let PhysicalParams { mu0, mu1, a, b, c } = *p;
    let m2 = m.parameter();
    let m4 = m2 * m2;
    let rr2 = rr * rr;
    let (a2, a3, a4) = (a * a, a * a * a, a * a * a * a);
    let b2 = b * b;
    let (mu0_2, mu1_2, mu1_3, mu1_4) = (mu0 * mu0, mu1 * mu1, mu1 * mu1 * mu1, mu1 * mu1 * mu1 * mu1);
    let (s2, s3) = (s * s, s * s * s);
    let (shift, omega) = shift_and_omega(kind, p, s);
    match kind {
        SystemKind::SchrodingerKdVKdV => {
            let n = n_kdv(p);
            let den = a - c;
            let sq = (2.0 * c - a).sqrt();
            ClosedForm {
                shift,
                omega,
                d0: (m4 - 2.0 * m2 * rr - m2 + rr + 1.0) * sq * n / (8.0 * a.sqrt() * rr2 * den),
                d2: 3.0 * sq * n * m2 / (8.0 * a.sqrt() * rr * den),
                h0: -1.0 / (8.0 * a * rr * den) * (6.0 * a3 * m2 * mu1_2 - 3.0 * a3 * mu1_2 * rr + 6.0 * a2 * c * mu1_2 * rr
                    - 3.0 * a3 * mu1_2 - 4.0 * a2 * b * m2 * mu1 + 2.0 * a2 * b * mu1 * rr - 4.0 * a * b * c * mu1 * rr
                    + 2.0 * a2 * b * mu1 - 8.0 * a2 * m2 * mu0 + 4.0 * a2 * mu0 * rr - 8.0 * a2 * rr * s - 2.0 * a * b2 * m2
                    + a * b2 * rr - 8.0 * a * c * mu0 * rr + 8.0 * a * c * rr * s - 2.0 * b2 * c * rr + 8.0 * a2 * m2
                    + 4.0 * a2 * mu0 + 4.0 * a2 * rr + a * b2 - 4.0 * a2),
                h2: 3.0 * n * m2 / (8.0 * rr * den),
                lambda_sq: n / (16.0 * a * rr * den),
            }
        }
        SystemKind::SchrodingerKdVBBM => {
            let n = n_kdv(p);
            let den = a - c * s;
            let sq = (2.0 * c * s - a).sqrt();
            ClosedForm {
                shift,
                omega,
                d0: (m4 - 2.0 * m2 * rr - m2 + rr + 1.0) * sq * n / (8.0 * a.sqrt() * rr2 * den),
                d2: 3.0 * sq * n * m2 / (8.0 * a.sqrt() * rr * den),
                h0: 1.0 / (8.0 * a * rr * (c * s - a)) * (6.0 * a2 * c * mu1_2 * rr * s + 6.0 * a3 * m2 * mu1_2
                    - 3.0 * a3 * mu1_2 * rr - 4.0 * a * b * c * mu1 * rr * s - 3.0 * a3 * mu1_2 - 4.0 * a2 * b * m2 * mu1
                    + 2.0 * a2 * b * mu1 * rr - 8.0 * a * c * mu0 * rr * s + 8.0 * a * c * rr * s2 - 2.0 * b2 * c * rr * s
                    + 2.0 * a2 * b * mu1 - 8.0 * a2 * m2 * mu0 + 4.0 * a2 * mu0 * rr - 8.0 * a2 * rr * s - 2.0 * a * b2 * m2
                    + a * b2 * rr + 8.0 * a2 * m2 + 4.0 * a2 * mu0 + 4.0 * a2 * rr + a * b2 - 4.0 * a2),
                h2: 3.0 * n * m2 / (8.0 * rr * den),
                lambda_sq: n / (16.0 * a * rr * den),
            }
        }
        SystemKind::SchrodingerBBMBBM => {
            let q = q_bbm(p, s);
            let e = e_bbm(p);
            let e2 = e * e;
            let sq = (a * (2.0 * c - a)).sqrt();
            ClosedForm {
                shift,
                omega,
                d0: sq * (m4 + 2.0 * m2 * rr - m2 - rr + 1.0) / (8.0 * a * rr2 * s * e2 * (a - c)) * q,
                d2: -3.0 * m2 * sq / (8.0 * a * rr * s * e2 * (a - c)) * q,
                h0: 1.0 / (8.0 * a * rr * s * e2 * (a - c)) * (8.0 * a4 * mu1_4 * rr * s2 - 8.0 * a3 * c * mu1_4 * rr * s2
                    + 8.0 * a4 * m2 * mu1_4 * s - 4.0 * a4 * mu1_4 * rr * s - 4.0 * a4 * mu1_4 * s - 8.0 * a3 * b * m2 * mu1_3 * s
                    - 4.0 * a3 * b * mu1_3 * rr * s + 8.0 * a2 * b * c * mu1_3 * rr * s + 4.0 * a3 * b * mu1_3 * s
                    - 2.0 * a3 * m2 * mu0_2 * mu1_2 - 8.0 * a3 * m2 * mu0 * mu1_2 * s - a3 * mu0_2 * mu1_2 * rr
                    - 4.0 * a3 * mu0 * mu1_2 * rr * s + 16.0 * a3 * mu1_2 * rr * s2 + 2.0 * a2 * c * mu0_2 * mu1_2 * rr
                    + 8.0 * a2 * c * mu0 * mu1_2 * rr * s - 16.0 * a2 * c * mu1_2 * rr * s2 + 16.0 * a3 * m2 * mu1_2 * s
                    + a3 * mu0_2 * mu1_2 + 4.0 * a3 * mu0 * mu1_2 * s - 8.0 * a3 * mu1_2 * rr * s - 8.0 * a3 * mu1_2 * s
                    + 4.0 * a2 * b * m2 * mu0 * mu1 - 8.0 * a2 * b * m2 * mu1 * s + 2.0 * a2 * b * mu0 * mu1 * rr
                    - 4.0 * a2 * b * mu1 * rr * s - 4.0 * a * b * c * mu0 * mu1 * rr + 8.0 * a * b * c * mu1 * rr * s
                    - 2.0 * a2 * b * mu0 * mu1 + 4.0 * a2 * b * mu1 * s - 8.0 * a2 * m2 * mu0 * s - 4.0 * a2 * mu0 * rr * s
                    + 8.0 * a2 * rr * s2 + 8.0 * a * c * mu0 * rr * s - 8.0 * a * c * rr * s2 + 8.0 * a2 * m2 * s
                    + 4.0 * a2 * mu0 * s - 4.0 * a2 * rr * s - 2.0 * a * b2 * m2 - a * b2 * rr + 2.0 * b2 * c * rr - 4.0 * a2 * s
                    + a * b2),
                h2: -3.0 * q * m2 / (8.0 * rr * s * e2 * (a - c)),
                lambda_sq: q / (-16.0 * a * rr * s2 * (a - c) * e2),
            }
        }
        SystemKind::SchrodingerBBMKdV => {
            let q = q_bbm(p, s);
            let e = e_bbm(p);
            let e2 = e * e;
            let sq = (2.0 * c - a * s).sqrt();
            let den = a * s - c;
            ClosedForm {
                shift,
                omega,
                d0: sq * (m4 - 2.0 * m2 * rr - m2 + rr + 1.0) / (8.0 * rr2 * (a * s).sqrt() * e2 * den) * q,
                d2: 3.0 * m2 * sq / (8.0 * rr * (a * s).sqrt() * e2 * den) * q,
                h0: -1.0 / (8.0 * a * rr * s * e2 * den) * (-8.0 * a4 * mu1_4 * rr * s3 + 8.0 * a4 * m2 * mu1_4 * s2
                    + 4.0 * a4 * mu1_4 * rr * s2 + 8.0 * a3 * c * mu1_4 * rr * s2 - 4.0 * a4 * mu1_4 * s2
                    - 8.0 * a3 * b * m2 * mu1_3 * s2 + 4.0 * a3 * b * mu1_3 * rr * s2 + 4.0 * a3 * b * mu1_3 * s2
                    - 2.0 * a3 * m2 * mu0_2 * mu1_2 * s - 8.0 * a3 * m2 * mu0 * mu1_2 * s2 + a3 * mu0_2 * mu1_2 * s * rr
                    + 4.0 * a3 * mu0 * mu1_2 * rr * s2 - 16.0 * a3 * mu1_2 * rr * s3 - 8.0 * a2 * b * c * mu1_3 * rr * s
                    + 16.0 * a3 * m2 * mu1_2 * s2 + a3 * mu0_2 * mu1_2 * s + 4.0 * a3 * mu0 * mu1_2 * s2
                    + 8.0 * a3 * mu1_2 * rr * s2 - 2.0 * a2 * c * mu0_2 * mu1_2 * rr - 8.0 * a2 * c * mu0 * mu1_2 * rr * s
                    + 16.0 * a2 * c * mu1_2 * rr * s2 - 8.0 * a3 * mu1_2 * s2 + 4.0 * a2 * b * m2 * mu0 * mu1 * s
                    - 8.0 * a2 * b * m2 * mu1 * s2 - 2.0 * a2 * b * mu0 * mu1 * rr * s + 4.0 * a2 * b * mu1 * rr * s2
                    - 2.0 * a2 * b * mu0 * mu1 * s + 4.0 * a2 * b * mu1 * s2 - 8.0 * a2 * m2 * mu0 * s2 + 4.0 * a2 * mu0 * rr * s2
                    - 8.0 * a2 * rr * s3 + 4.0 * a * b * c * mu0 * mu1 * rr - 8.0 * a * b * c * mu1 * rr * s + 8.0 * a2 * m2 * s2
                    + 4.0 * a2 * mu0 * s2 + 4.0 * a2 * rr * s2 - 2.0 * a * b2 * m2 * s + a * b2 * rr * s
                    - 8.0 * a * c * mu0 * rr * s + 8.0 * a * c * rr * s2 - 4.0 * a2 * s2 + a * b2 * s - 2.0 * b2 * c * rr),
                h2: 3.0 * q * m2 / (8.0 * rr * e2 * den),
                lambda_sq: q / (16.0 * a * rr * s * e2 * den),
            }
        }
    }
}

fn check_inputs(kind: SystemKind, phys: &PhysicalParams, sigma: f64) -> Result<()> {
    phys.validate()?;
    if !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma must be finite, got {sigma}")));
    }
    let report = validity(kind, phys, sigma);
    if !report.valid {
        return Err(Error::Domain(format!(
            "{kind}: wave speed sigma = {sigma} violates {}",
            report.constraint
        )));
    }
    check_denominator(kind, phys, sigma)
}

fn check_ratio(
    kind: SystemKind,
    phys: &PhysicalParams,
    sigma: f64,
    d2: f64,
    h2: f64,
) -> Result<()> {
    if d2 == 0.0 {
        return Ok(());
    }
    let want = ratio_law(kind, phys, sigma);
    let got = h2 / d2;
    if (got - want).abs() > RATIO_TOLERANCE * want.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "{kind}: h2/d2 = {got} disagrees with the ratio law {want}"
        )));
    }
    Ok(())
}

/// Closed-form cnoidal solution of `kind` at wave speed `sigma`, modulus `m` and branch `sign`.
pub fn cnoidal_params(
    kind: SystemKind,
    phys: &PhysicalParams,
    sigma: f64,
    m: Modulus,
    sign: RSign,
) -> Result<CnoidalSolution> {
    check_inputs(kind, phys, sigma)?;
    let r = big_r(m, sign);
    let cf = cnoidal_closed_form(kind, phys, sigma, m, r);
    if !(cf.lambda_sq > 0.0) {
        return Err(Error::Domain(format!(
            "{kind}: lambda^2 = {:e} is not positive on the R{sign} branch (R = {r})",
            cf.lambda_sq
        )));
    }
    check_ratio(kind, phys, sigma, cf.d2, cf.h2)?;
    Ok(CnoidalSolution {
        kind,
        phys: *phys,
        wave: WaveParams {
            shift: cf.shift,
            omega: cf.omega,
            sigma,
            lambda: cf.lambda_sq.sqrt(),
            m,
        },
        prof: ProfileCoeffs {
            d0: cf.d0,
            d1: 0.0,
            d2: cf.d2,
            h0: cf.h0,
            h1: 0.0,
            h2: cf.h2,
        },
        r,
    })
}

/// `λ²` of the cnoidal family without the positivity check.
pub fn cnoidal_lambda_sq(
    kind: SystemKind,
    phys: &PhysicalParams,
    sigma: f64,
    m: Modulus,
    sign: RSign,
) -> f64 {
    lambda_sq_times_r(kind, phys, sigma) / big_r(m, sign)
}

#[rustfmt::skip]
fn solitary_closed_form(kind: SystemKind, p: &PhysicalParams, s: f64, branch: SolitaryBranch) -> ClosedForm {
    let PhysicalParams { mu0, mu1, a, b, c } = *p;
    let (a2, a3, a4) = (a * a, a * a * a, a * a * a * a);
    let b2 = b * b;
    let (mu0_2, mu1_2, mu1_3, mu1_4) = (mu0 * mu0, mu1 * mu1, mu1 * mu1 * mu1, mu1 * mu1 * mu1 * mu1);
    let (s2, s3) = (s * s, s * s * s);
    let (shift, omega) = shift_and_omega(kind, p, s);
    let tilde = branch == SolitaryBranch::MR1;
    let base = ClosedForm { shift, omega, d0: 0.0, d2: 0.0, h0: 0.0, h2: 0.0, lambda_sq: 0.0 };
    match kind {
        SystemKind::SchrodingerKdVKdV => {
            let n = n_kdv(p);
            let sq = (2.0 * c - a).sqrt();
            if tilde {
                ClosedForm {
                    d0: 0.0,
                    h0: s - synchronized_sigma_kdv_kdv(p),
                    d2: 3.0 * sq * n / (8.0 * a.sqrt() * (a - c)),
                    h2: 3.0 * n / (8.0 * (a - c)),
                    lambda_sq: n / (16.0 * a * (a - c)),
                    ..base
                }
            } else {
                ClosedForm {
                    d0: sq * n / (4.0 * a.sqrt() * (a - c)),
                    h0: (3.0 * a3 * mu1_2 - 2.0 * a2 * b * mu1 - 4.0 * a2 * mu0 - a * b2 - 3.0 * a2 * c * mu1_2
                        + 2.0 * a * b * c * mu1 + 4.0 * a * c * mu0 + b2 * c + 4.0 * a * s * (a - c)) / (4.0 * a * (a - c)),
                    d2: -3.0 * sq * n / (8.0 * a.sqrt() * (a - c)),
                    h2: -3.0 * n / (8.0 * (a - c)),
                    lambda_sq: -n / (16.0 * a * (a - c)),
                    ..base
                }
            }
        }
        SystemKind::SchrodingerKdVBBM => {
            let n = n_kdv(p);
            let sq = (2.0 * c * s - a).sqrt();
            if tilde {
                ClosedForm {
                    d0: 0.0,
                    d2: 3.0 * sq * n / (8.0 * a.sqrt() * (a - c * s)),
                    h0: 1.0 / (8.0 * a * (c * s - a)) * (6.0 * a2 * c * mu1_2 * s - 4.0 * a * b * c * mu1 * s - 8.0 * a * c * mu0 * s
                        + 8.0 * a * c * s2 - 2.0 * b2 * c * s - 8.0 * a2 * s + 8.0 * a2),
                    h2: 3.0 * n / (8.0 * (a - c * s)),
                    lambda_sq: n / (16.0 * a * (a - c * s)),
                    ..base
                }
            } else {
                ClosedForm {
                    d0: sq * n / (4.0 * a.sqrt() * (a - c * s)),
                    d2: 3.0 * sq * n / (8.0 * a.sqrt() * (c * s - a)),
                    h0: 1.0 / (4.0 * a * (c * s - a)) * (3.0 * a2 * c * mu1_2 * s - 3.0 * a3 * mu1_2 - 2.0 * a * b * c * mu1 * s
                        + 2.0 * a2 * b * mu1 - 4.0 * a * c * mu0 * s + 4.0 * a * c * s2 - b2 * c * s + 4.0 * a2 * mu0 - 4.0 * a2 * s
                        + a * b2),
                    h2: 3.0 * n / (8.0 * (c * s - a)),
                    lambda_sq: n / (16.0 * a * (c * s - a)),
                    ..base
                }
            }
        }
        SystemKind::SchrodingerBBMBBM => {
            let q = q_bbm(p, s);
            let e = e_bbm(p);
            let e2 = e * e;
            let sq = (a * (2.0 * c - a)).sqrt();
            if tilde {
                ClosedForm {
                    d0: sq / (4.0 * a * s * e2 * (a - c)) * q,
                    d2: -3.0 * sq / (8.0 * a * s * e2 * (a - c)) * q,
                    h0: 1.0 / (4.0 * a * s * e2 * (a - c)) * (4.0 * a4 * mu1_4 * s2 - 4.0 * a3 * c * mu1_4 * s2
                        - 4.0 * a3 * b * mu1_3 * s + 4.0 * a2 * b * c * mu1_3 * s - a3 * mu0_2 * mu1_2 - 4.0 * a3 * mu0 * mu1_2 * s
                        + 8.0 * a3 * mu1_2 * s2 + a2 * c * mu0_2 * mu1_2 + 4.0 * a2 * c * mu0 * mu1_2 * s - 8.0 * a2 * c * mu1_2 * s2
                        + 2.0 * a2 * b * mu0 * mu1 - 4.0 * a2 * b * mu1 * s - 2.0 * a * b * c * mu0 * mu1 + 4.0 * a * b * c * mu1 * s
                        - 4.0 * a2 * mu0 * s + 4.0 * a2 * s2 + 4.0 * a * c * mu0 * s - 4.0 * a * c * s2 - a * b2 + b2 * c),
                    h2: -3.0 * q / (8.0 * s * e2 * (a - c)),
                    lambda_sq: q / (-16.0 * a * s2 * (a - c) * e2),
                    ..base
                }
            } else {
                ClosedForm {
                    d0: 0.0,
                    d2: 3.0 * sq / (8.0 * a * s * e2 * (a - c)) * q,
                    h0: 1.0 / (-8.0 * a * s * e2 * (a - c)) * (-8.0 * a4 * mu1_4 * s2 + 8.0 * a3 * c * mu1_4 * s2 + 8.0 * a4 * mu1_4 * s
                        - 8.0 * a2 * b * c * mu1_3 * s - 16.0 * a3 * mu1_2 * s2 - 2.0 * a2 * c * mu0_2 * mu1_2
                        - 8.0 * a2 * c * mu0 * mu1_2 * s + 16.0 * a2 * c * mu1_2 * s2 + 16.0 * a3 * mu1_2 * s
                        + 4.0 * a * b * c * mu0 * mu1 - 8.0 * a * b * c * mu1 * s - 8.0 * a2 * s2 - 8.0 * a * c * mu0 * s
                        + 8.0 * a * c * s2 + 8.0 * a2 * s - 2.0 * b2 * c),
                    h2: 3.0 * q / (8.0 * s * e2 * (a - c)),
                    lambda_sq: q / (16.0 * a * s2 * (a - c) * e2),
                    ..base
                }
            }
        }
        SystemKind::SchrodingerBBMKdV => {
            let q = q_bbm(p, s);
            let e = e_bbm(p);
            let e2 = e * e;
            let sq = (2.0 * c - a * s).sqrt();
            let den = a * s - c;
            if tilde {
                ClosedForm {
                    d0: 0.0,
                    d2: 3.0 * sq / (8.0 * (a * s).sqrt() * e2 * den) * q,
                    h0: -1.0 / (8.0 * a * s * e2 * den) * (-8.0 * a4 * mu1_4 * s3 + 8.0 * a4 * mu1_4 * s2 + 8.0 * a3 * c * mu1_4 * s2
                        - 16.0 * a3 * mu1_2 * s3 - 8.0 * a2 * b * c * mu1_3 * s + 16.0 * a3 * mu1_2 * s2
                        - 2.0 * a2 * c * mu0_2 * mu1_2 - 8.0 * a2 * c * mu0 * mu1_2 * s + 16.0 * a2 * c * mu1_2 * s2 - 8.0 * a2 * s3
                        + 4.0 * a * b * c * mu0 * mu1 - 8.0 * a * b * c * mu1 * s + 8.0 * a2 * s2 - 8.0 * a * c * mu0 * s
                        + 8.0 * a * c * s2 - 2.0 * b2 * c),
                    h2: 3.0 * q / (8.0 * e2 * den),
                    lambda_sq: q / (16.0 * a * s * e2 * den),
                    ..base
                }
            } else {
                ClosedForm {
                    d0: sq / (4.0 * (a * s).sqrt() * e2 * den) * q,
                    d2: -3.0 * sq / (8.0 * (a * s).sqrt() * e2 * den) * q,
                    h0: 1.0 / (4.0 * a * s * e2 * den) * (4.0 * a4 * mu1_4 * s3 - 4.0 * a3 * c * mu1_4 * s2 - 4.0 * a3 * b * mu1_3 * s2
                        - a3 * mu0_2 * mu1_2 * s - 4.0 * a3 * mu0 * mu1_2 * s2 + 8.0 * a3 * mu1_2 * s3 + 4.0 * a2 * b * c * mu1_3 * s
                        + a2 * c * mu0_2 * mu1_2 + 4.0 * a2 * c * mu0 * mu1_2 * s - 8.0 * a2 * c * mu1_2 * s2
                        + 2.0 * a2 * b * mu0 * mu1 * s - 4.0 * a2 * b * mu1 * s2 - 4.0 * a2 * mu0 * s2 + 4.0 * a2 * s3
                        - 2.0 * a * b * c * mu0 * mu1 + 4.0 * a * b * c * mu1 * s - a * b2 * s + 4.0 * a * c * mu0 * s
                        - 4.0 * a * c * s2 + b2 * c),
                    h2: -3.0 * q / (8.0 * e2 * den),
                    lambda_sq: q / (-16.0 * a * s * e2 * den),
                    ..base
                }
            }
        }
    }
}

/// `λ²` of a solitary branch without the positivity check.
pub fn solitary_lambda_sq(
    kind: SystemKind,
    phys: &PhysicalParams,
    sigma: f64,
    branch: SolitaryBranch,
) -> f64 {
    solitary_closed_form(kind, phys, sigma, branch).lambda_sq
}

/// Solitary (`m = 1`) coefficients on `branch`.
pub fn solitary_limit(
    kind: SystemKind,
    phys: &PhysicalParams,
    sigma: f64,
    branch: SolitaryBranch,
) -> Result<SolitarySolution> {
    check_inputs(kind, phys, sigma)?;
    let cf = solitary_closed_form(kind, phys, sigma, branch);
    if !(cf.lambda_sq > 0.0) {
        return Err(Error::Domain(format!(
            "{kind}: solitary lambda^2 = {:e} is not positive on the {branch:?} branch",
            cf.lambda_sq
        )));
    }
    check_ratio(kind, phys, sigma, cf.d2, cf.h2)?;
    Ok(SolitarySolution {
        kind,
        branch,
        phys: *phys,
        shift: cf.shift,
        omega: cf.omega,
        sigma,
        lambda: cf.lambda_sq.sqrt(),
        d0: cf.d0,
        d2: cf.d2,
        h0: cf.h0,
        h2: cf.h2,
    })
}

/// Residual of the condition under which the solitary limit is synchronized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncReport {
    pub kind: SystemKind,
    pub sigma: f64,
    #[serde(rename = "B")]
    pub shift: f64,
    /// Value of the system's condition at the candidate; zero when it holds.
    pub residual: f64,
    /// Closed-form root, where one exists (the KdV-KdV wave speed).
    pub root: Option<f64>,
    /// The solitary branch on which `h₀` vanishes when the condition holds.
    pub branch: SolitaryBranch,
    /// That branch's `h₀` at the candidate.
    pub limit_h0: f64,
}

/// KdV-KdV wave speed at which the `m = R = 1` solitary wave has `h₀ = 0`.
pub fn synchronized_sigma_kdv_kdv(phys: &PhysicalParams) -> f64 {
    let PhysicalParams { mu0, mu1, a, b, c } = *phys;
    (4.0 * a * a + 3.0 * a * a * c * mu1 * mu1
        - 2.0 * a * b * c * mu1
        - 4.0 * a * c * mu0
        - b * b * c)
        / (4.0 * a * (a - c))
}

/// Evaluates the synchronization condition of `kind` at wave speed `sigma`
/// and phase wavenumber `shift` (the family's own `B(σ)` when `None`).
#[rustfmt::skip]
pub fn synchronized_condition(kind: SystemKind, phys: &PhysicalParams, sigma: f64, shift: Option<f64>) -> SyncReport {
    let PhysicalParams { mu0, mu1, a, b, c } = *phys;
    let bs = shift.unwrap_or_else(|| shift_and_omega(kind, phys, sigma).0);
    let (a2, a3, b2) = (a * a, a * a * a, b * b);
    let (mu1_2, mu1_3) = (mu1 * mu1, mu1 * mu1 * mu1);
    let (b_2, b_3) = (bs * bs, bs * bs * bs);
    let (residual, root, branch) = match kind {
        SystemKind::SchrodingerKdVKdV => {
            let h0 = solitary_closed_form(kind, phys, sigma, SolitaryBranch::MR1).h0;
            (h0, Some(synchronized_sigma_kdv_kdv(phys)), SolitaryBranch::MR1)
        }
        SystemKind::SchrodingerBBMBBM => (
            (a2 * c * mu0 * mu1 - a * b * c) * b_2 + (2.0 * a * b * c * mu1 + 2.0 * a * c * mu0 - 2.0 * a3 * mu1_2
                - 2.0 * a2) * bs + (a2 * mu0 * mu1 + b * c - a * b - a * c * mu0 * mu1),
            None,
            SolitaryBranch::MNegR1,
        ),
        SystemKind::SchrodingerKdVBBM => (
            (sigma + 3.0 * a * b_2 + 2.0 * b * bs - mu0) / a - (sigma - 1.0) / (c * sigma),
            None,
            SolitaryBranch::MR1,
        ),
        SystemKind::SchrodingerBBMKdV => (
            (2.0 * a2 * b * c * mu1_2 + 2.0 * a * b * c - 2.0 * a3 * c * mu0 * mu1_3 - 2.0 * a2 * c * mu0 * mu1) * b_3
                + (-4.0 * a2 * b * c * mu1_3 - 4.0 * a2 * c * mu0 * mu1_2 - 4.0 * a * b * c * mu1 - 4.0 * a * c * mu0) * b_2
                + (2.0 * a3 * mu0 * mu1_3 + 2.0 * a2 * c * mu0 * mu1_3 + 2.0 * a2 * mu0 * mu1 + 2.0 * a * c * mu0 * mu1
                - 2.0 * a2 * b * mu1_2 - 2.0 * a * b - 2.0 * a * b * c * mu1_2 - 2.0 * b * c) * bs + (2.0 * a * b * mu0 * mu1
                - a2 * mu0 * mu0 * mu1_2 - b2),
            None,
            SolitaryBranch::MR1,
        ),
    };
    let limit_h0 = solitary_closed_form(kind, phys, sigma, branch).h0;
    SyncReport { kind, sigma, shift: bs, residual, root, branch, limit_h0 }
}

/// Free parameters of the semi-trivial families; each family reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeParams {
    pub h0: f64,
    pub d0: f64,
    pub h2: f64,
    #[serde(rename = "B")]
    pub shift: f64,
    pub omega: f64,
    pub m: f64,
    pub sigma: f64,
}

impl Default for FreeParams {
    fn default() -> Self {
        Self {
            h0: 1.0,
            d0: 1.0,
            h2: 3.0,
            shift: 0.5,
            omega: -0.25,
            m: 0.9,
            sigma: 2.0,
        }
    }
}

/// One catalog slot: the family number and either its solution or the failed precondition.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub family: usize,
    pub outcome: Result<SemiTrivialSolution>,
}

/// Number of trivial/semi-trivial families listed for `kind`.
pub fn catalog_len(kind: SystemKind) -> usize {
    if kind.u_is_kdv() == kind.v_is_kdv() {
        3
    } else {
        4
    }
}

/// Builds every trivial and semi-trivial family of `kind` from `free`.
pub fn semi_trivial_catalog(
    kind: SystemKind,
    phys: &PhysicalParams,
    free: &FreeParams,
) -> Vec<CatalogEntry> {
    (1..=catalog_len(kind))
        .map(|family| CatalogEntry {
            family,
            outcome: semi_trivial(kind, phys, free, family),
        })
        .collect()
}

fn map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// A single family of the catalog.
pub fn semi_trivial(
    kind: SystemKind,
    phys: &PhysicalParams,
    free: &FreeParams,
    family: usize,
) -> Result<SemiTrivialSolution> {
    phys.validate()?;
    let flat = WaveParams {
        shift: 0.0,
        omega: 0.0,
        sigma: free.sigma,
        lambda: 1.0,
        m: Modulus::new(0.0)?,
    };
    let mixed = kind.u_is_kdv() != kind.v_is_kdv();
    let build = |free_map, derived, wave, prof| SemiTrivialSolution {
        kind,
        family,
        free: free_map,
        derived,
        phys: *phys,
        wave,
        prof,
    };
    match family {
        1 => Ok(build(
            map(&[("h0", free.h0), ("sigma", free.sigma)]),
            BTreeMap::new(),
            flat,
            ProfileCoeffs {
                h0: free.h0,
                ..Default::default()
            },
        )),
        2 => {
            let FreeParams {
                h0,
                d0,
                shift: bs,
                omega: w,
                ..
            } = *free;
            if bs == 0.0 {
                return Err(Error::Constraint(format!(
                    "{kind} family 2: requires B != 0"
                )));
            }
            let PhysicalParams { mu0, mu1, a, b, .. } = *phys;
            let sigma = if kind.u_is_kdv() {
                (w - a * bs.powi(3) - b * bs * bs + bs * h0 + bs * mu0 + h0 * mu1) / bs
            } else {
                (a * bs * bs * w - b * bs * bs + bs * h0 + bs * mu0 + h0 * mu1 + w)
                    / (bs * (a * bs * bs + 1.0))
            };
            if !(sigma > 0.0) {
                return Err(Error::Constraint(format!(
                    "{kind} family 2: derived sigma = {sigma} must be positive"
                )));
            }
            Ok(build(
                map(&[("h0", h0), ("d0", d0), ("B", bs), ("omega", w)]),
                map(&[("sigma", sigma)]),
                WaveParams {
                    shift: bs,
                    omega: w,
                    sigma,
                    ..flat
                },
                ProfileCoeffs {
                    d0,
                    h0,
                    ..Default::default()
                },
            ))
        }
        3 if mixed => mixed_family(kind, phys, free),
        3 | 4 if family == catalog_len(kind) => {
            let FreeParams { h2, m, sigma, .. } = *free;
            let modulus = Modulus::new(m)?;
            if !(m > 0.0) {
                return Err(Error::Constraint(format!(
                    "{kind} family {family}: requires m > 0"
                )));
            }
            if !(h2 > 0.0 && sigma > 0.0) {
                return Err(Error::Constraint(format!(
                    "{kind} family {family}: requires h2 > 0 and sigma > 0"
                )));
            }
            let m2 = m * m;
            let lambda = if kind.v_is_kdv() {
                (h2 / (12.0 * phys.c * m2)).sqrt()
            } else {
                (h2 / (12.0 * phys.c * m2 * sigma)).sqrt()
            };
            let h0 = -2.0 / 3.0 * h2 + h2 / (3.0 * m2) + sigma - 1.0;
            Ok(build(
                map(&[("h2", h2), ("m", m), ("sigma", sigma)]),
                map(&[("lambda", lambda), ("h0", h0)]),
                WaveParams {
                    lambda,
                    m: modulus,
                    ..flat
                },
                ProfileCoeffs {
                    h0,
                    h2,
                    ..Default::default()
                },
            ))
        }
        _ => Err(Error::Config(format!(
            "{kind} has no semi-trivial family {family}"
        ))),
    }
}

/// The `(d₁cn, h₀ + h₂cn²)` family of the mixed systems.
#[rustfmt::skip]
fn mixed_family(kind: SystemKind, phys: &PhysicalParams, free: &FreeParams) -> Result<SemiTrivialSolution> {
    let PhysicalParams { mu0, mu1, a, b, c } = *phys;
    let FreeParams { h2, m, .. } = *free;
    let modulus = Modulus::new(m)?;
    if !(m > 0.0 && h2 > 0.0) {
        return Err(Error::Constraint(format!("{kind} family 3: requires m > 0 and h2 > 0")));
    }
    let (a2, a3, b2, c2) = (a * a, a * a * a, b * b, c * c);
    let (mu0_2, mu1_2, mu1_3, mu1_4) = (mu0 * mu0, mu1 * mu1, mu1 * mu1 * mu1, mu1 * mu1 * mu1 * mu1);
    let m2 = m * m;
    let (sigma, lambda, shift, omega, d1, h0) = if kind == SystemKind::SchrodingerKdVBBM {
        let expr = 9.0 * a2 * m2 * mu1_2 - 6.0 * a * b * m2 * mu1 - 4.0 * a * h2 * m2 - 12.0 * a * m2 * mu0 - 3.0 * b2 * m2
            + 2.0 * a * h2 + 12.0 * a * m2;
        if !(expr < 0.0) {
            return Err(Error::Constraint(format!(
                "{kind} family 3: requires 9a0^2m^2mu1^2 - 6a0bm^2mu1 - 4a0h2m^2 - 12a0m^2mu0 - 3b^2m^2 + 2a0h2 + 12a0m^2 < 0, got {expr}"
            )));
        }
        let d1 = (-6.0 * a * h2 * m2 * expr).sqrt() / (6.0 * a * m2);
        let h0 = (9.0 * a2 * c * m2 * mu1_2 - 6.0 * a * b * c * m2 * mu1 - 12.0 * a * c * h2 * m2 - 12.0 * a * c * m2 * mu0
            - 3.0 * b2 * c * m2 + 2.0 * a2 * m2 + 6.0 * a * c * h2) / (12.0 * a * c * m2);
        let omega = -mu1 * (6.0 * a * c * mu1_2 - 6.0 * b * c * mu1 - 6.0 * c * mu0 + a) / (6.0 * c);
        (a / (6.0 * c), (h2 / (2.0 * a * m2)).sqrt(), (a * mu1 - b) / (2.0 * a), omega, d1, h0)
    } else {
        let e = e_bbm(phys);
        let cond = 8.0 * a2 * c * h2 * m2 * mu1_4 - 4.0 * a2 * c * h2 * mu1_4 - 24.0 * a2 * c * m2 * mu1_4
            + a2 * m2 * mu0_2 * mu1_2 + 24.0 * a * b * c * m2 * mu1_3 + 16.0 * a * c * h2 * m2 * mu1_2
            + 24.0 * a * c * m2 * mu0 * mu1_2 - 2.0 * a * b * m2 * mu0 * mu1 - 8.0 * a * c * h2 * mu1_2
            - 48.0 * a * c * m2 * mu1_2 + 24.0 * b * c * m2 * mu1 + b2 * m2 + 8.0 * c * h2 * m2 + 24.0 * c * m2 * mu0
            - 4.0 * c * h2 - 24.0 * c * m2;
        if !(cond > 0.0) {
            return Err(Error::Constraint(format!(
                "{kind} family 3: requires the h2 condition (8a1^2ch2m^2mu1^4 - ... - 24cm^2) > 0, got {cond}"
            )));
        }
        let d1 = (3.0 * c * h2 * m2 * cond).sqrt() / (6.0 * c * m2 * e);
        let h0 = -1.0 / (24.0 * (a2 * mu1_4 + 2.0 * a * mu1_2 + 1.0) * a * c * m2) * (24.0 * a3 * c * h2 * m2 * mu1_4
            - 12.0 * a3 * c * h2 * mu1_4 - 144.0 * a2 * c2 * m2 * mu1_4 + a3 * m2 * mu0_2 * mu1_2
            + 24.0 * a2 * b * c * m2 * mu1_3 + 48.0 * a2 * c * h2 * m2 * mu1_2 + 24.0 * a2 * c * m2 * mu0 * mu1_2
            - 2.0 * a2 * b * m2 * mu0 * mu1 - 24.0 * a2 * c * h2 * mu1_2 - 288.0 * a * c2 * m2 * mu1_2
            + 24.0 * a * b * c * m2 * mu1 + a * b2 * m2 + 24.0 * a * c * h2 * m2 + 24.0 * a * c * m2 * mu0
            - 12.0 * a * c * h2 - 144.0 * c2 * m2);
        let omega = mu1 * (-6.0 * a * c * mu1_2 + a * b * mu1 + a * mu0 - 6.0 * c) / (e * a);
        (6.0 * c / a, (h2 / (12.0 * c * m2)).sqrt(), (a * mu0 * mu1 - b) / (12.0 * c * e), omega, d1, h0)
    };
    Ok(SemiTrivialSolution {
        kind,
        family: 3,
        free: map(&[("h2", h2), ("m", m)]),
        derived: map(&[("sigma", sigma), ("lambda", lambda), ("B", shift), ("omega", omega), ("d1", d1), ("h0", h0)]),
        phys: *phys,
        wave: WaveParams { shift, omega, sigma, lambda, m: modulus },
        prof: ProfileCoeffs { d1, h0, h2, ..Default::default() },
    })
}

/// `(f(ξ), g(ξ))`.
pub fn evaluate_profiles<S: AsTravelingWave + ?Sized>(sol: &S, xi: f64) -> Result<(f64, f64)> {
    let tw = sol.traveling_wave();
    let cn = jacobi_triple(tw.wave.lambda * xi, tw.wave.m)?.cn;
    let p = tw.prof;
    Ok((
        p.d0 + cn * (p.d1 + cn * p.d2),
        p.h0 + cn * (p.h1 + cn * p.h2),
    ))
}

/// `(u(x, t), v(x, t))` from the traveling-wave ansatz.
pub fn evaluate_fields<S: AsTravelingWave + ?Sized>(
    sol: &S,
    x: f64,
    t: f64,
) -> Result<(Complex64, f64)> {
    let tw = sol.traveling_wave();
    let WaveParams {
        shift,
        omega,
        sigma,
        ..
    } = tw.wave;
    let xi = x - sigma * t;
    let (f, g) = evaluate_profiles(&tw, xi)?;
    let phase = omega * t + shift * xi;
    Ok((Complex64::from_polar(1.0, phase) * f, g))
}

/// Reference parameter sets of the four systems, used with `m = 1/2` for the profile plots.
pub fn figure_set(kind: SystemKind) -> (PhysicalParams, f64) {
    let (sigma, a, c, mu1) = match kind {
        SystemKind::SchrodingerKdVKdV => (2.0, 1.0, 1.5, 0.25),
        SystemKind::SchrodingerBBMBBM => (1.0, 1.0, 2.5, 1.0),
        SystemKind::SchrodingerKdVBBM => (1.5, 1.0, 1.5, 0.25),
        SystemKind::SchrodingerBBMKdV => (0.5, 1.0, 1.5, 0.25),
    };
    (
        PhysicalParams {
            mu0: 1.0,
            mu1,
            a,
            b: -1.0,
            c,
        },
        sigma,
    )
}

/// Modulus of the figure sets.
pub const FIGURE_MODULUS: f64 = 0.5;
