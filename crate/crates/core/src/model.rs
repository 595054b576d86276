//! The four coupled systems, their traveling-wave ODE residuals, the
//! thirteen coefficient polynomials of the `n = 2` cn-ansatz, and
//! finite-difference PDE residuals.
//!
//! All four systems share
//!
//! ```text
//! u_t + μ₀u_x + [a u_xxx | −a u_xxt] + i b u_xx = −(uv)_x − iμ₁uv
//! v_t + v_x + v v_x + [c v_xxx | −c v_xxt]      = −½(|u|²)_x
//! ```
//!
//! with the KdV (first) or BBM (second) dispersion chosen per field.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{cn_power_derivs_from, jacobi_triple, Modulus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SystemKind {
    #[serde(rename = "KdV-KdV")]
    SchrodingerKdVKdV,
    #[serde(rename = "BBM-BBM")]
    SchrodingerBBMBBM,
    #[serde(rename = "KdV-BBM")]
    SchrodingerKdVBBM,
    #[serde(rename = "BBM-KdV")]
    SchrodingerBBMKdV,
}

impl SystemKind {
    pub const ALL: [SystemKind; 4] = [
        SystemKind::SchrodingerKdVKdV,
        SystemKind::SchrodingerBBMBBM,
        SystemKind::SchrodingerKdVBBM,
        SystemKind::SchrodingerBBMKdV,
    ];

    /// Whether the `u` equation carries `a u_xxx` (KdV) rather than `−a u_xxt`.
    pub fn u_is_kdv(self) -> bool {
        matches!(
            self,
            SystemKind::SchrodingerKdVKdV | SystemKind::SchrodingerKdVBBM
        )
    }

    /// Whether the `v` equation carries `c v_xxx` (KdV) rather than `−c v_xxt`.
    pub fn v_is_kdv(self) -> bool {
        matches!(
            self,
            SystemKind::SchrodingerKdVKdV | SystemKind::SchrodingerBBMKdV
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::SchrodingerKdVKdV => "KdV-KdV",
            SystemKind::SchrodingerBBMBBM => "BBM-BBM",
            SystemKind::SchrodingerKdVBBM => "KdV-BBM",
            SystemKind::SchrodingerBBMKdV => "BBM-KdV",
        }
    }

    /// Short lowercase tag, used in file names.
    pub fn slug(self) -> &'static str {
        match self {
            SystemKind::SchrodingerKdVKdV => "kdv-kdv",
            SystemKind::SchrodingerBBMBBM => "bbm-bbm",
            SystemKind::SchrodingerKdVBBM => "kdv-bbm",
            SystemKind::SchrodingerBBMKdV => "bbm-kdv",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "kdvkdv" | "kk" | "schrodingerkdvkdv" => Ok(SystemKind::SchrodingerKdVKdV),
            "bbmbbm" | "bb" | "schrodingerbbmbbm" => Ok(SystemKind::SchrodingerBBMBBM),
            "kdvbbm" | "kb" | "schrodingerkdvbbm" => Ok(SystemKind::SchrodingerKdVBBM),
            "bbmkdv" | "bk" | "schrodingerbbmkdv" => Ok(SystemKind::SchrodingerBBMKdV),
            _ => Err(Error::Config(format!(
                "unknown system {s:?}; expected kdv-kdv, bbm-bbm, kdv-bbm or bbm-kdv"
            ))),
        }
    }
}

/// Model constants. `a` is the `u`-dispersion coefficient (`a₀` for a KdV
/// `u` equation, `a₁` for a BBM one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mu0: f64,
    pub mu1: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PhysicalParams {
    pub fn new(mu0: f64, mu1: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        let p = Self { mu0, mu1, a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mu0", self.mu0),
            ("mu1", self.mu1),
            ("a", self.a),
            ("c", self.c),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.b.is_finite() {
            return Err(Error::Domain(format!("b must be finite, got {}", self.b)));
        }
        Ok(())
    }
}

/// `f = d₀ + d₁cn + d₂cn²`, `g = h₀ + h₁cn + h₂cn²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfileCoeffs {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
}

/// Traveling-wave parameters: `u = e^{i(ωt + Bξ)} f(ξ)`, `v = g(ξ)`, `ξ = x − σt`,
/// with the profiles evaluated at `(λξ, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    /// The phase wavenumber `B`.
    #[serde(rename = "B")]
    pub shift: f64,
    pub omega: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub m: Modulus,
}

/// One coefficient together with the largest magnitude among the terms
/// that were summed to produce it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Entry {
    pub value: f64,
    pub scale: f64,
}

impl Entry {
    pub const ZERO: Entry = Entry {
        value: 0.0,
        scale: 0.0,
    };

    #[inline]
    pub fn push(&mut self, term: f64) {
        self.value += term;
        self.scale = self.scale.max(term.abs());
    }

    /// `value / scale`, with an all-zero entry mapping to zero.
    pub fn scaled(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.abs()
        } else {
            self.value / self.scale
        }
    }
}

macro_rules! acc {
    ($($term:expr),+ $(,)?) => {{
        let mut e = Entry::ZERO;
        $( e.push($term); )+
        e
    }};
}

/// `(j, q)` labels of the thirteen coefficients, in storage order.
pub const COEFFICIENT_KEYS: [(u8, u8); 13] = [
    (1, 0),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
    (2, 2),
    (2, 3),
    (2, 4),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 3),
];

/// The thirteen `k_{j,q}` of the `n = 2` ansatz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    entries: [Entry; 13],
}

impl CoefficientSet {
    pub fn get(&self, j: u8, q: u8) -> Option<Entry> {
        COEFFICIENT_KEYS
            .iter()
            .position(|&k| k == (j, q))
            .map(|i| self.entries[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u8, u8), Entry)> + '_ {
        COEFFICIENT_KEYS
            .iter()
            .copied()
            .zip(self.entries.iter().copied())
    }

    /// Coefficients of row `j`, indexed by `q`.
    pub fn row(&self, j: u8) -> Vec<Entry> {
        self.iter()
            .filter(|((jj, _), _)| *jj == j)
            .map(|(_, e)| e)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest scaled magnitude and where it occurs.
    pub fn max_scaled(&self) -> (f64, (u8, u8)) {
        self.iter()
            .map(|(key, e)| (e.scaled().abs(), key))
            .fold(
                (0.0, (1, 0)),
                |best, cur| if cur.0 > best.0 { cur } else { best },
            )
    }
}

/// Traveling coordinates and the matching lab-frame points at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub xi: Vec<f64>,
    pub x: Vec<f64>,
    pub t: f64,
}

impl SampleGrid {
    /// Grid of lab-frame points `x` at time `t` for a wave moving at `sigma`.
    pub fn new(x: Vec<f64>, t: f64, sigma: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Domain("sample grid must be nonempty".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(
                "sample grid must be strictly increasing".into(),
            ));
        }
        let xi = x.iter().map(|&xx| xx - sigma * t).collect();
        Ok(Self { xi, x, t })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Factor relating row `j` of [`coefficient_set`] to the ODE residuals:
///
/// ```text
/// r₁ = row_factor(1)·sn·dn·Σ k_{1,q} cn^q
/// r₂ = row_factor(2)·Σ k_{2,q} cn^q
/// r₃ = row_factor(3)·sn·dn·Σ k_{3,q} cn^q
/// ```
pub fn row_factor(kind: SystemKind, j: u8, lambda: f64) -> f64 {
    match j {
        1 => 6.0 * lambda,
        2 => 1.0,
        3 => match kind {
            SystemKind::SchrodingerKdVKdV | SystemKind::SchrodingerBBMKdV => -24.0 * lambda,
            SystemKind::SchrodingerBBMBBM => lambda,
            SystemKind::SchrodingerKdVBBM => -6.0 * lambda,
        },
        _ => 0.0,
    }
}

/// Evaluates the thirteen coefficient polynomials for `kind`.
pub fn coefficient_set(
    kind: SystemKind,
    phys: &PhysicalParams,
    prof: &ProfileCoeffs,
    wave: &WaveParams,
) -> CoefficientSet {
    let v = Vars::new(phys, prof, wave);
    let u_rows = if kind.u_is_kdv() {
        kdv_u_rows(&v)
    } else {
        bbm_u_rows(&v)
    };
    let v_rows = match kind {
        SystemKind::SchrodingerKdVKdV | SystemKind::SchrodingerBBMKdV => kdv_v_rows(&v),
        SystemKind::SchrodingerBBMBBM => bbm_bbm_v_rows(&v),
        SystemKind::SchrodingerKdVBBM => kdv_bbm_v_rows(&v),
    };
    let mut entries = [Entry::ZERO; 13];
    entries[..9].copy_from_slice(&u_rows);
    entries[9..].copy_from_slice(&v_rows);
    CoefficientSet { entries }
}

struct Vars {
    a: f64,
    b: f64,
    c: f64,
    mu0: f64,
    mu1: f64,
    d0: f64,
    d1: f64,
    d2: f64,
    h0: f64,
    h1: f64,
    h2: f64,
    bs: f64,
    w: f64,
    s: f64,
    l2: f64,
    m2: f64,
}

impl Vars {
    fn new(phys: &PhysicalParams, prof: &ProfileCoeffs, wave: &WaveParams) -> Self {
        Self {
            a: phys.a,
            b: phys.b,
            c: phys.c,
            mu0: phys.mu0,
            mu1: phys.mu1,
            d0: prof.d0,
            d1: prof.d1,
            d2: prof.d2,
            h0: prof.h0,
            h1: prof.h1,
            h2: prof.h2,
            bs: wave.shift,
            w: wave.omega,
            s: wave.sigma,
            l2: wave.lambda * wave.lambda,
            m2: wave.m.parameter(),
        }
    }
}

const T: f64 = 1.0 / 3.0;
const TT: f64 = 2.0 / 3.0;

/// `k_{1,0..3}, k_{2,0..4}` for a KdV-dispersed `u`.
#[rustfmt::skip]
fn kdv_u_rows(v: &Vars) -> [Entry; 9] {
    let Vars { a, b, mu0, mu1, d0, d1, d2, h0, h1, h2, bs, w, s, l2, m2, .. } = *v;
    let b2 = bs * bs;
    let b3 = b2 * bs;
    [
        acc![0.5 * b2 * a * d1, -T * l2 * a * d1 * m2, T * bs * b * d1, l2 * a * d1 / 6.0, -d0 * h1 / 6.0,
             -d1 * h0 / 6.0, -d1 * mu0 / 6.0, d1 * s / 6.0],
        acc![d2 * a * b2, -8.0 / 3.0 * l2 * a * d2 * m2, TT * d2 * b * bs, 4.0 / 3.0 * d2 * a * l2, -T * d0 * h2,
             -T * d1 * h1, -T * d2 * h0, -T * d2 * mu0, T * d2 * s],
        acc![l2 * a * d1 * m2, -0.5 * d1 * h2, -0.5 * d2 * h1],
        acc![4.0 * l2 * a * d2 * m2, -TT * d2 * h2],
        acc![-b3 * a * d0, -6.0 * bs * a * d2 * l2 * m2, -b2 * b * d0, 6.0 * bs * a * d2 * l2, -2.0 * b * d2 * l2 * m2,
             bs * d0 * h0, bs * d0 * mu0, -bs * d0 * s, 2.0 * b * d2 * l2, d0 * h0 * mu1, d0 * w],
        acc![-b3 * a * d1, 6.0 * bs * a * d1 * l2 * m2, -b2 * b * d1, -3.0 * bs * a * d1 * l2, 2.0 * b * d1 * l2 * m2,
             bs * d0 * h1, bs * d1 * h0, bs * d1 * mu0, -bs * d1 * s, -b * d1 * l2, d0 * h1 * mu1, d1 * h0 * mu1, d1 * w],
        acc![-b3 * a * d2, 24.0 * bs * a * d2 * l2 * m2, -b2 * b * d2, -12.0 * bs * a * d2 * l2, 8.0 * b * d2 * l2 * m2,
             bs * d0 * h2, bs * d1 * h1, bs * d2 * h0, bs * d2 * mu0, -bs * d2 * s, -4.0 * b * d2 * l2, d0 * h2 * mu1,
             d1 * h1 * mu1, d2 * h0 * mu1, d2 * w],
        acc![-6.0 * bs * a * d1 * l2 * m2, -2.0 * b * d1 * l2 * m2, bs * d1 * h2, bs * d2 * h1, d1 * h2 * mu1, d2 * h1 * mu1],
        acc![-18.0 * bs * a * d2 * l2 * m2, -6.0 * b * d2 * l2 * m2, bs * d2 * h2, d2 * h2 * mu1],
    ]
}

/// `k_{1,0..3}, k_{2,0..4}` for a BBM-dispersed `u`.
#[rustfmt::skip]
fn bbm_u_rows(v: &Vars) -> [Entry; 9] {
    let Vars { a, b, mu0, mu1, d0, d1, d2, h0, h1, h2, bs, w, s, l2, m2, .. } = *v;
    let b2 = bs * bs;
    let b3 = b2 * bs;
    let cm = 1.0 - m2;
    [
        acc![T * bs * b * d1, -d0 * h1 / 6.0, -d1 * h0 / 6.0, -d1 * mu0 / 6.0, d1 * s / 6.0, 0.5 * b2 * a * d1 * s,
             -T * bs * a * d1 * w, -T * l2 * a * d1 * m2 * s, l2 * a * d1 * s / 6.0],
        acc![TT * bs * b * d2, -T * d0 * h2, -T * d1 * h1, -T * d2 * h0, -T * d2 * mu0, T * d2 * s,
             4.0 / 3.0 * l2 * a * d2 * s, b2 * a * d2 * s, -TT * bs * a * d2 * w, -8.0 / 3.0 * l2 * a * d2 * m2 * s],
        acc![-0.5 * d1 * h2, -0.5 * d2 * h1, l2 * a * d1 * m2 * s],
        acc![-TT * d2 * h2, 4.0 * l2 * a * d2 * m2 * s],
        acc![-b3 * a * d0 * s, b2 * a * d0 * w, d0 * w, -b2 * b * d0, bs * d0 * h0, bs * d0 * mu0, -bs * d0 * s,
             d0 * h0 * mu1, 6.0 * bs * cm * a * d2 * l2 * s, -2.0 * cm * a * d2 * l2 * w, 2.0 * cm * b * d2 * l2],
        acc![3.0 * bs * a * d1 * l2 * m2 * s, -3.0 * bs * cm * a * d1 * l2 * s, -a * d1 * l2 * m2 * w, b2 * a * d1 * w,
             -b3 * a * d1 * s, cm * a * d1 * l2 * w, b * d1 * l2 * m2, -b2 * b * d1, bs * d0 * h1, bs * d1 * h0,
             bs * d1 * mu0, -bs * d1 * s, d0 * h1 * mu1, d1 * h0 * mu1, d1 * w, -cm * b * d1 * l2],
        acc![6.0 * bs * a * d2 * l2 * m2 * s, 6.0 * (-bs * cm + bs * m2) * a * d2 * l2 * s, -6.0 * bs * cm * a * d2 * l2 * s,
             -2.0 * a * d2 * l2 * m2 * w, -b3 * a * d2 * s, b2 * a * d2 * w, -2.0 * (2.0 * m2 - 1.0) * a * d2 * l2 * w,
             2.0 * cm * a * d2 * l2 * w, 2.0 * b * d2 * l2 * m2, bs * d2 * mu0, bs * d0 * h2, d1 * h1 * mu1, d2 * h0 * mu1,
             -b2 * b * d2, d2 * w, -bs * d2 * s, d0 * h2 * mu1, bs * d1 * h1, bs * d2 * h0,
             2.0 * (2.0 * m2 - 1.0) * b * d2 * l2, -2.0 * cm * b * d2 * l2],
        acc![-6.0 * bs * a * d1 * l2 * m2 * s, 2.0 * a * d1 * l2 * m2 * w, -2.0 * b * d1 * l2 * m2, bs * d1 * h2,
             bs * d2 * h1, d1 * h2 * mu1, d2 * h1 * mu1],
        acc![-18.0 * bs * a * d2 * l2 * m2 * s, 6.0 * a * d2 * l2 * m2 * w, -6.0 * b * d2 * l2 * m2, bs * d2 * h2,
             d2 * h2 * mu1],
    ]
}

/// `k_{3,0..3}` for a KdV-dispersed `v`.
#[rustfmt::skip]
fn kdv_v_rows(v: &Vars) -> [Entry; 4] {
    let Vars { c, d0, d1, d2, h0, h1, h2, s, l2, m2, .. } = *v;
    [
        acc![l2 * c * h1 * m2 / 12.0, d0 * d1 / 24.0, h0 * h1 / 24.0, -h1 * s / 24.0, -l2 * c * h1 / 24.0, h1 / 24.0],
        acc![-T * l2 * c * h2, TT * l2 * c * h2 * m2, d0 * d2 / 12.0, h0 * h2 / 12.0, -h2 * s / 12.0, d1 * d1 / 24.0,
             h1 * h1 / 24.0, h2 / 12.0],
        acc![-0.25 * l2 * c * h1 * m2, d1 * d2 / 8.0, h1 * h2 / 8.0],
        acc![d2 * d2 / 12.0, h2 * h2 / 12.0, -l2 * c * h2 * m2],
    ]
}

/// `k_{3,0..3}` for the BBM-BBM system.
#[rustfmt::skip]
fn bbm_bbm_v_rows(v: &Vars) -> [Entry; 4] {
    let Vars { c, d0, d1, d2, h0, h1, h2, s, l2, m2, .. } = *v;
    [
        acc![-2.0 * l2 * c * h1 * m2 * s, l2 * c * h1 * s, -d0 * d1, -h0 * h1, h1 * s, -h1],
        acc![-16.0 * c * h2 * l2 * m2 * s, 8.0 * c * h2 * l2 * s, -2.0 * d0 * d2, -d1 * d1, -2.0 * h0 * h2, -h1 * h1,
             2.0 * h2 * s, -2.0 * h2],
        acc![6.0 * l2 * c * h1 * m2 * s, -3.0 * d1 * d2, -3.0 * h1 * h2],
        acc![24.0 * c * h2 * l2 * m2 * s, -2.0 * d2 * d2, -2.0 * h2 * h2],
    ]
}

/// `k_{3,0..3}` for the KdV-BBM system.
#[rustfmt::skip]
fn kdv_bbm_v_rows(v: &Vars) -> [Entry; 4] {
    let Vars { c, d0, d1, d2, h0, h1, h2, s, l2, m2, .. } = *v;
    [
        acc![h1 / 6.0, -l2 * c * h1 * s / 6.0, d0 * d1 / 6.0, h0 * h1 / 6.0, -h1 * s / 6.0, T * l2 * c * h1 * m2 * s],
        acc![T * d0 * d2, T * h0 * h2, -T * h2 * s, -4.0 / 3.0 * l2 * c * h2 * s, d1 * d1 / 6.0, h1 * h1 / 6.0, T * h2,
             8.0 / 3.0 * l2 * c * h2 * m2 * s],
        acc![0.5 * d1 * d2, 0.5 * h1 * h2, -l2 * c * h1 * m2 * s],
        acc![T * d2 * d2, T * h2 * h2, -4.0 * l2 * c * h2 * m2 * s],
    ]
}

/// A profile `p₀ + p₁cn + p₂cn²` and its first three `ξ`-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProfileJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// `(f, g)` jets at `ξ`.
pub fn profile_jets(
    prof: &ProfileCoeffs,
    wave: &WaveParams,
    xi: f64,
) -> Result<(ProfileJet, ProfileJet)> {
    let lambda = wave.lambda;
    let tri = jacobi_triple(lambda * xi, wave.m)?;
    let k2 = wave.m.parameter();
    let p1 = cn_power_derivs_from(1, lambda, tri.sn, tri.cn, tri.dn, k2);
    let p2 = cn_power_derivs_from(2, lambda, tri.sn, tri.cn, tri.dn, k2);
    let jet = |c0: f64, c1: f64, c2: f64| ProfileJet {
        value: c0 + c1 * p1.value + c2 * p2.value,
        d1: c1 * p1.d1 + c2 * p2.d1,
        d2: c1 * p1.d2 + c2 * p2.d2,
        d3: c1 * p1.d3 + c2 * p2.d3,
    };
    Ok((
        jet(prof.d0, prof.d1, prof.d2),
        jet(prof.h0, prof.h1, prof.h2),
    ))
}

/// The three ODE residuals with the magnitude of their largest term.
pub fn ode_residual_terms(
    kind: SystemKind,
    phys: &PhysicalParams,
    prof: &ProfileCoeffs,
    wave: &WaveParams,
    xi: f64,
) -> Result<[Entry; 3]> {
    let (f, g) = profile_jets(prof, wave, xi)?;
    let PhysicalParams { mu0, mu1, a, b, c } = *phys;
    let WaveParams {
        shift: bs,
        omega: w,
        sigma: s,
        ..
    } = *wave;
    let (r1, r2) = if kind.u_is_kdv() {
        (
            acc![
                f.d1 * g.value,
                f.value * g.d1,
                a * f.d3,
                (mu0 - s - 3.0 * a * bs * bs - 2.0 * b * bs) * f.d1
            ],
            acc![
                (bs + mu1) * f.value * g.value,
                (3.0 * a * bs + b) * f.d2,
                (w + bs * mu0 - bs * s - a * bs.powi(3) - b * bs * bs) * f.value
            ],
        )
    } else {
        (
            acc![
                f.d1 * g.value,
                f.value * g.d1,
                a * s * f.d3,
                (mu0 + 2.0 * a * bs * w - 3.0 * a * bs * bs * s - s - 2.0 * b * bs) * f.d1
            ],
            acc![
                (bs + mu1) * f.value * g.value,
                (3.0 * a * bs * s + b - a * w) * f.d2,
                (w + bs * mu0 + a * bs * bs * w - a * bs.powi(3) * s - bs * s - b * bs * bs)
                    * f.value
            ],
        )
    };
    let cv = if kind.v_is_kdv() { c } else { c * s };
    let r3 = acc![f.value * f.d1, g.value * g.d1, cv * g.d3, (1.0 - s) * g.d1];
    Ok([r1, r2, r3])
}

/// Left-hand sides of the three traveling-wave ODEs at `ξ`.
pub fn ode_residuals(
    kind: SystemKind,
    phys: &PhysicalParams,
    prof: &ProfileCoeffs,
    wave: &WaveParams,
    xi: f64,
) -> Result<(f64, f64, f64)> {
    let [r1, r2, r3] = ode_residual_terms(kind, phys, prof, wave, xi)?;
    Ok((r1.value, r2.value, r3.value))
}

/// PDE residuals at one point with the magnitude of the largest term of each equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeResiduals {
    pub ru: Complex64,
    pub rv: f64,
    pub scale_u: f64,
    pub scale_v: f64,
}

impl PdeResiduals {
    pub fn scaled_u(&self) -> f64 {
        if self.scale_u == 0.0 {
            self.ru.norm()
        } else {
            self.ru.norm() / self.scale_u
        }
    }

    pub fn scaled_v(&self) -> f64 {
        if self.scale_v == 0.0 {
            self.rv.abs()
        } else {
            self.rv.abs() / self.scale_v
        }
    }
}

/// Fourth-order central first derivative from samples at offsets `−2..=2`.
fn fd1<T>(s: [T; 5], h: f64) -> T
where
    T: Copy
        + std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Add<Output = T>,
{
    (s[0] - s[4] + (s[3] - s[1]) * 8.0) * (1.0 / (12.0 * h))
}

/// Fourth-order central second derivative from samples at offsets `−2..=2`.
fn fd2<T>(s: [T; 5], h: f64) -> T
where
    T: Copy
        + std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Add<Output = T>,
{
    ((s[1] + s[3]) * 16.0 - (s[0] + s[4]) - s[2] * 30.0) * (1.0 / (12.0 * h * h))
}

/// Fourth-order central third derivative from samples at offsets `−3..=3`.
fn fd3<T>(s: [T; 7], h: f64) -> T
where
    T: Copy
        + std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Add<Output = T>,
{
    (s[0] - s[6] + (s[5] - s[1]) * 8.0 + (s[2] - s[4]) * 13.0) * (1.0 / (8.0 * h * h * h))
}

fn stencil<T, const N: usize>(f: impl Fn(f64) -> T, center: f64, h: f64) -> [T; N] {
    let half = (N / 2) as f64;
    std::array::from_fn(|i| f(center + (i as f64 - half) * h))
}

/// Finite-difference residuals of the two PDEs of `kind` at `(x, t)`.
///
/// `u` and `v` must be defined on `x ± 3h`, `t ± 2h`.
pub fn pde_residuals(
    kind: SystemKind,
    phys: &PhysicalParams,
    u: &dyn Fn(f64, f64) -> Complex64,
    v: &dyn Fn(f64, f64) -> f64,
    x: f64,
    t: f64,
    h: f64,
) -> Result<PdeResiduals> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Stencil(format!(
            "stencil width must be positive, got {h}"
        )));
    }
    let PhysicalParams { mu0, mu1, a, b, c } = *phys;
    let i = Complex64::i();

    let u0 = u(x, t);
    let v0 = v(x, t);
    let ux_s: [Complex64; 7] = stencil(|xx| u(xx, t), x, h);
    let vx_s: [f64; 7] = stencil(|xx| v(xx, t), x, h);
    let inner = |s: &[Complex64; 7]| [s[1], s[2], s[3], s[4], s[5]];
    let inner_r = |s: &[f64; 7]| [s[1], s[2], s[3], s[4], s[5]];

    let u_x = fd1(inner(&ux_s), h);
    let u_xx = fd2(inner(&ux_s), h);
    let u_t = fd1(stencil(|tt| u(x, tt), t, h), h);
    let v_x = fd1(inner_r(&vx_s), h);
    let v_t = fd1(stencil(|tt| v(x, tt), t, h), h);
    let uv_x = fd1(stencil(|xx| u(xx, t) * v(xx, t), x, h), h);
    let mod2_x = fd1(stencil(|xx| u(xx, t).norm_sqr(), x, h), h);

    let u_disp = if kind.u_is_kdv() {
        a * fd3(ux_s, h)
    } else {
        let u_xxt = fd1(stencil(|tt| fd2(stencil(|xx| u(xx, tt), x, h), h), t, h), h);
        -a * u_xxt
    };
    let v_disp = if kind.v_is_kdv() {
        c * fd3(vx_s, h)
    } else {
        let v_xxt = fd1(stencil(|tt| fd2(stencil(|xx| v(xx, tt), x, h), h), t, h), h);
        -c * v_xxt
    };

    let u_terms = [
        u_t,
        mu0 * u_x,
        u_disp,
        i * b * u_xx,
        uv_x,
        i * mu1 * u0 * v0,
    ];
    let v_terms = [v_t, v_x, v0 * v_x, v_disp, 0.5 * mod2_x];
    Ok(PdeResiduals {
        ru: u_terms.iter().sum(),
        rv: v_terms.iter().sum(),
        scale_u: u_terms.iter().map(|z| z.norm()).fold(0.0, f64::max),
        scale_v: v_terms.iter().map(|z| z.abs()).fold(0.0, f64::max),
    })
}

/// Top-degree coefficient `k_{3,2n−1} = −nλ(dₙ² + hₙ²)` of a degree-`n` cn-ansatz.
pub fn leading_coefficient(n: i32, lambda: f64, dn: f64, hn: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "leading coefficient is defined for n >= 3, got {n}"
        )));
    }
    Ok(-f64::from(n) * lambda * (dn * dn + hn * hn))
}
