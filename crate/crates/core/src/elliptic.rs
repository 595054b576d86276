//! Jacobi elliptic functions of real argument.
//!
//! Everything here takes the elliptic *modulus* `k` (written `m` in the wave
//! formulas, where it appears as `m²`, `m⁴`), not the parameter `k²` used by
//! Abramowitz & Stegun and most numerical libraries. [`Modulus::from_parameter`]
//! and [`Modulus::parameter`] are the only conversions between the two.
//!
//! The complete integral uses the arithmetic-geometric mean; `am`, `sn`, `cn`
//! and `dn` use the descending Landen (AGM) recursion of A&S 16.4 after
//! reducing the argument modulo the real period `4K`. The endpoints `k = 0`
//! and `k = 1` dispatch to circular and hyperbolic functions.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Relative agreement of successive AGM means at which iteration stops.
pub const AGM_TOLERANCE: f64 = 1e-15;

const MAX_AGM_STEPS: usize = 64;

/// Elliptic modulus `k ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && (0.0..=1.0).contains(&k) {
            Ok(Self(k))
        } else {
            Err(Error::Domain(format!(
                "elliptic modulus must lie in [0, 1], got {k}"
            )))
        }
    }

    /// Builds the modulus from the parameter `k²`.
    pub fn from_parameter(k2: f64) -> Result<Self> {
        if k2.is_finite() && (0.0..=1.0).contains(&k2) {
            Ok(Self(k2.sqrt()))
        } else {
            Err(Error::Domain(format!(
                "elliptic parameter must lie in [0, 1], got {k2}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The parameter `k²`.
    #[inline]
    pub fn parameter(self) -> f64 {
        self.0 * self.0
    }

    /// Complementary modulus `√(1 − k²)`, computed without cancellation near `k = 1`.
    #[inline]
    pub fn complementary(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

/// `(sn, cn, dn)` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// `cnʳ(λξ, k)` and its first three derivatives with respect to `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CnPowerDerivs {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// Complete elliptic integral of the first kind, `K(k) = ∫₀^{π/2} dt / √(1 − k² sin²t)`.
///
/// Fails for `k = 1`, where the integral diverges.
pub fn complete_k(m: Modulus) -> Result<f64> {
    let k = m.value();
    if k >= 1.0 {
        return Err(Error::Domain("K(k) diverges at k = 1".into()));
    }
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let mut a = 1.0_f64;
    let mut b = m.complementary();
    for _ in 0..MAX_AGM_STEPS {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        a = a_next;
        b = b_next;
        if (a - b).abs() <= AGM_TOLERANCE * a {
            break;
        }
    }
    Ok(PI / (a + b))
}

/// Jacobi amplitude `am(u, k)`.
pub fn amplitude(u: f64, m: Modulus) -> Result<f64> {
    check_argument(u)?;
    let k = m.value();
    if k == 0.0 {
        return Ok(u);
    }
    if k == 1.0 {
        // Gudermannian
        return Ok(u.sinh().atan());
    }
    let quarter = complete_k(m)?;
    // am(u + 2K) = am(u) + π
    let half_periods = (u / (2.0 * quarter)).round();
    let reduced = u - half_periods * 2.0 * quarter;
    Ok(landen_amplitude(reduced, k, m.complementary()) + half_periods * PI)
}

/// `(sn, cn, dn)` at `u`.
pub fn jacobi_triple(u: f64, m: Modulus) -> Result<JacobiTriple> {
    check_argument(u)?;
    let k = m.value();
    if k == 0.0 {
        return Ok(JacobiTriple {
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
        });
    }
    if k == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(JacobiTriple {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        });
    }
    let quarter = complete_k(m)?;
    let period = 4.0 * quarter;
    let reduced = u - (u / period).round() * period;
    let phi = landen_amplitude(reduced, k, m.complementary());
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - k * k * sn * sn).sqrt();
    Ok(JacobiTriple { sn, cn, dn })
}

/// `cnʳ(λξ, k)` and its first three `ξ`-derivatives, from the closed forms
///
/// ```text
/// (cnʳ)'   = −rλ cnʳ⁻¹ sn dn
/// (cnʳ)''  = −rλ² [(r+1)k² cnʳ⁺² + r(1−2k²) cnʳ + (r−1)(k²−1) cnʳ⁻²]
/// (cnʳ)''' =  rλ³ sn dn [(r+1)(r+2)k² cnʳ⁺¹ + r²(1−2k²) cnʳ⁻¹ + (r−1)(r−2)(k²−1) cnʳ⁻³]
/// ```
pub fn cn_power_derivs(r: i32, lambda: f64, xi: f64, m: Modulus) -> Result<CnPowerDerivs> {
    if r < 0 {
        return Err(Error::Domain(format!(
            "cn power must be non-negative, got {r}"
        )));
    }
    if r == 0 {
        return Ok(CnPowerDerivs {
            value: 1.0,
            ..Default::default()
        });
    }
    let JacobiTriple { sn, cn, dn } = jacobi_triple(lambda * xi, m)?;
    Ok(cn_power_derivs_from(r, lambda, sn, cn, dn, m.parameter()))
}

/// Same as [`cn_power_derivs`] with the triple already evaluated.
pub(crate) fn cn_power_derivs_from(
    r: i32,
    lambda: f64,
    sn: f64,
    cn: f64,
    dn: f64,
    k2: f64,
) -> CnPowerDerivs {
    if r == 0 {
        return CnPowerDerivs {
            value: 1.0,
            ..Default::default()
        };
    }
    let rf = f64::from(r);
    // A term whose integer prefactor vanishes is dropped outright so that
    // negative powers of cn are never formed.
    let term = |coef: f64, exp: i32| {
        if coef == 0.0 {
            0.0
        } else {
            coef * cn.powi(exp)
        }
    };
    let snd = sn * dn;
    let value = cn.powi(r);
    let d1 = -rf * lambda * term(1.0, r - 1) * snd;
    let d2 = -rf
        * lambda.powi(2)
        * (term((rf + 1.0) * k2, r + 2)
            + term(rf * (1.0 - 2.0 * k2), r)
            + term((rf - 1.0) * (k2 - 1.0), r - 2));
    let d3 = rf
        * lambda.powi(3)
        * snd
        * (term((rf + 1.0) * (rf + 2.0) * k2, r + 1)
            + term(rf * rf * (1.0 - 2.0 * k2), r - 1)
            + term((rf - 1.0) * (rf - 2.0) * (k2 - 1.0), r - 3));
    CnPowerDerivs { value, d1, d2, d3 }
}

fn check_argument(u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "elliptic argument must be finite, got {u}"
        )))
    }
}

/// Descending Landen recursion for `am(u, k)`, `0 < k < 1`.
fn landen_amplitude(u: f64, k: f64, kc: f64) -> f64 {
    let mut a = [0.0_f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0_f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = kc;
    let mut n = 0;
    while n < MAX_AGM_STEPS && c[n].abs() > AGM_TOLERANCE * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = f64::powi(2.0, n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    phi
}
