//! The position functions of the plate correlators.
//!
//! ```text
//! F(xi) = -(1/8) d^3/dxi^3 [ cot(xi) / 2 ]  = (3/8) csc^4 - (1/4) csc^2
//! G(xi) = -(1/8) d^3/dxi^3 [ 1 / (2 sin xi) ] = csc cot ((3/8) csc^2 - 1/16)
//! ```
//!
//! Both blow up as the fourth inverse power of the distance to the endpoints
//! `xi = 0` and `xi = pi`. Within [`GUARD_BAND`] of an endpoint, [`eval_f`] and
//! [`eval_g`] switch to the two-term endpoint expansion. The regular part that
//! remains after removing the pole is available through [`f_remainder`] and
//! [`g_remainder`], which are evaluated without cancellation near the poles.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::Serialize;

use crate::{Error, Result};

/// Half-width of the neighbourhood around `0` and `pi` handled by the expansions.
pub const GUARD_BAND: f64 = 1e-3;

/// Position in the cavity in units of the plate separation, `xi = pi z / a`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Xi(f64);

impl Xi {
    /// Interior point, `0 < xi < pi`.
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < PI {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!("xi = {value} is outside (0, pi)")))
        }
    }

    /// `xi = pi z / a` for `0 < z < a`.
    pub fn from_position(z: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("plate separation a = {a} must be positive")));
        }
        if !(z > 0.0 && z < a) {
            return Err(Error::Domain(format!("z = {z} is outside (0, {a})")));
        }
        Self::new(PI * z / a)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Nearest endpoint and the signed offset `xi - center`.
    pub fn nearest_endpoint(self) -> (Endpoint, f64) {
        if self.0 <= PI / 2.0 {
            (Endpoint::Zero, self.0)
        } else {
            (Endpoint::Pi, self.0 - PI)
        }
    }
}

/// One of the two singular points of `F` and `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Endpoint {
    Zero,
    Pi,
}

impl Endpoint {
    pub fn value(self) -> f64 {
        match self {
            Endpoint::Zero => 0.0,
            Endpoint::Pi => PI,
        }
    }

    /// Accepts `0` or `pi` (to within a few ulps of `std::f64::consts::PI`).
    pub fn from_center(center: f64) -> Result<Self> {
        if center == 0.0 {
            Ok(Endpoint::Zero)
        } else if (center - PI).abs() <= 4.0 * f64::EPSILON {
            Ok(Endpoint::Pi)
        } else {
            Err(Error::Domain(format!("expansion center {center} is neither 0 nor pi")))
        }
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    ClosedForm,
    /// Inside the guard band; the two-term expansion was used.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    pub regime: Regime,
}

impl Evaluation {
    pub fn is_asymptotic(&self) -> bool {
        self.regime == Regime::Asymptotic
    }
}

/// `singular / (xi - center)^4 + constant + O((xi - center)^error_order)`.
///
/// The coefficients are rational, so they are held exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesExpansion {
    pub center: Endpoint,
    pub singular: Ratio<i64>,
    pub constant: Ratio<i64>,
    pub error_order: u32,
}

impl SeriesExpansion {
    pub fn center_value(&self) -> f64 {
        self.center.value()
    }

    pub fn singular_coeff(&self) -> f64 {
        ratio_to_f64(self.singular)
    }

    pub fn constant_term(&self) -> f64 {
        ratio_to_f64(self.constant)
    }

    /// Two-term value at signed offset `u = xi - center`.
    pub fn eval_offset(&self, u: f64) -> f64 {
        self.singular_coeff() / u.powi(4) + self.constant_term()
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Endpoint expansion of `F`; identical at both endpoints.
pub fn expand_f(center: f64) -> Result<SeriesExpansion> {
    Ok(f_expansion(Endpoint::from_center(center)?))
}

/// Endpoint expansion of `G`; the pole and constant flip sign at `pi`.
pub fn expand_g(center: f64) -> Result<SeriesExpansion> {
    Ok(g_expansion(Endpoint::from_center(center)?))
}

pub fn f_expansion(center: Endpoint) -> SeriesExpansion {
    SeriesExpansion { center, singular: Ratio::new(3, 8), constant: Ratio::new(1, 120), error_order: 2 }
}

pub fn g_expansion(center: Endpoint) -> SeriesExpansion {
    let sign = match center {
        Endpoint::Zero => 1,
        Endpoint::Pi => -1,
    };
    SeriesExpansion { center, singular: Ratio::new(3 * sign, 8), constant: Ratio::new(-7 * sign, 960), error_order: 2 }
}

fn f_from_sin(sin: f64) -> f64 {
    let csc2 = 1.0 / (sin * sin);
    csc2 * (0.375 * csc2 - 0.25)
}

fn g_from_trig(sin: f64, cos: f64) -> f64 {
    let csc = 1.0 / sin;
    let cot = cos / sin;
    csc * cot * (0.375 * csc * csc - 0.0625)
}

/// Closed form of `F` without domain checks or guard band.
pub fn f_closed(xi: f64) -> f64 {
    f_from_sin(xi.sin())
}

/// Closed form of `G` without domain checks or guard band.
pub fn g_closed(xi: f64) -> f64 {
    let (s, c) = xi.sin_cos();
    g_from_trig(s, c)
}

/// Closed form of `F` at `center + u`, with the trigonometry done on `u` so
/// that no precision is lost forming `pi + u`.
pub fn f_at_offset(center: Endpoint, u: f64) -> f64 {
    // F is even and pi-periodic
    let _ = center;
    f_from_sin(u.sin())
}

/// Closed form of `G` at `center + u`; see [`f_at_offset`].
pub fn g_at_offset(center: Endpoint, u: f64) -> f64 {
    let (s, c) = u.sin_cos();
    match center {
        Endpoint::Zero => g_from_trig(s, c),
        // sin(pi + u) = -sin u, cos(pi + u) = -cos u
        Endpoint::Pi => g_from_trig(-s, -c),
    }
}

/// `F(xi)` for `0 < xi < pi`, switching to the expansion inside the guard band.
pub fn eval_f(xi: f64) -> Result<Evaluation> {
    let xi = Xi::new(xi)?;
    let (end, u) = xi.nearest_endpoint();
    Ok(if u.abs() < GUARD_BAND {
        Evaluation { value: f_expansion(end).eval_offset(u), regime: Regime::Asymptotic }
    } else {
        Evaluation { value: f_closed(xi.value()), regime: Regime::ClosedForm }
    })
}

/// `G(xi)` for `0 < xi < pi`, switching to the expansion inside the guard band.
pub fn eval_g(xi: f64) -> Result<Evaluation> {
    let xi = Xi::new(xi)?;
    let (end, u) = xi.nearest_endpoint();
    Ok(if u.abs() < GUARD_BAND {
        Evaluation { value: g_expansion(end).eval_offset(u), regime: Regime::Asymptotic }
    } else {
        Evaluation { value: g_closed(xi.value()), regime: Regime::ClosedForm }
    })
}

// Regular parts from the partial-fraction sums
//   F(xi) = (3/8) sum_n (xi - n pi)^-4,   G(xi) = (3/8) sum_n (-1)^n (xi - n pi)^-4,
// expanded in powers of u = xi about xi = 0:
//   F - (3/8) u^-4 = (3/4) sum_j C(2j+3, 3) zeta(2j+4) (u/pi)^{2j} / pi^4
// and the same with -eta in place of zeta for G.
const SERIES_TERMS: usize = 40;
const SERIES_RADIUS: f64 = 1.0;

struct RegularSeries {
    f: [f64; SERIES_TERMS],
    g: [f64; SERIES_TERMS],
}

fn regular_series() -> &'static RegularSeries {
    static SERIES: OnceLock<RegularSeries> = OnceLock::new();
    SERIES.get_or_init(|| {
        let mut f = [0.0; SERIES_TERMS];
        let mut g = [0.0; SERIES_TERMS];
        for j in 0..SERIES_TERMS {
            let s = 2 * j as i32 + 4;
            let m = (2 * j + 3) as f64;
            let binom = m * (m - 1.0) * (m - 2.0) / 6.0;
            let zeta = zeta_even(s);
            let eta = (1.0 - 2f64.powi(1 - s)) * zeta;
            let scale = 0.75 * binom / PI.powi(s);
            f[j] = scale * zeta;
            g[j] = -scale * eta;
        }
        RegularSeries { f, g }
    })
}

/// Riemann zeta at an integer `s >= 4` by Euler-Maclaurin with 20 explicit terms.
fn zeta_even(s: i32) -> f64 {
    const N: i32 = 20;
    // B_2, B_4, B_6, B_8, B_10 over (2k)!
    const BERNOULLI_OVER_FACTORIAL: [f64; 5] =
        [1.0 / 6.0 / 2.0, -1.0 / 30.0 / 24.0, 1.0 / 42.0 / 720.0, -1.0 / 30.0 / 40320.0, 5.0 / 66.0 / 3628800.0];
    let sf = f64::from(s);
    let n = f64::from(N);
    let head: f64 = (1..N).rev().map(|k| f64::from(k).powi(-s)).sum();
    let mut tail = n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powi(-s);
    let mut rising = sf;
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let k = k as i32 + 1;
        tail += b * rising * n.powi(-s - 2 * k + 1);
        rising *= (sf + f64::from(2 * k - 1)) * (sf + f64::from(2 * k));
    }
    head + tail
}

fn eval_series(coeffs: &[f64; SERIES_TERMS], u: f64) -> f64 {
    // j >= 1 only: the j = 0 term is the expansion constant
    let u2 = u * u;
    coeffs[1..].iter().rev().fold(0.0, |acc, &c| acc * u2 + c) * u2
}

/// `F(center + u) - (3/8) u^-4 - 1/120`, the part the two-term expansion drops.
///
/// Behaves as `u^2 / 126` for small `u`.
pub fn f_remainder(center: Endpoint, u: f64) -> f64 {
    if u.abs() <= SERIES_RADIUS {
        eval_series(&regular_series().f, u)
    } else {
        let e = f_expansion(center);
        f_at_offset(center, u) - e.eval_offset(u)
    }
}

/// `G(center + u)` minus its two-term expansion about `center`.
pub fn g_remainder(center: Endpoint, u: f64) -> f64 {
    if u.abs() <= SERIES_RADIUS {
        let r = eval_series(&regular_series().g, u);
        match center {
            Endpoint::Zero => r,
            // G(pi + u) = -G(u)
            Endpoint::Pi => -r,
        }
    } else {
        let e = g_expansion(center);
        g_at_offset(center, u) - e.eval_offset(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn midpoint_values() {
        assert_relative_eq!(eval_f(PI / 2.0).unwrap().value, 0.125, epsilon = 1e-15);
        assert!(eval_g(PI / 2.0).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn endpoints_are_domain_errors() {
        for xi in [0.0, PI, -0.1, 4.0, f64::NAN] {
            assert!(matches!(eval_f(xi), Err(Error::Domain(_))));
            assert!(matches!(eval_g(xi), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn guard_band_switches_regime() {
        let inside = eval_f(5e-4).unwrap();
        assert!(inside.is_asymptotic());
        assert_relative_eq!(inside.value * 5e-4f64.powi(4), 0.375, epsilon = 1e-12);
        let near_pi = eval_g(PI - 5e-4).unwrap();
        assert!(near_pi.is_asymptotic());
        assert!(!eval_f(0.5).unwrap().is_asymptotic());
    }

    #[test]
    fn pole_strength() {
        for s in [1e-2, 3e-3, 1.5e-3] {
            assert_relative_eq!(eval_f(s).unwrap().value * s.powi(4), 0.375, epsilon = 1e-4);
            assert_relative_eq!(eval_g(s).unwrap().value * s.powi(4), 0.375, epsilon = 1e-4);
            let xi = PI - s;
            let u = xi - PI;
            assert_relative_eq!(eval_g(xi).unwrap().value * u.powi(4), -0.375, epsilon = 1e-4);
        }
    }

    #[test]
    fn expansions() {
        let f0 = expand_f(0.0).unwrap();
        let fpi = expand_f(PI).unwrap();
        assert_eq!(f0.singular, Ratio::new(3, 8));
        assert_eq!(f0.constant, Ratio::new(1, 120));
        assert_eq!((fpi.singular, fpi.constant), (f0.singular, f0.constant));
        let g0 = expand_g(0.0).unwrap();
        let gpi = expand_g(PI).unwrap();
        assert_eq!((g0.singular, g0.constant), (Ratio::new(3, 8), Ratio::new(-7, 960)));
        assert_eq!((gpi.singular, gpi.constant), (Ratio::new(-3, 8), Ratio::new(7, 960)));
        for e in [f0, fpi, g0, gpi] {
            assert_eq!(e.error_order, 2);
        }
        assert!(expand_f(1.0).is_err());
        assert!(expand_g(PI / 2.0).is_err());
    }

    #[test]
    fn zeta_values() {
        assert_relative_eq!(zeta_even(4), PI.powi(4) / 90.0, max_relative = 1e-15);
        assert_relative_eq!(zeta_even(6), PI.powi(6) / 945.0, max_relative = 1e-15);
        assert_relative_eq!(zeta_even(8), PI.powi(8) / 9450.0, max_relative = 1e-15);
        assert_relative_eq!(zeta_even(40), 1.0 + 2f64.powi(-40), max_relative = 1e-15);
    }

    #[test]
    fn remainder_constants_match_expansions() {
        let s = regular_series();
        assert_relative_eq!(s.f[0], 1.0 / 120.0, max_relative = 1e-14);
        assert_relative_eq!(s.g[0], -7.0 / 960.0, max_relative = 1e-14);
        assert_relative_eq!(s.f[1], 1.0 / 126.0, max_relative = 1e-14);
    }

    #[test]
    fn remainder_agrees_with_closed_form_away_from_poles() {
        // Where the subtraction is benign both routes must agree.
        for &u in &[0.2, 0.5, 0.9, 1.0] {
            for end in [Endpoint::Zero, Endpoint::Pi] {
                let sgn = if end == Endpoint::Zero { 1.0 } else { -1.0 };
                let uu = sgn * u;
                let direct_f = f_at_offset(end, uu) - f_expansion(end).eval_offset(uu);
                let direct_g = g_at_offset(end, uu) - g_expansion(end).eval_offset(uu);
                assert_relative_eq!(f_remainder(end, uu), direct_f, max_relative = 1e-9);
                assert_relative_eq!(g_remainder(end, uu), direct_g, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn remainder_is_continuous_at_series_radius() {
        let below = f_remainder(Endpoint::Zero, SERIES_RADIUS);
        let above = f_remainder(Endpoint::Zero, SERIES_RADIUS * (1.0 + 1e-12));
        assert_relative_eq!(below, above, max_relative = 1e-10);
        let below = g_remainder(Endpoint::Pi, -SERIES_RADIUS);
        let above = g_remainder(Endpoint::Pi, -SERIES_RADIUS * (1.0 + 1e-12));
        assert_relative_eq!(below, above, max_relative = 1e-10);
    }

    #[test]
    fn offset_form_matches_direct_form() {
        for &xi in &[0.4, 1.3, 2.2, 2.9] {
            let (end, u) = Xi::new(xi).unwrap().nearest_endpoint();
            assert_relative_eq!(f_at_offset(end, u), f_closed(xi), max_relative = 1e-12);
            assert_relative_eq!(g_at_offset(end, u), g_closed(xi), max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    #[test]
    fn xi_from_position() {
        assert_relative_eq!(Xi::from_position(0.25, 1.0).unwrap().value(), PI / 4.0);
        assert!(Xi::from_position(1.0, 1.0).is_err());
        assert!(Xi::from_position(0.5, -1.0).is_err());
    }
}
