//! Brute-force numerical routes to `F`, `G` and their expansion constants.
//!
//! Nothing here uses the closed forms of [`crate::specfun`] except
//! [`extract_constant`], whose whole purpose is to probe those closed forms
//! numerically near the poles.
//!
//! * [`fd_third_derivative`]: central differences with a Richardson tableau.
//! * [`abel_f`], [`abel_g`]: the Fourier series
//!   `cot(xi)/2 = sum_{n>=1} sin(2 n xi)` and `1/(2 sin xi) = sum_{k>=0} sin((2k+1) xi)`
//!   differentiated term by term, which gives
//!   `F(xi) = sum n^3 cos(2 n xi)` and `G(xi) = (1/8) sum (2k+1)^3 cos((2k+1) xi)`.
//!   Both diverge; they are damped by `exp(-n lambda)` and extrapolated to
//!   `lambda -> 0`. The damped sums are even in `lambda`, so the extrapolation
//!   runs in `lambda^2`.

use serde::Serialize;

use crate::exec::Execution;
use crate::extrapolation::Tableau;
use crate::specfun::{self, Endpoint};
use crate::{Error, Result};

/// Default finite-difference base step.
pub const DEFAULT_FD_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// Magnitude of the last correction applied by the extrapolation.
    pub error: f64,
}

/// Third derivative of `f` at `x` by the 4-point central stencil
/// `[f(x+2s) - 2 f(x+s) + 2 f(x-s) - f(x-2s)] / 2s^3` at steps `s = 2h, h, h/2, h/4`,
/// Richardson-extrapolated in `s^2` through three elimination levels (`O(h^8)`
/// truncation). `f` is sampled on `[x - 4h, x + 4h]`.
pub fn fd_third_derivative<F>(f: F, x: f64, h: f64) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::StepSize(format!("step h = {h} must be positive")));
    }
    let steps = [2.0 * h, h, h / 2.0, h / 4.0];
    let values: Vec<f64> = steps
        .iter()
        .map(|&s| (f(x + 2.0 * s) - 2.0 * f(x + s) + 2.0 * f(x - s) - f(x - 2.0 * s)) / (2.0 * s * s * s))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::StepSize(format!("non-finite difference quotient at x = {x}")));
    }
    let t = Tableau::build(&steps, &values, 2);
    let value = t.best();
    let corrections = t.final_row_corrections(steps.len() - 1);
    let error = *corrections.last().expect("four rows");
    // A smooth function has corrections that shrink along the row; a kink or
    // jump makes the raw quotients grow like h^-k and the corrections with them.
    let scale = 1e-8 * value.abs().max(1.0);
    let last = (values[3] - values[2]).abs();
    let raw_growth = last > 2.0 * (values[2] - values[1]).abs();
    if raw_growth && last > scale {
        return Err(Error::StepSize(format!(
            "Richardson tableau diverges at x = {x} (input not smooth on the stencil)"
        )));
    }
    Ok(Estimate { value, error })
}

/// Regulator settings for the Abel-damped sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbelSumParams {
    /// Strictly decreasing, positive damping parameters.
    pub lambda_grid: Vec<f64>,
    /// Largest mode index kept.
    pub n_max: u32,
    /// Degree of the fitted polynomial in `lambda^2`.
    pub extrapolation_order: usize,
}

impl Default for AbelSumParams {
    fn default() -> Self {
        Self { lambda_grid: vec![0.1, 0.05, 0.025, 0.0125, 0.00625], n_max: 10_000, extrapolation_order: 4 }
    }
}

impl AbelSumParams {
    pub fn validate(&self) -> Result<()> {
        let grid = &self.lambda_grid;
        if grid.is_empty() {
            return Err(Error::Params("empty lambda grid".into()));
        }
        if grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::Params("lambda values must be positive and finite".into()));
        }
        if grid.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Params("lambda grid must be strictly decreasing".into()));
        }
        let smallest = *grid.last().expect("non-empty");
        if f64::from(self.n_max) * smallest < 30.0 {
            return Err(Error::Params(format!(
                "n_max * min(lambda) = {} < 30; truncated tail is not negligible",
                f64::from(self.n_max) * smallest
            )));
        }
        if self.extrapolation_order >= grid.len() {
            return Err(Error::Params(format!(
                "extrapolation order {} needs at least {} lambda values",
                self.extrapolation_order,
                self.extrapolation_order + 1
            )));
        }
        Ok(())
    }
}

/// Result of an Abel-regularised sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbelEstimate {
    pub value: f64,
    pub error: f64,
    /// Damped sums, one per entry of the lambda grid.
    pub regulated: Vec<f64>,
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.compensation
    }
}

/// `cos(k * xi)` with the product `k * xi` carried to double-double precision.
///
/// For `k` in the thousands the rounding of `k * xi` alone would shift the
/// phase by ~1e-13, which the `k^3` weights amplify well past the oracle's
/// target accuracy.
fn cos_multiple(k: f64, xi: f64) -> f64 {
    let p = k * xi;
    let e = k.mul_add(xi, -p);
    let (s, c) = p.sin_cos();
    c - s * e
}

/// `sum_{n=1}^{n_max} n^3 cos(2 n xi) exp(-n lambda)`.
pub fn damped_sum_f(xi: f64, lambda: f64, n_max: u32) -> f64 {
    let mut acc = NeumaierSum::default();
    for n in 1..=n_max {
        let n = f64::from(n);
        acc.add(n * n * n * cos_multiple(2.0 * n, xi) * (-n * lambda).exp());
    }
    acc.total()
}

/// `(1/8) sum_{m odd, m <= n_max} m^3 cos(m xi) exp(-m lambda)`.
pub fn damped_sum_g(xi: f64, lambda: f64, n_max: u32) -> f64 {
    let mut acc = NeumaierSum::default();
    for m in (1..=n_max).step_by(2) {
        let m = f64::from(m);
        acc.add(m * m * m * cos_multiple(m, xi) * (-m * lambda).exp());
    }
    acc.total() / 8.0
}

fn abel_extrapolate(
    xi: f64,
    params: &AbelSumParams,
    exec: Execution,
    term: fn(f64, f64, u32) -> f64,
) -> Result<AbelEstimate> {
    params.validate()?;
    let regulated = exec.map(&params.lambda_grid, |&l| term(xi, l, params.n_max));
    let t = Tableau::build(&params.lambda_grid, &regulated, 2);
    let order = params.extrapolation_order;
    let value = t.at_order(order);
    let corrections = t.final_row_corrections(order);
    let floor = 1e-9 * value.abs().max(1.0);
    if corrections.windows(2).any(|w| w[1] > w[0] && w[1] > floor) {
        return Err(Error::NonConvergence(format!(
            "lambda extrapolation corrections do not decrease at xi = {xi}: {corrections:?}"
        )));
    }
    Ok(AbelEstimate { value, error: corrections.last().copied().unwrap_or(f64::NAN), regulated })
}

fn check_interior(xi: f64) -> Result<()> {
    let band = specfun::GUARD_BAND;
    if !(xi >= band && xi <= std::f64::consts::PI - band) {
        return Err(Error::Domain(format!("xi = {xi} is outside [{band}, pi - {band}]")));
    }
    Ok(())
}

/// `F(xi)` from the Abel-damped cosine series.
pub fn abel_f(xi: f64, params: &AbelSumParams) -> Result<AbelEstimate> {
    abel_f_with(xi, params, Execution::default())
}

pub fn abel_f_with(xi: f64, params: &AbelSumParams, exec: Execution) -> Result<AbelEstimate> {
    check_interior(xi)?;
    abel_extrapolate(xi, params, exec, damped_sum_f)
}

/// `G(xi)` from the Abel-damped odd-harmonic cosine series.
pub fn abel_g(xi: f64, params: &AbelSumParams) -> Result<AbelEstimate> {
    abel_g_with(xi, params, Execution::default())
}

pub fn abel_g_with(xi: f64, params: &AbelSumParams, exec: Execution) -> Result<AbelEstimate> {
    check_interior(xi)?;
    abel_extrapolate(xi, params, exec, damped_sum_g)
}

/// Which expansion constant to recover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConstantKind {
    FAtZero,
    FAtPi,
    GAtZero,
    GAtPi,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 4] =
        [ConstantKind::FAtZero, ConstantKind::FAtPi, ConstantKind::GAtZero, ConstantKind::GAtPi];

    pub fn endpoint(self) -> Endpoint {
        match self {
            ConstantKind::FAtZero | ConstantKind::GAtZero => Endpoint::Zero,
            ConstantKind::FAtPi | ConstantKind::GAtPi => Endpoint::Pi,
        }
    }

    /// Pole strength removed before extrapolating: `+3/8`, or `-3/8` for `G` at `pi`.
    pub fn pole(self) -> f64 {
        match self {
            ConstantKind::GAtPi => -0.375,
            _ => 0.375,
        }
    }

    /// Signed offset from the endpoint into the interior at distance `s`.
    pub fn offset(self, s: f64) -> f64 {
        match self.endpoint() {
            Endpoint::Zero => s,
            Endpoint::Pi => -s,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ConstantKind::FAtZero => "F-at-0",
            ConstantKind::FAtPi => "F-at-pi",
            ConstantKind::GAtZero => "G-at-0",
            ConstantKind::GAtPi => "G-at-pi",
        }
    }

    /// Closed-form value at the signed offset `u` from the endpoint.
    fn closed_form(self, u: f64) -> f64 {
        match self {
            ConstantKind::FAtZero | ConstantKind::FAtPi => specfun::f_at_offset(self.endpoint(), u),
            ConstantKind::GAtZero | ConstantKind::GAtPi => specfun::g_at_offset(self.endpoint(), u),
        }
    }
}

/// Damping values for [`abel_endpoint_constant`].
pub fn default_endpoint_lambdas() -> Vec<f64> {
    (0..5).map(|k| 0.5f64.powi(k)).collect()
}

/// Expansion constant read off the damped series at the endpoint itself.
///
/// At `xi = 0` the damped sums are Laplace-type sums with a pure pole in
/// `lambda`: `sum n^3 e^{-n lambda} = 6 / lambda^4 + zeta(-3) + O(lambda^2)`, and
/// the odd-index sum carries `(1 - 2^3) zeta(-3)`. The constant is the same
/// one that follows the `xi^-4` pole, so subtracting `pole / lambda^4` and
/// extrapolating `lambda -> 0` recovers it without touching the closed forms.
pub fn abel_endpoint_constant(kind: ConstantKind, lambdas: &[f64], n_max: u32) -> Result<Estimate> {
    let params =
        AbelSumParams { lambda_grid: lambdas.to_vec(), n_max, extrapolation_order: lambdas.len().saturating_sub(1) };
    params.validate()?;
    let xi = kind.endpoint().value();
    let (sum, pole): (fn(f64, f64, u32) -> f64, f64) = match kind {
        ConstantKind::FAtZero | ConstantKind::FAtPi => (damped_sum_f, 6.0),
        ConstantKind::GAtZero => (damped_sum_g, 0.375),
        ConstantKind::GAtPi => (damped_sum_g, -0.375),
    };
    let values: Vec<f64> = lambdas.iter().map(|&l| sum(xi, l, n_max) - pole / l.powi(4)).collect();
    let t = Tableau::build(lambdas, &values, 2);
    let corrections = t.final_row_corrections(lambdas.len() - 1);
    Ok(Estimate { value: t.best(), error: corrections.last().copied().unwrap_or(f64::NAN) })
}

/// Default distance grid `0.1 * 2^-k`, `k = 0..4`.
pub fn default_constant_grid() -> Vec<f64> {
    (0..4).map(|k| 0.1 * 0.5f64.powi(k)).collect()
}

/// Expansion constant from the closed forms on [`default_constant_grid`].
pub fn extract_constant(kind: ConstantKind) -> Result<Estimate> {
    extract_constant_with(kind, &default_constant_grid(), |u| kind.closed_form(u))
}

/// Subtracts the pole from `eval(offset(s))` on the (decreasing) distance grid
/// and extrapolates to `s = 0` in `s^2`.
///
/// The first three samples must show `O(s^2)` convergence (successive
/// differences shrinking by a factor 4 +- 1 per halving of `s`).
pub fn extract_constant_with<E>(kind: ConstantKind, distances: &[f64], eval: E) -> Result<Estimate>
where
    E: Fn(f64) -> f64,
{
    if distances.len() < 3 {
        return Err(Error::Params("need at least three distances".into()));
    }
    if distances.windows(2).any(|w| !(w[1] < w[0] && w[1] > 0.0)) {
        return Err(Error::Params("distances must be positive and strictly decreasing".into()));
    }
    let values: Vec<f64> = distances
        .iter()
        .map(|&s| {
            let u = kind.offset(s);
            eval(u) - kind.pole() / u.powi(4)
        })
        .collect();
    let d1 = values[0] - values[1];
    let d2 = values[1] - values[2];
    let sq = |s: f64| s * s;
    let expected = (sq(distances[0]) - sq(distances[1])) / (sq(distances[1]) - sq(distances[2]));
    let observed = d1 / d2;
    let ratio_ok = (observed - expected).abs() <= 0.25 * expected;
    if !ratio_ok {
        return Err(Error::NonConvergence(format!(
            "{}: residuals are not O(s^2) (difference ratio {observed:.3}, expected {expected:.3})",
            kind.label()
        )));
    }
    let t = Tableau::build(distances, &values, 2);
    let corrections = t.final_row_corrections(distances.len() - 1);
    Ok(Estimate { value: t.best(), error: corrections.last().copied().unwrap_or(f64::NAN) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn third_derivative_of_cube() {
        for h in [0.05, 0.3, 1.0] {
            let d = fd_third_derivative(|x| x * x * x, 1.7, h).unwrap();
            assert_relative_eq!(d.value, 6.0, max_relative = 1e-10);
        }
        // roundoff-limited at the default step
        let d = fd_third_derivative(|x| x * x * x, 1.7, DEFAULT_FD_STEP).unwrap();
        assert_relative_eq!(d.value, 6.0, max_relative = 1e-7);
    }

    #[test]
    fn third_derivative_of_sine() {
        let d = fd_third_derivative(f64::sin, 0.0, DEFAULT_FD_STEP).unwrap();
        assert_relative_eq!(d.value, -1.0, max_relative = 1e-10);
    }

    #[test]
    fn third_derivative_of_half_cot_at_midpoint() {
        let d = fd_third_derivative(|x| 0.5 / x.tan(), PI / 2.0, DEFAULT_FD_STEP).unwrap();
        assert_relative_eq!(d.value, -1.0, max_relative = 1e-9);
        assert_relative_eq!(-d.value / 8.0, specfun::f_closed(PI / 2.0), max_relative = 1e-9);
    }

    #[test]
    fn third_derivative_rejects_jumps_and_bad_steps() {
        let step = |x: f64| if x >= 0.0 { 1.0 } else { 0.0 };
        assert!(matches!(fd_third_derivative(step, 0.0, 1e-2), Err(Error::StepSize(_))));
        assert!(fd_third_derivative(f64::sin, 0.0, 0.0).is_err());
        assert!(fd_third_derivative(f64::sin, 0.0, -1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(AbelSumParams::default().validate().is_ok());
        let mut p = AbelSumParams { lambda_grid: vec![0.05, 0.1], ..AbelSumParams::default() };
        assert!(p.validate().is_err());
        p.lambda_grid = vec![0.1, 0.001];
        p.extrapolation_order = 1;
        assert!(p.validate().is_err(), "tail not negligible");
        p.lambda_grid = vec![0.1, 0.05];
        p.extrapolation_order = 2;
        assert!(p.validate().is_err(), "order too high");
        p.lambda_grid = vec![0.1, -0.05];
        assert!(p.validate().is_err());
    }

    #[test]
    fn abel_f_midpoint_three_lambdas() {
        let p = AbelSumParams { lambda_grid: vec![0.1, 0.05, 0.025], n_max: 10_000, extrapolation_order: 2 };
        let est = abel_f(PI / 2.0, &p).unwrap();
        assert_relative_eq!(est.value, 0.125, epsilon = 1e-7);
    }

    #[test]
    fn abel_g_vanishes_at_midpoint() {
        let est = abel_g(PI / 2.0, &AbelSumParams::default()).unwrap();
        assert!(est.value.abs() < 1e-8, "{}", est.value);
    }

    #[test]
    fn abel_matches_closed_forms() {
        let p = AbelSumParams::default();
        let f = abel_f(PI / 3.0, &p).unwrap();
        assert!((f.value - specfun::f_closed(PI / 3.0)).abs() < 1e-6);
        let g1 = abel_g(PI / 3.0, &p).unwrap();
        let g2 = abel_g(2.0 * PI / 3.0, &p).unwrap();
        assert!((g1.value - specfun::g_closed(PI / 3.0)).abs() < 1e-6);
        assert!((g2.value + g1.value).abs() < 1e-6);
    }

    #[test]
    fn abel_rejects_guard_band() {
        let p = AbelSumParams::default();
        assert!(abel_f(1e-4, &p).is_err());
        assert!(abel_g(PI, &p).is_err());
    }

    #[test]
    fn single_lambda_bias_is_quadratic() {
        let xi = 1.1;
        let limit = abel_f(xi, &AbelSumParams::default()).unwrap().value;
        let b1 = (damped_sum_f(xi, 0.1, 10_000) - limit).abs();
        let b2 = (damped_sum_f(xi, 0.05, 10_000) - limit).abs();
        let slope = (b1 / b2).log2();
        assert!(slope >= 1.8, "slope {slope}");
    }

    #[test]
    fn constants() {
        let expect = [1.0 / 120.0, 1.0 / 120.0, -7.0 / 960.0, 7.0 / 960.0];
        for (kind, want) in ConstantKind::ALL.iter().zip(expect) {
            let est = extract_constant(*kind).unwrap();
            assert!((est.value - want).abs() < 1e-7, "{kind:?}: {}", est.value);
        }
    }

    #[test]
    fn endpoint_constants_from_damped_sums() {
        let expect = [1.0 / 120.0, 1.0 / 120.0, -7.0 / 960.0, 7.0 / 960.0];
        for (kind, want) in ConstantKind::ALL.iter().zip(expect) {
            let est = abel_endpoint_constant(*kind, &default_endpoint_lambdas(), 10_000).unwrap();
            assert!((est.value - want).abs() < 1e-10, "{kind:?}: {}", est.value);
        }
    }

    #[test]
    fn constant_extraction_detects_wrong_pole() {
        // Removing the wrong pole leaves an s^-4 residual, not s^2.
        let r = extract_constant_with(ConstantKind::FAtZero, &default_constant_grid(), |u| {
            specfun::f_at_offset(Endpoint::Zero, u) * 2.0
        });
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }
}
