//! Verification suites: each module's invariants as named checks with a
//! measured value, a tolerance and a pass flag.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary_modes::{self, ModeSpec, Plate, PlateKind, Polarization, Species, Vec3};
use crate::correlators::{Setup, SetupKind};
use crate::exec::Execution;
use crate::pressure::{self, Side, ThreePlateConfig};
use crate::specfun::{self, Endpoint};
use crate::spectral_oracle::{self, AbelSumParams, ConstantKind};
use crate::{Error, Result};

/// Seed of the transverse wavenumbers drawn by the modes suite.
pub const MODES_SEED: u64 = 0x5EED_CA51;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Oracle,
    Modes,
    Pressure,
    Identity,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 5] = [Suite::Specfun, Suite::Oracle, Suite::Modes, Suite::Pressure, Suite::Identity];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Oracle => "oracle",
            Suite::Modes => "modes",
            Suite::Pressure => "pressure",
            Suite::Identity => "identity",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.label() == lower)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

/// How `measured` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// `measured <= tolerance`
    Le,
    /// `measured >= tolerance`
    Ge,
    /// `measured > tolerance`
    Gt,
}

impl Comparison {
    fn holds(self, measured: f64, tolerance: f64) -> bool {
        match self {
            Comparison::Le => measured <= tolerance,
            Comparison::Ge => measured >= tolerance,
            Comparison::Gt => measured > tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    /// `None` when the quantity could not be computed or is not finite.
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: &str, measured: Result<f64>, comparison: Comparison, tolerance: f64) -> Self {
        let (measured, detail) = match measured {
            Ok(v) if v.is_finite() => (Some(v), None),
            Ok(v) => (None, Some(format!("non-finite value {v}"))),
            Err(e) => (None, Some(e.to_string())),
        };
        let pass = measured.is_some_and(|m| comparison.holds(m, tolerance));
        Self { suite, name: name.to_string(), measured, tolerance, comparison, pass, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl Report {
    fn from_checks(suite: Suite, checks: Vec<Check>) -> Self {
        let failed = checks.iter().filter(|c| !c.pass).count();
        Self { suite, passed: failed == 0, total: checks.len(), failed, checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn run(suite: Suite, exec: Execution) -> Report {
    let checks = match suite {
        Suite::Specfun => specfun_checks(exec),
        Suite::Oracle => oracle_checks(exec),
        Suite::Modes => modes_checks(exec),
        Suite::Pressure => pressure_checks(exec),
        Suite::Identity => identity_checks(),
        Suite::All => Suite::INDIVIDUAL.into_iter().flat_map(|s| run(s, exec).checks).collect(),
    };
    Report::from_checks(suite, checks)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Params("slope fit needs at least two points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0) || y == 0.0 || !y.is_finite()) {
        return Err(Error::Domain("slope fit needs positive x and finite non-zero y".into()));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.abs().ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `count` points from `lo` to `hi`, geometrically spaced.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let r = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (r * i as f64).exp()).collect()
}

/// `count` points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

type Remainder = fn(Endpoint, f64) -> f64;
type DampedSum = fn(f64, f64, u32) -> f64;
type AbelLimit = fn(f64, &AbelSumParams, Execution) -> Result<spectral_oracle::AbelEstimate>;

fn rel(measured: f64, exact: f64) -> f64 {
    (measured - exact).abs() / exact.abs()
}

fn specfun_checks(exec: Execution) -> Vec<Check> {
    use Comparison::Le;
    let s = Suite::Specfun;
    let mut out = Vec::new();

    out.push(Check::new(s, "f_midpoint", specfun::eval_f(PI / 2.0).map(|e| (e.value - 0.125).abs()), Le, 1e-15));
    out.push(Check::new(s, "g_midpoint", specfun::eval_g(PI / 2.0).map(|e| e.value.abs()), Le, 1e-15));

    let fd_grid = linear_grid(0.3, PI - 0.3, 1000);
    let fd_f = exec.map(&fd_grid, |&x| {
        let d = spectral_oracle::fd_third_derivative(|t| 0.5 / t.tan(), x, spectral_oracle::DEFAULT_FD_STEP)?;
        Ok((specfun::eval_f(x)?.value + d.value / 8.0).abs())
    });
    out.push(Check::new(s, "f_vs_finite_difference_max_abs", max_of(fd_f), Le, 1e-8));
    let fd_g = exec.map(&fd_grid, |&x| {
        let d = spectral_oracle::fd_third_derivative(|t| 0.5 / t.sin(), x, spectral_oracle::DEFAULT_FD_STEP)?;
        Ok((specfun::eval_g(x)?.value + d.value / 8.0).abs())
    });
    out.push(Check::new(s, "g_vs_finite_difference_max_abs", max_of(fd_g), Le, 1e-8));

    let refl = linear_grid(0.01, PI / 2.0, 200);
    let f_refl = refl.iter().map(|&x| {
        let (a, b) = (specfun::eval_f(x)?.value, specfun::eval_f(PI - x)?.value);
        Ok((a - b).abs() / a.abs().max(1.0))
    });
    out.push(Check::new(s, "f_reflection_max_rel", max_of(f_refl), Le, 1e-12));
    let g_refl = refl.iter().map(|&x| {
        let (a, b) = (specfun::eval_g(x)?.value, specfun::eval_g(PI - x)?.value);
        Ok((a + b).abs() / a.abs().max(1.0))
    });
    out.push(Check::new(s, "g_antisymmetry_max_rel", max_of(g_refl), Le, 1e-12));

    let exact = [
        (Ratio::new(3, 8), Ratio::new(1, 120)),
        (Ratio::new(3, 8), Ratio::new(1, 120)),
        (Ratio::new(3, 8), Ratio::new(-7, 960)),
        (Ratio::new(-3, 8), Ratio::new(7, 960)),
    ];
    for (kind, (singular, constant)) in ConstantKind::ALL.into_iter().zip(exact) {
        let exp = match kind {
            ConstantKind::FAtZero | ConstantKind::FAtPi => specfun::f_expansion(kind.endpoint()),
            ConstantKind::GAtZero | ConstantKind::GAtPi => specfun::g_expansion(kind.endpoint()),
        };
        let mismatch = u8::from(exp.singular != singular || exp.constant != constant || exp.error_order != 2);
        out.push(Check::new(
            s,
            &format!("expansion_{}_coefficients_mismatch", kind.label()),
            Ok(f64::from(mismatch)),
            Le,
            0.0,
        ));
        let numeric =
            spectral_oracle::extract_constant(kind).map(|e| (e.value - specfun::ratio_to_f64(constant)).abs());
        out.push(Check::new(s, &format!("constant_{}_extrapolated_abs", kind.label()), numeric, Le, 1e-6));
    }

    let xs = geometric_grid(1e-3, 1e-1, 21);
    let remainders: [(&str, Remainder, Endpoint, f64); 4] = [
        ("f_at_zero", specfun::f_remainder, Endpoint::Zero, 1.0),
        ("f_at_pi", specfun::f_remainder, Endpoint::Pi, -1.0),
        ("g_at_zero", specfun::g_remainder, Endpoint::Zero, 1.0),
        ("g_at_pi", specfun::g_remainder, Endpoint::Pi, -1.0),
    ];
    for (label, rem, center, dir) in remainders {
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, rem(center, dir * x))).collect();
        let slope = loglog_slope(&pts).map(|m| (m - 2.0).abs());
        out.push(Check::new(s, &format!("remainder_slope_{label}_minus_2"), slope, Le, 0.1));
    }
    out
}

fn oracle_checks(exec: Execution) -> Vec<Check> {
    use Comparison::{Ge, Le};
    let s = Suite::Oracle;
    let params = AbelSumParams::default();
    let mut out = Vec::new();

    let grid = linear_grid(0.3, PI - 0.3, 50);
    let f = grid
        .iter()
        .map(|&x| Ok((spectral_oracle::abel_f_with(x, &params, exec)?.value - specfun::eval_f(x)?.value).abs()));
    out.push(Check::new(s, "abel_f_vs_closed_max_abs", max_of(f), Le, 1e-6));
    let g = grid
        .iter()
        .map(|&x| Ok((spectral_oracle::abel_g_with(x, &params, exec)?.value - specfun::eval_g(x)?.value).abs()));
    out.push(Check::new(s, "abel_g_vs_closed_max_abs", max_of(g), Le, 1e-6));

    let mid = spectral_oracle::abel_f_with(PI / 2.0, &params, exec).map(|e| (e.value - 0.125).abs());
    out.push(Check::new(s, "abel_f_midpoint_abs", mid, Le, 1e-6));
    let mid = spectral_oracle::abel_g_with(PI / 2.0, &params, exec).map(|e| e.value.abs());
    out.push(Check::new(s, "abel_g_midpoint_abs", mid, Le, 1e-6));
    let anti = (|| {
        let a = spectral_oracle::abel_g_with(PI / 3.0, &params, exec)?.value;
        let b = spectral_oracle::abel_g_with(2.0 * PI / 3.0, &params, exec)?.value;
        Ok((a + b).abs())
    })();
    out.push(Check::new(s, "abel_g_antisymmetry_abs", anti, Le, 1e-6));

    let sums: [(&str, DampedSum, AbelLimit); 2] = [
        ("f", spectral_oracle::damped_sum_f, spectral_oracle::abel_f_with),
        ("g", spectral_oracle::damped_sum_g, spectral_oracle::abel_g_with),
    ];
    for (label, sum, abel) in sums {
        let xi = 1.1;
        let slope = abel(xi, &params, exec).and_then(|limit| {
            let pts: Vec<(f64, f64)> =
                [0.1, 0.05, 0.025].iter().map(|&l| (l, sum(xi, l, params.n_max) - limit.value)).collect();
            loglog_slope(&pts)
        });
        out.push(Check::new(s, &format!("regulator_bias_slope_{label}"), slope, Ge, 1.8));
    }

    // p(x) = x^4 - 2x^3 + x, p''' = 24x - 12. The stencil is exact for degree
    // <= 4 at any step; a wide one keeps roundoff (~eps |p| / h^3) out of the way.
    let poly = linear_grid(-2.0, 3.0, 11).into_iter().map(|x| {
        let p = |t: f64| t.powi(4) - 2.0 * t.powi(3) + t;
        let exact = 24.0 * x - 12.0;
        let d = spectral_oracle::fd_third_derivative(p, x, 0.25)?;
        Ok((d.value - exact).abs() / exact.abs().max(1.0))
    });
    out.push(Check::new(s, "fd_quartic_max_rel", max_of(poly), Le, 1e-10));
    let sin = spectral_oracle::fd_third_derivative(f64::sin, 0.0, spectral_oracle::DEFAULT_FD_STEP)
        .map(|d| (d.value + 1.0).abs());
    out.push(Check::new(s, "fd_sin_at_zero_abs", sin, Le, 1e-8));
    let cot = spectral_oracle::fd_third_derivative(|t| 0.5 / t.tan(), PI / 2.0, spectral_oracle::DEFAULT_FD_STEP)
        .map(|d| (d.value + 1.0).abs());
    out.push(Check::new(s, "fd_half_cot_at_midpoint_abs", cot, Le, 1e-8));

    let exact = [1.0 / 120.0, 1.0 / 120.0, -7.0 / 960.0, 7.0 / 960.0];
    for (kind, want) in ConstantKind::ALL.into_iter().zip(exact) {
        let est =
            spectral_oracle::abel_endpoint_constant(kind, &spectral_oracle::default_endpoint_lambdas(), params.n_max)
                .map(|e| (e.value - want).abs());
        out.push(Check::new(s, &format!("damped_sum_constant_{}_abs", kind.label()), est, Le, 1e-6));
    }
    out
}

/// Twenty seeded transverse wavevectors with `|k| in [0.1, 10] pi / a`.
pub fn seeded_transverse_wavevectors(a: f64, seed: u64, count: usize) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(0.1..10.0) * PI / a;
            let phi = rng.random_range(0.0..2.0 * PI);
            [k * phi.cos(), k * phi.sin()]
        })
        .collect()
}

/// All valid modes with `n <= n_max`, both polarizations, over `k_perp`.
pub fn mode_family(setup: &Setup, n_max: u32, k_perp: &[[f64; 2]]) -> Vec<ModeSpec> {
    let mut modes = Vec::new();
    for n in 0..=n_max {
        for &k in k_perp {
            for pol in Polarization::BOTH {
                if let Ok(spec) = ModeSpec::new(*setup, n, k, pol) {
                    modes.push(spec);
                }
            }
        }
    }
    modes
}

const MODE_SAMPLES: usize = 16;

fn modes_checks(exec: Execution) -> Vec<Check> {
    use Comparison::Le;
    let s = Suite::Modes;
    let mut out = Vec::new();
    for kind in [SetupKind::ConductorConductor, SetupKind::ConductorPermeable] {
        let setup = Setup::new(kind, 1.0).expect("unit separation");
        let k_perp = seeded_transverse_wavevectors(setup.a(), MODES_SEED, 20);
        let modes = mode_family(&setup, 5, &k_perp);
        let tag = kind.label();
        let top_kind = setup.plate_kind(Plate::Top);

        let bc = exec.map(&modes, |m| {
            boundary_modes::check_bc(m, Plate::Bottom, MODE_SAMPLES).max(boundary_modes::check_bc(
                m,
                Plate::Top,
                MODE_SAMPLES,
            ))
        });
        out.push(Check::new(s, &format!("{tag}_boundary_conditions_max"), Ok(fold_max(&bc)), Le, 1e-12));

        let bottom = exec
            .map(&modes, |m| boundary_modes::max_tangential_force(m, Plate::Bottom, Species::Electric, MODE_SAMPLES));
        out.push(Check::new(s, &format!("{tag}_bottom_tangential_force_max"), Ok(fold_max(&bottom)), Le, 1e-12));
        let top_species = boundary_modes::species_for(top_kind);
        let top = exec.map(&modes, |m| boundary_modes::max_tangential_force(m, Plate::Top, top_species, MODE_SAMPLES));
        out.push(Check::new(s, &format!("{tag}_top_tangential_force_max"), Ok(fold_max(&top)), Le, 1e-12));

        if top_kind == PlateKind::Permeable {
            let dens = exec
                .map(&modes, |m| boundary_modes::max_surface_density(m, Plate::Top, Species::Electric, MODE_SAMPLES));
            out.push(Check::new(s, &format!("{tag}_permeable_electric_density_max"), Ok(fold_max(&dens)), Le, 1e-12));
            // The electric force there is zero, not a non-zero parallel force.
            let force = exec.map(&modes, |m| {
                (0..MODE_SAMPLES)
                    .map(|i| {
                        let t = i as f64 / MODE_SAMPLES as f64;
                        boundary_modes::plate_force(m, Plate::Top, Species::Electric, [t, 0.3 * t], 2.0 * PI * t)
                            .1
                            .norm()
                    })
                    .fold(0.0, f64::max)
            });
            out.push(Check::new(s, &format!("{tag}_permeable_electric_force_max"), Ok(fold_max(&force)), Le, 1e-12));

            let offset = modes
                .iter()
                .map(|m| {
                    let index = f64::from(m.n) + 0.5;
                    (m.k_z() * setup.a() / PI - index).abs() / index
                })
                .fold(0.0, f64::max);
            out.push(Check::new(
                s,
                &format!("{tag}_half_integer_spectrum_offset_rel"),
                Ok(offset),
                Le,
                4.0 * f64::EPSILON,
            ));
            // an integer-indexed kz cannot satisfy the permeable condition
            let cc = Setup::conductor_conductor(setup.a()).expect("positive");
            let wrong = mode_family(&cc, 5, &k_perp)
                .iter()
                .filter(|m| m.n > 0)
                .map(|m| boundary_modes::check_bc_against(m, setup.a(), PlateKind::Permeable, MODE_SAMPLES))
                .fold(f64::INFINITY, f64::min);
            out.push(Check::new(
                s,
                &format!("{tag}_integer_spectrum_violates_permeable_min"),
                Ok(wrong),
                Comparison::Gt,
                1e-3,
            ));
        }

        // Unit-amplitude fields have derivatives of size omega; residuals are
        // quoted in that unit.
        let maxwell = exec.map(&modes, |m| {
            let r = Vec3::new(0.31, -0.17, 0.43 * setup.a());
            boundary_modes::maxwell_residuals(m, r, 0.7, 1e-4).map(|x| x / m.omega())
        });
        let div = maxwell.iter().map(|r| r[0].max(r[1])).fold(0.0, f64::max);
        out.push(Check::new(s, &format!("{tag}_divergence_residual_per_omega_max"), Ok(div), Le, 1e-6));
        let curl = maxwell.iter().map(|r| r[2].max(r[3])).fold(0.0, f64::max);
        out.push(Check::new(s, &format!("{tag}_curl_residual_per_omega_max"), Ok(curl), Le, 1e-6));

        let zs = [0.13, 0.5, 0.77];
        let eb = exec.map(&k_perp, |&k| {
            let mut worst = 0.0f64;
            for n in 0..=3 {
                for &z in &zs {
                    worst = worst.max(boundary_modes::mode_eb_sum(&setup, n, k, z * setup.a())?.amax());
                }
            }
            Ok(worst)
        });
        out.push(Check::new(s, &format!("{tag}_cross_correlator_mode_sum_max"), max_of(eb), Le, 1e-10));
    }
    out
}

fn fold_max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn pressure_checks(exec: Execution) -> Vec<Check> {
    use Comparison::{Gt, Le};
    let s = Suite::Pressure;
    let mut out = Vec::new();
    let cc = |a| Setup::conductor_conductor(a).expect("positive");
    let cp = |a| Setup::conductor_permeable(a).expect("positive");
    let p_cc = -PI * PI / 240.0;
    let p_cp = 7.0 * PI * PI / 1920.0;

    out.push(Check::new(s, "cc_net_rel", Ok(rel(pressure::net_pressure(&cc(1.0)).net, p_cc)), Le, 1e-12));
    out.push(Check::new(s, "cp_net_rel", Ok(rel(pressure::net_pressure(&cp(1.0)).net, p_cp)), Le, 1e-12));
    out.push(Check::new(s, "cc_net_negated", Ok(-pressure::net_pressure(&cc(1.0)).net), Gt, 0.0));
    out.push(Check::new(s, "cp_net", Ok(pressure::net_pressure(&cp(1.0)).net), Gt, 0.0));

    let ratio = [0.5, 1.0, 2.0, 10.0]
        .iter()
        .map(|&a| (pressure::net_pressure(&cp(a)).net / pressure::net_pressure(&cc(a)).net + 0.875).abs())
        .fold(0.0, f64::max);
    out.push(Check::new(s, "ratio_cp_cc_plus_7_8_max_abs", Ok(ratio), Le, 1e-14));

    for setup in [cc(1.0), cp(1.0)] {
        let tag = setup.kind.label();
        let r = pressure::net_pressure(&setup);
        out.push(Check::new(
            s,
            &format!("{tag}_divergent_sum_abs"),
            Ok(specfun::ratio_to_f64(r.divergent_sum()).abs()),
            Le,
            0.0,
        ));
        let ds = geometric_grid(1e-3, 1e-1, 21);
        let slope =
            pressure::numeric_cancellation_profile(&setup, &ds).and_then(|p| loglog_slope(&p)).map(|m| (m - 2.0).abs());
        out.push(Check::new(s, &format!("{tag}_cancellation_slope_minus_2"), slope, Le, 0.1));
        let at = pressure::numeric_cancellation_profile(&setup, &[1e-2 * setup.a()]).map(|p| (p[0].1 / r.net).abs());
        out.push(Check::new(s, &format!("{tag}_cancellation_rel_at_1e-2"), at, Le, 1e-2));

        let oracle = pressure::net_pressure_oracle(&setup).map(|o| rel(o.net, r.net));
        out.push(Check::new(s, &format!("{tag}_oracle_net_rel"), oracle, Le, 1e-6));

        let e = |a: f64| pressure::energy_per_area(&Setup::new(setup.kind, a).expect("positive"));
        let h = 1e-3;
        let de = (-e(1.0 + 2.0 * h) + 8.0 * e(1.0 + h) - 8.0 * e(1.0 - h) + e(1.0 - 2.0 * h)) / (12.0 * h);
        out.push(Check::new(s, &format!("{tag}_energy_derivative_abs"), Ok((-de - r.net).abs()), Le, 1e-8));

        let ells = geometric_grid(1.5, 1e6, 40);
        let rights: Vec<Result<f64>> = exec.map(&ells, |&ell| {
            ThreePlateConfig::matching(setup, ell).map(|c| pressure::side_force(&c, Side::Right).finite_part)
        });
        let increases = rights
            .into_iter()
            .collect::<Result<Vec<_>>>()
            .map(|v| v.windows(2).filter(|w| w[1] >= w[0]).count() as f64);
        out.push(Check::new(s, &format!("{tag}_finite_ell_monotonicity_violations"), increases, Le, 0.0));
        // relative gap (L / (ell - a))^4 / |c_net|, with |c_net| = 1 (cc) or 7/8 (cp)
        let onset = match setup.kind {
            SetupKind::ConductorConductor => 1.01e3,
            SetupKind::ConductorPermeable => 1.05e3,
        };
        let far = [onset, 1e4, 1e6].into_iter().map(|k| {
            let c = ThreePlateConfig::matching(setup, setup.a() * (1.0 + k))?;
            Ok(rel(pressure::three_plate_force(&c).net, r.net))
        });
        out.push(Check::new(s, &format!("{tag}_finite_ell_limit_rel_max"), max_of(far), Le, 1e-12));
    }
    out
}

fn identity_checks() -> Vec<Check> {
    use Comparison::Le;
    let s = Suite::Identity;
    let mut out = Vec::new();
    for a in [1.0, 0.5, 2.0, 10.0] {
        let r = pressure::difference_identity(a);
        out.push(Check::new(
            s,
            &format!("pressure_residual_rel_a_{a}"),
            r.clone().map(|r| r.pressure_residual),
            Le,
            1e-14,
        ));
        out.push(Check::new(s, &format!("energy_residual_rel_a_{a}"), r.map(|r| r.energy_residual), Le, 1e-14));
    }
    out
}
