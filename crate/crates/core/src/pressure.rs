//! Casimir pressure from the quantum Lorentz force on the plate at `z = a`.
//!
//! The force per unit area on a face with normal `n` is `(1/8pi) <E^2 - B^2> n`
//! for electric sources (conductor) and `(1/8pi) <B^2 - E^2> n` for the virtual
//! magnetic sources on a permeable plate. Each face sees the correlators of
//! the region it borders; near the plate they diverge like `(z - a)^-4`. A third
//! plate at `z = ell` closes the outer region, and the divergent pieces of the
//! two faces cancel exactly. The outer region is bounded by like plates, so it
//! carries the two-conductor correlators, or for two permeable plates their
//! electric/magnetic dual (`E -> B`, `B -> -E`).
//!
//! Divergent coefficients are kept as exact rationals times `pi^-2`; finite
//! parts as exact rationals times `pi^2 / L^4`.

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::Serialize;

use crate::correlators::{e2_minus_b2_scale, Setup, SetupKind};
use crate::specfun::{self, ratio_to_f64, Endpoint, SeriesExpansion};
use crate::spectral_oracle::{self, ConstantKind};
use crate::{Error, Result};

pub use crate::boundary_modes::PlateKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// Face at `z = a^-`, normal `-z`, bordering the cavity.
    Left,
    /// Face at `z = a^+`, normal `+z`, bordering the outer region.
    Right,
}

/// Cavity plus a third plate at `z = ell` (`ell = f64::INFINITY` allowed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreePlateConfig {
    pub setup: Setup,
    ell: f64,
    pub third_plate_kind: PlateKind,
}

impl ThreePlateConfig {
    pub fn new(setup: Setup, ell: f64, third_plate_kind: PlateKind) -> Result<Self> {
        if !(ell > setup.a()) {
            return Err(Error::Config(format!("third plate at ell = {ell} must lie beyond a = {}", setup.a())));
        }
        let expected = match setup.kind {
            SetupKind::ConductorConductor => PlateKind::Conductor,
            SetupKind::ConductorPermeable => PlateKind::Permeable,
        };
        if third_plate_kind != expected {
            return Err(Error::Config(format!(
                "{} setup needs a {expected:?} third plate, got {third_plate_kind:?}",
                setup.kind.label()
            )));
        }
        Ok(Self { setup, ell, third_plate_kind })
    }

    /// Third plate of the matching kind.
    pub fn matching(setup: Setup, ell: f64) -> Result<Self> {
        let kind = match setup.kind {
            SetupKind::ConductorConductor => PlateKind::Conductor,
            SetupKind::ConductorPermeable => PlateKind::Permeable,
        };
        Self::new(setup, ell, kind)
    }

    /// Third plate removed to infinity.
    pub fn isolated(setup: Setup) -> Self {
        Self::matching(setup, f64::INFINITY).expect("infinity lies beyond any finite a")
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }
}

/// Coefficient of `(z - a)^-4`, stored as `r / pi^2` with `r` rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivergentCoeff(pub Ratio<i64>);

impl DivergentCoeff {
    pub fn value(&self) -> f64 {
        ratio_to_f64(self.0) / (PI * PI)
    }
}

impl Serialize for DivergentCoeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

/// One face: `divergent / (z - a)^4 + finite_part`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideForce {
    pub divergent: DivergentCoeff,
    pub finite_part: f64,
    /// Finite part as `finite_rational * pi^2 / width^4`.
    #[serde(skip)]
    pub finite_rational: Ratio<i64>,
    /// Width of the region the face borders.
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceResult {
    pub left: f64,
    pub right: f64,
    pub divergent_left: DivergentCoeff,
    pub divergent_right: DivergentCoeff,
    pub net: f64,
}

impl ForceResult {
    /// Exact rational sum of the divergent coefficients.
    pub fn divergent_sum(&self) -> Ratio<i64> {
        self.divergent_left.0 + self.divergent_right.0
    }

    pub fn divergences_cancel(&self) -> bool {
        self.divergent_sum() == Ratio::new(0, 1)
    }

    pub fn is_attractive(&self) -> bool {
        self.net < 0.0
    }
}

/// Boundary-condition pair of a region between two plates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    ConductorConductor,
    ConductorPermeable,
    PermeablePermeable,
}

impl Region {
    /// `<E^2 - B^2> = sign * (pi/L)^4 (4/pi) S(xi)`; returns `(sign, S expansion)`
    /// about the endpoint where the probe plate sits.
    fn e2_minus_b2_expansion(self, at: Endpoint) -> (i64, SeriesExpansion) {
        match self {
            Region::ConductorConductor => (1, specfun::f_expansion(at)),
            Region::ConductorPermeable => (1, specfun::g_expansion(at)),
            // dual of the two-conductor slab
            Region::PermeablePermeable => (-1, specfun::f_expansion(at)),
        }
    }
}

/// `+1` for electric sources, `-1` for magnetic: the force is `+-(1/8pi)<E^2 - B^2> n`.
fn species_sign(kind: PlateKind) -> i64 {
    match kind {
        PlateKind::Conductor => 1,
        PlateKind::Permeable => -1,
    }
}

struct Face {
    region: Region,
    width: f64,
    endpoint: Endpoint,
    normal_z: i64,
}

fn face(config: &ThreePlateConfig, side: Side) -> Face {
    let a = config.setup.a();
    match (side, config.setup.kind) {
        (Side::Left, SetupKind::ConductorConductor) => {
            Face { region: Region::ConductorConductor, width: a, endpoint: Endpoint::Pi, normal_z: -1 }
        }
        (Side::Left, SetupKind::ConductorPermeable) => {
            Face { region: Region::ConductorPermeable, width: a, endpoint: Endpoint::Pi, normal_z: -1 }
        }
        (Side::Right, SetupKind::ConductorConductor) => {
            Face { region: Region::ConductorConductor, width: config.ell - a, endpoint: Endpoint::Zero, normal_z: 1 }
        }
        (Side::Right, SetupKind::ConductorPermeable) => {
            Face { region: Region::PermeablePermeable, width: config.ell - a, endpoint: Endpoint::Zero, normal_z: 1 }
        }
    }
}

fn probe_kind(setup: &Setup) -> PlateKind {
    match setup.kind {
        SetupKind::ConductorConductor => PlateKind::Conductor,
        SetupKind::ConductorPermeable => PlateKind::Permeable,
    }
}

/// Force on one face of the plate at `z = a`, split into its `(z - a)^-4`
/// divergence and finite part.
///
/// With `f_z = s (1/8pi)(pi/L)^4 (4/pi) [c_s u^-4 + c_0]` and `u = pi (z - a) / L`,
/// the divergent coefficient is `s c_s / (2 pi^2)` and the finite part
/// `s c_0 pi^2 / (2 L^4)`.
pub fn side_force(config: &ThreePlateConfig, side: Side) -> SideForce {
    let f = face(config, side);
    let (region_sign, exp) = f.region.e2_minus_b2_expansion(f.endpoint);
    let sign = f.normal_z * species_sign(probe_kind(&config.setup)) * region_sign;
    let half = Ratio::new(sign, 2);
    let divergent = DivergentCoeff(half * exp.singular);
    let finite_rational = half * exp.constant;
    let finite_part =
        if f.width.is_infinite() { 0.0 } else { ratio_to_f64(finite_rational) * PI * PI / f.width.powi(4) };
    SideForce { divergent, finite_part, finite_rational, width: f.width }
}

/// Finite part of one face with the expansion constant taken from the damped
/// mode sums at the endpoint instead of the closed forms.
pub fn side_force_oracle(config: &ThreePlateConfig, side: Side) -> Result<f64> {
    let f = face(config, side);
    if f.width.is_infinite() {
        return Ok(0.0);
    }
    let kind = match (f.region, f.endpoint) {
        (Region::ConductorPermeable, Endpoint::Zero) => ConstantKind::GAtZero,
        (Region::ConductorPermeable, Endpoint::Pi) => ConstantKind::GAtPi,
        (_, Endpoint::Zero) => ConstantKind::FAtZero,
        (_, Endpoint::Pi) => ConstantKind::FAtPi,
    };
    let (region_sign, _) = f.region.e2_minus_b2_expansion(f.endpoint);
    let sign = f.normal_z * species_sign(probe_kind(&config.setup)) * region_sign;
    let c0 = spectral_oracle::abel_endpoint_constant(
        kind,
        &spectral_oracle::default_endpoint_lambdas(),
        spectral_oracle::AbelSumParams::default().n_max,
    )?;
    Ok(sign as f64 * 0.5 * c0.value * PI * PI / f.width.powi(4))
}

/// [`three_plate_force`] with the finite parts from [`side_force_oracle`].
/// Divergent coefficients are the exact ones.
pub fn three_plate_force_oracle(config: &ThreePlateConfig) -> Result<ForceResult> {
    let exact = three_plate_force(config);
    let left = side_force_oracle(config, Side::Left)?;
    let right = side_force_oracle(config, Side::Right)?;
    Ok(ForceResult { left, right, net: left + right, ..exact })
}

/// [`net_pressure`] through [`three_plate_force_oracle`].
pub fn net_pressure_oracle(setup: &Setup) -> Result<ForceResult> {
    three_plate_force_oracle(&ThreePlateConfig::isolated(*setup))
}

/// Net pressure on the plate at `z = a` with the third plate at `config.ell()`.
pub fn three_plate_force(config: &ThreePlateConfig) -> ForceResult {
    let left = side_force(config, Side::Left);
    let right = side_force(config, Side::Right);
    ForceResult {
        left: left.finite_part,
        right: right.finite_part,
        divergent_left: left.divergent,
        divergent_right: right.divergent,
        net: left.finite_part + right.finite_part,
    }
}

/// Net Casimir pressure with the third plate at infinity:
/// `-pi^2 / 240 a^4` (cc) or `+7/8 pi^2 / 240 a^4` (cp).
pub fn net_pressure(setup: &Setup) -> ForceResult {
    three_plate_force(&ThreePlateConfig::isolated(*setup))
}

/// Pressure coefficient `P a^4 / pi^2` as an exact rational.
pub fn pressure_coefficient(kind: SetupKind) -> Ratio<i64> {
    let setup = Setup::new(kind, 1.0).expect("unit separation");
    side_force(&ThreePlateConfig::isolated(setup), Side::Left).finite_rational
}

/// Energy per unit area with `P = -dE/da` and `E(infinity) = 0`:
/// `-pi^2 / 720 a^3` (cc), `+7/8 pi^2 / 720 a^3` (cp).
pub fn energy_per_area(setup: &Setup) -> f64 {
    // P = k pi^2 / a^4  =>  E = k pi^2 / (3 a^3)
    let k = pressure_coefficient(setup.kind) / 3;
    ratio_to_f64(k) * PI * PI / setup.a().powi(3)
}

/// Full (divergent) normal force on the cavity face of the plate at `z = a`
/// from a probe point at distance `d` inside the cavity: `s (1/8pi) <E^2 - B^2>`
/// with `s = -1` (conductor) or `+1` (permeable). Uses the closed forms.
pub fn left_force_density(setup: &Setup, d: f64) -> Result<f64> {
    let a = setup.a();
    if !(d > 0.0 && d < a) {
        return Err(Error::Domain(format!("distance d = {d} is outside (0, {a})")));
    }
    let u = -PI * d / a;
    let s = match setup.kind {
        SetupKind::ConductorConductor => specfun::f_at_offset(Endpoint::Pi, u),
        SetupKind::ConductorPermeable => specfun::g_at_offset(Endpoint::Pi, u),
    };
    let sign = -(species_sign(probe_kind(setup)) as f64);
    Ok(sign * e2_minus_b2_scale(a) * s / (8.0 * PI))
}

/// Force on the outer face at distance `d` with the outer region unbounded:
/// `3 / (16 pi^2 d^4)` for both setups.
pub fn right_force_density_unbounded(d: f64) -> f64 {
    3.0 / (16.0 * PI * PI * d.powi(4))
}

/// For each distance `d` from the plate, `left(d) + right(d) - net`, with both
/// faces taken from the exact position functions rather than their two-term
/// expansions. The regular part of the cavity function is evaluated without
/// cancellation, so the residual stays accurate down to small `d`; it vanishes
/// as `d^2`.
pub fn numeric_cancellation_profile(setup: &Setup, distances: &[f64]) -> Result<Vec<(f64, f64)>> {
    let a = setup.a();
    distances
        .iter()
        .map(|&d| {
            if !(d > 0.0 && d < a) {
                return Err(Error::Domain(format!("distance d = {d} is outside (0, {a})")));
            }
            let u = -PI * d / a;
            // left + right - net = s (1/8pi)(pi/a)^4 (4/pi) R(u), R = S - two-term expansion
            let remainder = match setup.kind {
                SetupKind::ConductorConductor => specfun::f_remainder(Endpoint::Pi, u),
                SetupKind::ConductorPermeable => specfun::g_remainder(Endpoint::Pi, u),
            };
            let sign = -(species_sign(probe_kind(setup)) as f64);
            Ok((d, sign * e2_minus_b2_scale(a) * remainder / (8.0 * PI)))
        })
        .collect()
}

/// Same quantity as [`numeric_cancellation_profile`] but by direct subtraction
/// of the closed-form face forces. Loses digits as `d -> 0`; useful only as a
/// cross-check at moderate `d`.
pub fn direct_cancellation_residual(setup: &Setup, d: f64) -> Result<f64> {
    let net = net_pressure(setup).net;
    Ok(left_force_density(setup, d)? + right_force_density_unbounded(d) - net)
}

/// Residuals of the equivalence between the cp setup at separation `a` and the
/// difference of two cc setups at `2a` and `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DifferenceIdentity {
    /// `P_cp(a) - [2 P_cc(2a) - P_cc(a)]`, relative to `|P_cp(a)|`.
    pub pressure_residual: f64,
    /// `E_cp(a) - [E_cc(2a) - E_cc(a)]`, relative to `|E_cp(a)|`.
    pub energy_residual: f64,
}

/// `E_cp(a) = E_cc(2a) - E_cc(a)`; differentiating in `a` gives
/// `P_cp(a) = 2 P_cc(2a) - P_cc(a)`.
pub fn difference_identity(a: f64) -> Result<DifferenceIdentity> {
    let cc = |sep: f64| Setup::conductor_conductor(sep);
    let cp = Setup::conductor_permeable(a)?;
    let p_cp = net_pressure(&cp).net;
    let p_combo = 2.0 * net_pressure(&cc(2.0 * a)?).net - net_pressure(&cc(a)?).net;
    let e_cp = energy_per_area(&cp);
    let e_combo = energy_per_area(&cc(2.0 * a)?) - energy_per_area(&cc(a)?);
    Ok(DifferenceIdentity {
        pressure_residual: (p_cp - p_combo).abs() / p_cp.abs(),
        energy_residual: (e_cp - e_combo).abs() / e_cp.abs(),
    })
}
