//! Equal-time vacuum correlators of the fields between the plates.
//!
//! With `xi = pi z / a`, `P = diag(-1, -1, 1)` (minus the projector parallel
//! to the plates plus the projector on the normal) and `S` the position
//! function of the setup (`F` for two conductors, `G` for conductor/permeable):
//!
//! ```text
//! <E_i E_j> = (pi/a)^4 (2 / 3 pi) [ c P_ij / 120 + delta_ij S(xi) ]
//! <B_i B_j> = (pi/a)^4 (2 / 3 pi) [ c P_ij / 120 - delta_ij S(xi) ]
//! <E_i B_j> = 0
//! ```
//!
//! where `c = 1` for two conductors and `c = -7/8` for the conductor/permeable pair.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::specfun::{self, Evaluation, Xi};
use crate::{Error, Result};

/// Boundary-condition pair of the cavity. The plate at `z = 0` is always a
/// perfect conductor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetupKind {
    /// Perfect conductor at `z = a`.
    #[serde(rename = "cc")]
    ConductorConductor,
    /// Perfectly permeable plate at `z = a`.
    #[serde(rename = "cp")]
    ConductorPermeable,
}

impl SetupKind {
    pub fn label(self) -> &'static str {
        match self {
            SetupKind::ConductorConductor => "cc",
            SetupKind::ConductorPermeable => "cp",
        }
    }
}

impl std::str::FromStr for SetupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cc" => Ok(SetupKind::ConductorConductor),
            "cp" => Ok(SetupKind::ConductorPermeable),
            other => Err(Error::Config(format!("unknown setup '{other}' (expected cc or cp)"))),
        }
    }
}

/// Plates at `z = 0` and `z = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Setup {
    pub kind: SetupKind,
    a: f64,
}

impl Setup {
    pub fn new(kind: SetupKind, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Config(format!("plate separation a = {a} must be positive")));
        }
        Ok(Self { kind, a })
    }

    pub fn conductor_conductor(a: f64) -> Result<Self> {
        Self::new(SetupKind::ConductorConductor, a)
    }

    pub fn conductor_permeable(a: f64) -> Result<Self> {
        Self::new(SetupKind::ConductorPermeable, a)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn xi(&self, z: f64) -> Result<Xi> {
        Xi::from_position(z, self.a)
    }
}

/// Diagonal 3x3 tensor; off-diagonal entries vanish for the planar geometry.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CorrelatorTensor {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

impl CorrelatorTensor {
    pub const ZERO: CorrelatorTensor = CorrelatorTensor { xx: 0.0, yy: 0.0, zz: 0.0 };

    pub fn diag(xx: f64, yy: f64, zz: f64) -> Self {
        Self { xx, yy, zz }
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy + self.zz
    }

    pub fn components(&self) -> [f64; 3] {
        [self.xx, self.yy, self.zz]
    }

    /// Full matrix form, row-major.
    pub fn to_matrix(&self) -> [[f64; 3]; 3] {
        [[self.xx, 0.0, 0.0], [0.0, self.yy, 0.0], [0.0, 0.0, self.zz]]
    }

    pub fn max_abs(&self) -> f64 {
        self.xx.abs().max(self.yy.abs()).max(self.zz.abs())
    }
}

impl Add for CorrelatorTensor {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::diag(self.xx + o.xx, self.yy + o.yy, self.zz + o.zz)
    }
}

impl Sub for CorrelatorTensor {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::diag(self.xx - o.xx, self.yy - o.yy, self.zz - o.zz)
    }
}

impl Mul<f64> for CorrelatorTensor {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::diag(self.xx * k, self.yy * k, self.zz * k)
    }
}

/// Diagonal of `-delta_parallel + delta_perp` with the plates normal to `z`.
pub const PLATE_PROJECTOR: [f64; 3] = [-1.0, -1.0, 1.0];

/// `(pi/a)^4 * 2 / (3 pi)`.
pub fn correlator_scale(a: f64) -> f64 {
    (PI / a).powi(4) * 2.0 / (3.0 * PI)
}

/// Weight of the constant tensor part: `1` (cc) or `-7/8` (cp).
pub fn constant_weight(kind: SetupKind) -> f64 {
    match kind {
        SetupKind::ConductorConductor => 1.0,
        SetupKind::ConductorPermeable => -0.875,
    }
}

/// `F(xi)` or `G(xi)` at the position, depending on the setup.
pub fn position_function(setup: &Setup, z: f64) -> Result<Evaluation> {
    let xi = setup.xi(z)?.value();
    match setup.kind {
        SetupKind::ConductorConductor => specfun::eval_f(xi),
        SetupKind::ConductorPermeable => specfun::eval_g(xi),
    }
}

fn assemble(setup: &Setup, z: f64, sign: f64) -> Result<CorrelatorTensor> {
    let s = position_function(setup, z)?.value;
    let w = constant_weight(setup.kind) / 120.0;
    let k = correlator_scale(setup.a);
    let [px, py, pz] = PLATE_PROJECTOR;
    Ok(CorrelatorTensor::diag(k * (w * px + sign * s), k * (w * py + sign * s), k * (w * pz + sign * s)))
}

/// `<E_i E_j>` at `0 < z < a`.
pub fn corr_ee(setup: &Setup, z: f64) -> Result<CorrelatorTensor> {
    assemble(setup, z, 1.0)
}

/// `<B_i B_j>` at `0 < z < a`.
pub fn corr_bb(setup: &Setup, z: f64) -> Result<CorrelatorTensor> {
    assemble(setup, z, -1.0)
}

/// `<E_i B_j>`, identically zero for both setups.
pub fn corr_eb(setup: &Setup, z: f64) -> Result<CorrelatorTensor> {
    setup.xi(z)?;
    Ok(CorrelatorTensor::ZERO)
}

/// `<E^2 - B^2> = (pi/a)^4 (4/pi) S(xi)`; the constant tensor parts cancel.
pub fn e2_minus_b2(setup: &Setup, z: f64) -> Result<f64> {
    let s = position_function(setup, z)?.value;
    Ok(e2_minus_b2_scale(setup.a) * s)
}

/// `(pi/a)^4 * 4 / pi`, i.e. twice the trace `3` times [`correlator_scale`].
pub fn e2_minus_b2_scale(a: f64) -> f64 {
    (PI / a).powi(4) * 4.0 / PI
}
