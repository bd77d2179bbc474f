//! Classical cavity modes, boundary conditions and surface Lorentz forces.
//!
//! Modes travel along the transverse wavevector `k_perp` with phase
//! `psi = k_perp . r + phase` and stand along `z`. With `e_k = k_perp / |k_perp|`,
//! `e_t = z x e_k`, `kappa = |k_perp|` and `omega^2 = kappa^2 + k_z^2`:
//!
//! ```text
//! TE:  E = e_t sin(k_z z) cos psi
//!      B = z (kappa/omega) sin(k_z z) cos psi - e_k (k_z/omega) cos(k_z z) sin psi
//! TM:  B = e_t cos(k_z z) cos psi
//!      E = -z (kappa/omega) cos(k_z z) cos psi - e_k (k_z/omega) sin(k_z z) sin psi
//! ```
//!
//! Both vanish in tangential `E` and normal `B` at `z = 0`. At `z = a` the
//! conductor requires `k_z = n pi / a`; the permeable plate (tangential `B`
//! and normal `E` zero) requires `k_z = (n + 1/2) pi / a`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector2, Vector3};
use serde::Serialize;

use crate::correlators::{Setup, SetupKind};
use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Plate {
    /// The conductor at `z = 0`.
    Bottom,
    /// The plate at `z = a`.
    Top,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlateKind {
    Conductor,
    Permeable,
}

/// Electric sources, or the virtual magnetic ones needed on permeable plates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Species {
    Electric,
    Magnetic,
}

impl Setup {
    pub fn plate_kind(&self, plate: Plate) -> PlateKind {
        match (plate, self.kind) {
            (Plate::Bottom, _) | (Plate::Top, SetupKind::ConductorConductor) => PlateKind::Conductor,
            (Plate::Top, SetupKind::ConductorPermeable) => PlateKind::Permeable,
        }
    }

    pub fn plate_z(&self, plate: Plate) -> f64 {
        match plate {
            Plate::Bottom => 0.0,
            Plate::Top => self.a(),
        }
    }

    /// Normal of the plate face that looks into the cavity.
    pub fn inward_face_normal(&self, plate: Plate) -> Vec3 {
        match plate {
            Plate::Bottom => Vec3::z(),
            Plate::Top => -Vec3::z(),
        }
    }
}

/// Species whose Lorentz force acts on a plate of the given kind.
pub fn species_for(kind: PlateKind) -> Species {
    match kind {
        PlateKind::Conductor => Species::Electric,
        PlateKind::Permeable => Species::Magnetic,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSpec {
    pub setup: Setup,
    pub n: u32,
    pub k_perp: [f64; 2],
    pub polarization: Polarization,
}

impl ModeSpec {
    pub fn new(setup: Setup, n: u32, k_perp: [f64; 2], polarization: Polarization) -> Result<Self> {
        let spec = Self { setup, n, k_perp, polarization };
        if !(k_perp[0].is_finite() && k_perp[1].is_finite()) {
            return Err(Error::Domain("transverse wavevector must be finite".into()));
        }
        if !(spec.omega() > 0.0) {
            return Err(Error::Domain("mode frequency must be positive".into()));
        }
        Ok(spec)
    }

    /// Longitudinal wavenumber: `n pi / a` (cc) or `(n + 1/2) pi / a` (cp).
    pub fn k_z(&self) -> f64 {
        let n = f64::from(self.n);
        let index = match self.setup.kind {
            SetupKind::ConductorConductor => n,
            SetupKind::ConductorPermeable => n + 0.5,
        };
        index * PI / self.setup.a()
    }

    pub fn kappa(&self) -> f64 {
        Vector2::from(self.k_perp).norm()
    }

    pub fn omega(&self) -> f64 {
        self.kappa().hypot(self.k_z())
    }

    /// The same mode with `k_perp -> -k_perp`.
    pub fn reversed(&self) -> Self {
        Self { k_perp: [-self.k_perp[0], -self.k_perp[1]], ..*self }
    }

    /// In-plane unit vectors `(e_k, e_t)`. For `k_perp = 0` any direction will
    /// do; `x` is used.
    fn in_plane_basis(&self) -> (Vec3, Vec3) {
        let kappa = self.kappa();
        let e_k = if kappa > 0.0 { Vec3::new(self.k_perp[0] / kappa, self.k_perp[1] / kappa, 0.0) } else { Vec3::x() };
        (e_k, Vec3::z().cross(&e_k))
    }
}

/// Instantaneous real fields `(E, B)` of a unit-amplitude mode.
pub fn mode_field(spec: &ModeSpec, position: Vec3, phase: f64) -> Result<(Vec3, Vec3)> {
    let z = position.z;
    let a = spec.setup.a();
    if !(0.0..=a).contains(&z) {
        return Err(Error::Domain(format!("z = {z} is outside the slab [0, {a}]")));
    }
    Ok(field_unchecked(spec, position, phase))
}

fn field_unchecked(spec: &ModeSpec, r: Vec3, phase: f64) -> (Vec3, Vec3) {
    let (e_k, e_t) = spec.in_plane_basis();
    let (kz, kappa, omega) = (spec.k_z(), spec.kappa(), spec.omega());
    let psi = spec.k_perp[0] * r.x + spec.k_perp[1] * r.y + phase;
    let (sin_psi, cos_psi) = psi.sin_cos();
    let (sz, cz) = (kz * r.z).sin_cos();
    match spec.polarization {
        Polarization::TE => {
            let e = e_t * (sz * cos_psi);
            let b = Vec3::z() * (kappa / omega * sz * cos_psi) - e_k * (kz / omega * cz * sin_psi);
            (e, b)
        }
        Polarization::TM => {
            let b = e_t * (cz * cos_psi);
            let e = -Vec3::z() * (kappa / omega * cz * cos_psi) - e_k * (kz / omega * sz * sin_psi);
            (e, b)
        }
    }
}

/// Components that must vanish on a plate of this kind: `(E_x, E_y, B_z)` on a
/// conductor, `(B_x, B_y, E_z)` on a permeable plate.
pub fn bc_violation(kind: PlateKind, e: &Vec3, b: &Vec3) -> f64 {
    let comps = match kind {
        PlateKind::Conductor => [e.x, e.y, b.z],
        PlateKind::Permeable => [b.x, b.y, e.z],
    };
    comps.iter().fold(0.0, |m, c| m.max(c.abs()))
}

/// Deterministic transverse sample points and phases (low-discrepancy sequence
/// spanning a few transverse wavelengths).
fn transverse_samples(spec: &ModeSpec, count: usize) -> impl Iterator<Item = (f64, f64, f64)> {
    const G1: f64 = 0.754_877_666_246_692_8;
    const G2: f64 = 0.569_840_290_998_053_3;
    const G3: f64 = 0.618_033_988_749_894_9;
    let span = 4.0 * PI / spec.kappa().max(PI / spec.setup.a());
    (0..count).map(move |i| {
        let i = i as f64 + 1.0;
        (span * (i * G1).fract(), span * (i * G2).fract(), 2.0 * PI * (i * G3).fract())
    })
}

/// Largest violation of the boundary conditions of a `kind` plate at height `z`.
pub fn check_bc_against(spec: &ModeSpec, z: f64, kind: PlateKind, sample_count: usize) -> f64 {
    transverse_samples(spec, sample_count.max(1))
        .map(|(x, y, phase)| {
            let (e, b) = field_unchecked(spec, Vec3::new(x, y, z), phase);
            bc_violation(kind, &e, &b)
        })
        .fold(0.0, f64::max)
}

/// Largest violation of the setup's own boundary conditions on `plate`.
pub fn check_bc(spec: &ModeSpec, plate: Plate, sample_count: usize) -> f64 {
    let setup = &spec.setup;
    check_bc_against(spec, setup.plate_z(plate), setup.plate_kind(plate), sample_count)
}

/// Surface charge and current on a plate face.
///
/// The current is stored as a 3-vector; with the normal along `z` its `z`
/// component is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceDensities {
    pub sigma: f64,
    pub current: [f64; 3],
    pub species: Species,
}

impl SurfaceDensities {
    pub fn current_vec(&self) -> Vec3 {
        Vec3::from(self.current)
    }
}

/// Electric: `sigma = n.E / 4pi`, `K = n x B / 4pi`.
/// Magnetic: `sigma = n.B / 4pi`, `K = -n x E / 4pi`. (`c = 1`)
pub fn surface_densities(e: &Vec3, b: &Vec3, normal: &Vec3, species: Species) -> SurfaceDensities {
    let four_pi = 4.0 * PI;
    let (sigma, current) = match species {
        Species::Electric => (normal.dot(e) / four_pi, normal.cross(b) / four_pi),
        Species::Magnetic => (normal.dot(b) / four_pi, -normal.cross(e) / four_pi),
    };
    SurfaceDensities { sigma, current: current.into(), species }
}

/// Electric: `f = sigma E / 2 + K x B / 2`. Magnetic: `f = sigma B / 2 - K x E / 2`.
pub fn lorentz_force_density(densities: &SurfaceDensities, e: &Vec3, b: &Vec3) -> Vec3 {
    let k = densities.current_vec();
    match densities.species {
        Species::Electric => e * (0.5 * densities.sigma) + k.cross(b) * 0.5,
        Species::Magnetic => b * (0.5 * densities.sigma) - k.cross(e) * 0.5,
    }
}

/// Force density on the cavity-side face of `plate` for one transverse point and phase.
pub fn plate_force(
    spec: &ModeSpec,
    plate: Plate,
    species: Species,
    transverse: [f64; 2],
    phase: f64,
) -> (SurfaceDensities, Vec3) {
    let setup = &spec.setup;
    let r = Vec3::new(transverse[0], transverse[1], setup.plate_z(plate));
    let (e, b) = field_unchecked(spec, r, phase);
    let dens = surface_densities(&e, &b, &setup.inward_face_normal(plate), species);
    let f = lorentz_force_density(&dens, &e, &b);
    (dens, f)
}

/// Largest tangential force component on `plate` over the sample set.
pub fn max_tangential_force(spec: &ModeSpec, plate: Plate, species: Species, sample_count: usize) -> f64 {
    transverse_samples(spec, sample_count.max(1))
        .map(|(x, y, phase)| {
            let (_, f) = plate_force(spec, plate, species, [x, y], phase);
            f.x.abs().max(f.y.abs())
        })
        .fold(0.0, f64::max)
}

/// Largest `|sigma|`, `|K|` of the given species on `plate` over the sample set.
pub fn max_surface_density(spec: &ModeSpec, plate: Plate, species: Species, sample_count: usize) -> f64 {
    transverse_samples(spec, sample_count.max(1))
        .map(|(x, y, phase)| {
            let (d, _) = plate_force(spec, plate, species, [x, y], phase);
            d.sigma.abs().max(d.current_vec().norm())
        })
        .fold(0.0, f64::max)
}

/// Residuals of the source-free Maxwell equations at an interior point, by
/// centred differences of step `h` in space and in phase
/// (`d/dt = -omega d/dphase`). Returns `(|div E|, |div B|, |curl E + dB/dt|, |curl B - dE/dt|)`.
pub fn maxwell_residuals(spec: &ModeSpec, r: Vec3, phase: f64, h: f64) -> [f64; 4] {
    let field = |p: Vec3, ph: f64| field_unchecked(spec, p, ph);
    let mut grad_e = Matrix3::zeros(); // grad_e[(i, j)] = d_j E_i
    let mut grad_b = Matrix3::zeros();
    for j in 0..3 {
        let mut dr = Vec3::zeros();
        dr[j] = h;
        let (ep, bp) = field(r + dr, phase);
        let (em, bm) = field(r - dr, phase);
        grad_e.set_column(j, &((ep - em) / (2.0 * h)));
        grad_b.set_column(j, &((bp - bm) / (2.0 * h)));
    }
    let curl = |g: &Matrix3<f64>| Vec3::new(g[(2, 1)] - g[(1, 2)], g[(0, 2)] - g[(2, 0)], g[(1, 0)] - g[(0, 1)]);
    let (ep, bp) = field(r, phase + h);
    let (em, bm) = field(r, phase - h);
    let omega = spec.omega();
    let de_dt = -(ep - em) / (2.0 * h) * omega;
    let db_dt = -(bp - bm) / (2.0 * h) * omega;
    [grad_e.trace().abs(), grad_b.trace().abs(), (curl(&grad_e) + db_dt).norm(), (curl(&grad_b) - de_dt).norm()]
}

/// Phase-averaged `E_i B_j` of a single mode at height `z` (transverse origin).
///
/// The product is a trigonometric polynomial of degree 2 in the phase, so the
/// average over 8 equally spaced phases is exact.
pub fn mode_eb_average(spec: &ModeSpec, z: f64) -> Matrix3<f64> {
    const PHASES: usize = 8;
    let mut acc = Matrix3::zeros();
    for p in 0..PHASES {
        let phase = 2.0 * PI * p as f64 / PHASES as f64;
        let (e, b) = field_unchecked(spec, Vec3::new(0.0, 0.0, z), phase);
        acc += e * b.transpose();
    }
    acc / PHASES as f64
}

/// `E_i B_j` summed over both polarizations and both directions `+-k_perp` of
/// the transverse wavevector at fixed `(n, k_perp)`.
pub fn mode_eb_sum(setup: &Setup, n: u32, k_perp: [f64; 2], z: f64) -> Result<Matrix3<f64>> {
    let mut acc = Matrix3::zeros();
    for pol in Polarization::BOTH {
        let spec = ModeSpec::new(*setup, n, k_perp, pol)?;
        acc += mode_eb_average(&spec, z) + mode_eb_average(&spec.reversed(), z);
    }
    Ok(acc)
}
