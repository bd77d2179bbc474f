//! Casimir pressure between parallel plates from the quantum Lorentz force.
//!
//! The pressure on a plate is obtained from the vacuum expectation of the
//! Lorentz force on its surface charges and currents, expressed through the
//! equal-time field correlators of the cavity. Two configurations are covered:
//!
//! * two perfect conductors (attractive, `-pi^2 / 240 a^4`),
//! * a perfect conductor facing a perfectly permeable plate (repulsive,
//!   `+7/8 * pi^2 / 240 a^4`), where the force on the permeable plate acts on
//!   virtual magnetic surface charges and currents.
//!
//! Natural units `hbar = c = 1` are used throughout; pressures carry length^-4.
//!
//! [`spectral_oracle`] and [`boundary_modes`] provide independent numerical
//! routes (finite differences, Abel-regularised mode sums and explicit cavity
//! modes) that the closed forms in [`specfun`], [`correlators`] and
//! [`pressure`] are checked against.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary_modes;
pub mod correlators;
pub mod exec;
pub mod extrapolation;
pub mod pressure;
pub mod specfun;
pub mod spectral_oracle;
pub mod verify;

pub use correlators::{CorrelatorTensor, Setup, SetupKind};
pub use exec::Execution;
pub use pressure::{ForceResult, Side, ThreePlateConfig};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("finite-difference step error: {0}")]
    StepSize(String),
    #[error("extrapolation did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
