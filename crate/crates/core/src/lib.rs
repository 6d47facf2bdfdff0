//! Phase-space densities of semiclassical wave packets, their signed-mixture
//! samplers, trajectory-ensemble expectation estimators and a grid
//! Schrödinger reference solver.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod densities;
pub mod dynamics;
pub mod egorov;
pub mod error;
pub mod phase_space;
pub mod quadrature;
pub mod reference;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PhasePoint = phase_space::PhasePoint<f64>;
pub type InitialState = phase_space::InitialState<f64>;
pub type SignedMixture = sampling::SignedMixture<f64>;
pub type ObservableSymbol = egorov::ObservableSymbol<f64>;
pub type ExpectationSeries = egorov::ExpectationSeries<f64>;
pub type IntegratorConfig = dynamics::IntegratorConfig<f64>;
pub type GridSpec = reference::GridSpec<f64>;
pub type WaveField = reference::WaveField<f64>;
