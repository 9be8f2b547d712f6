//! Fourier-space fields on the periodic torus `[0, 2π)²` and the multiplier
//! operators acting on them.
//!
//! Layout convention shared by every array in the crate: mode or sample
//! `(i1, i2)` lives at index `i2 * n1 + i1`, i.e. row-major with `x₂` as the
//! outer index. The forward transform divides by `n1·n2`, so the `(0, 0)`
//! coefficient is the mean of the samples.

mod field;
mod grid;
mod operator;
mod random;

pub use field::{PhysicalField, SpectralField};
pub use grid::Grid;
pub use operator::{velocity_pm, velocity_sqg, Axis, OperatorSpec, VelocityLaw};
pub use random::{random_band_limited_field, SpectrumProfile, ZeroModePolicy};

pub use rustfft::num_complex::Complex64;

/// Domain length per axis.
pub const DOMAIN_LENGTH: f64 = 2.0 * std::f64::consts::PI;

/// Lebesgue measure of the torus, `(2π)²`.
pub const DOMAIN_MEASURE: f64 = DOMAIN_LENGTH * DOMAIN_LENGTH;
