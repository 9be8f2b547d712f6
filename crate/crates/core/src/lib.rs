//! Pseudo-spectral simulation of the two-dimensional surface quasi-geostrophic
//! (SQG) equation with anisotropic fractional dissipation
//!
//! ```text
//! ∂ₜθ + (u·∇)θ + μ Λ_{x1}^{2α} θ + ν Λ_{x2}^{2β} θ = 0,
//! ```
//!
//! on the periodic torus `[0, 2π)²`, with the velocity given either by the
//! SQG law `u = (−R₂θ, R₁θ)` or the porous-medium law `u = (−R₁R₂θ, R₁R₁θ)`.
//!
//! Alongside the solver the crate ships two verification laboratories:
//!
//! * [`harness`] evaluates the anisotropic interpolation, Sobolev,
//!   commutator and logarithmic Sobolev inequalities on random band-limited
//!   fields and reports empirical constants;
//! * [`gronwall`] builds explicit bound certificates for the logarithmic
//!   Gronwall inequality and checks them against ODE trajectories.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`spectral`] | grids, Fourier fields, multipliers, velocity laws, random fields |
//! | [`norms`] | Lebesgue, Sobolev, mixed and Besov norms |
//! | [`solver`] | integrating-factor RK4 stepper, diagnostics, runs |
//! | [`harness`] | inequality cases and campaigns |
//! | [`gronwall`] | certificates, trajectories, verification |
//! | [`io`] | config parsing, diagnostics records, checkpoints |

pub mod error;
pub mod gronwall;
pub mod harness;
pub mod io;
pub mod norms;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{Axis, Grid, OperatorSpec, PhysicalField, SpectralField};
