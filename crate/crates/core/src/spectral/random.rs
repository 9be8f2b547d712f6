//! Deterministic random band-limited fields.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`, which is specified bit-for-bit and therefore
//! reproducible across platforms. Phases are drawn in a fixed mode order for
//! every mode of the half-plane, including the ones a stripping policy later
//! zeroes, so fields that differ only in policy share their phases.

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid, SpectralField};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpectrumProfile {
    /// Unit amplitude for every retained mode.
    Flat,
    /// Amplitude `(1 + |k|²)^{-rate/2}`.
    Decaying { rate: f64 },
}

impl SpectrumProfile {
    fn amplitude(&self, k1: i64, k2: i64) -> f64 {
        match *self {
            SpectrumProfile::Flat => 1.0,
            SpectrumProfile::Decaying { rate } => (1.0 + (k1 * k1 + k2 * k2) as f64).powf(-0.5 * rate),
        }
    }
}

/// Which axis-aligned modes get zeroed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroModePolicy {
    Keep,
    /// Zero every mode with `k₁ = 0`.
    StripX1,
    /// Zero every mode with `k₂ = 0`.
    StripX2,
    StripBoth,
}

impl ZeroModePolicy {
    fn keeps(&self, k1: i64, k2: i64) -> bool {
        match self {
            ZeroModePolicy::Keep => true,
            ZeroModePolicy::StripX1 => k1 != 0,
            ZeroModePolicy::StripX2 => k2 != 0,
            ZeroModePolicy::StripBoth => k1 != 0 && k2 != 0,
        }
    }
}

/// Real field with modes `|k₁|, |k₂| ≤ kmax`, uniformly random phases,
/// amplitudes from `profile`, normalized to `‖f‖_{L²} = 1`.
pub fn random_band_limited_field(
    grid: &Arc<Grid>,
    seed: u64,
    kmax: usize,
    profile: SpectrumProfile,
    policy: ZeroModePolicy,
) -> Result<SpectralField> {
    let limit = grid.n1().min(grid.n2()) / 3;
    if kmax > limit {
        return Err(Error::KmaxTooLarge { kmax, limit });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = SpectralField::zeros(grid);
    let km = kmax as i64;
    for k2 in 0..=km {
        for k1 in -km..=km {
            if k2 == 0 && k1 < 0 {
                continue;
            }
            let phase = rng.random::<f64>() * TAU;
            if !policy.keeps(k1, k2) {
                continue;
            }
            let a = profile.amplitude(k1, k2);
            let coeffs = field.coeffs_mut();
            if k1 == 0 && k2 == 0 {
                coeffs[0] = Complex64::new(a * phase.cos(), 0.0);
            } else {
                let c = Complex64::from_polar(a, phase);
                coeffs[grid.index_of(k1, k2)] = c;
                coeffs[grid.index_of(-k1, -k2)] = c.conj();
            }
        }
    }
    let norm = field.l2_norm();
    if norm > 0.0 {
        field = field.scale(1.0 / norm);
    }
    Ok(field)
}
