//! Binary checkpoints.
//!
//! Layout, all little-endian: `b"ASQG"`, `u32` version, `u32 n1`, `u32 n2`,
//! then `t, alpha, beta, mu, nu` as `f64`, then the `n1·n2` real-space
//! samples as `f64` with `x₂` as the outer index.

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Grid, PhysicalField, SpectralField};

pub const MAGIC: [u8; 4] = *b"ASQG";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 5 * 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub samples: PhysicalField,
}

impl Checkpoint {
    pub fn from_field(theta: &SpectralField, t: f64, alpha: f64, beta: f64, mu: f64, nu: f64) -> Result<Self> {
        Ok(Checkpoint { t, alpha, beta, mu, nu, samples: theta.from_spectral()? })
    }

    /// Back to coefficients on a fresh grid, dealiased.
    pub fn field(&self) -> Result<SpectralField> {
        let grid: Arc<Grid> = Grid::shared(self.samples.n1, self.samples.n2)?;
        let mut f = SpectralField::to_spectral(&grid, &self.samples)?;
        f.dealias_in_place();
        Ok(f)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * self.samples.data.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.samples.n1 as u32).to_le_bytes());
        out.extend_from_slice(&(self.samples.n2 as u32).to_le_bytes());
        for v in [self.t, self.alpha, self.beta, self.mu, self.nu] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in &self.samples.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(Error::CheckpointTruncated { expected: HEADER_LEN, found: bytes.len() });
        }
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(Error::CheckpointMagic { found: magic });
        }
        if bytes.len() < 8 {
            return Err(Error::CheckpointTruncated { expected: HEADER_LEN, found: bytes.len() });
        }
        let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(Error::CheckpointVersion { found: version, expected: VERSION });
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::CheckpointTruncated { expected: HEADER_LEN, found: bytes.len() });
        }
        let (n1, n2) = (u32_at(8) as usize, u32_at(12) as usize);
        let f64_at = |at: usize| f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let expected = n1
            .checked_mul(n2)
            .and_then(|n| n.checked_mul(8))
            .and_then(|n| n.checked_add(HEADER_LEN))
            .ok_or(Error::InvalidGrid { n1, n2, reason: "checkpoint dimensions overflow" })?;
        if bytes.len() < expected {
            return Err(Error::CheckpointTruncated { expected, found: bytes.len() });
        }
        if bytes.len() > expected {
            return Err(Error::CheckpointTrailing { extra: bytes.len() - expected });
        }
        let data = (0..n1 * n2).map(|i| f64_at(HEADER_LEN + 8 * i)).collect();
        Ok(Checkpoint {
            t: f64_at(16),
            alpha: f64_at(24),
            beta: f64_at(32),
            mu: f64_at(40),
            nu: f64_at(48),
            samples: PhysicalField::new(n1, n2, data)?,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{random_band_limited_field, SpectrumProfile, ZeroModePolicy};

    fn sample() -> Checkpoint {
        let g = Grid::shared(16, 8).unwrap();
        let f = random_band_limited_field(&g, 1, 2, SpectrumProfile::Flat, ZeroModePolicy::Keep).unwrap();
        Checkpoint::from_field(&f, 0.125, 0.5, 0.6, 1.0, 0.5).unwrap()
    }

    #[test]
    fn round_trip_is_bitwise() {
        let c = sample();
        let bytes = c.to_bytes();
        assert_eq!(bytes.len(), HEADER_LEN + 16 * 8 * 8);
        let back = Checkpoint::from_bytes(&bytes).unwrap();
        assert_eq!(back, c);
        let same_bits = back.samples.data.iter().zip(&c.samples.data).all(|(a, b)| a.to_bits() == b.to_bits());
        assert!(same_bits);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn layout_is_fixed() {
        let bytes = sample().to_bytes();
        assert_eq!(&bytes[..4], b"ASQG");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 16);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 0.125);
    }

    #[test]
    fn distinct_errors() {
        let bytes = sample().to_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Checkpoint::from_bytes(&bad), Err(Error::CheckpointMagic { .. })));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(Checkpoint::from_bytes(&bad), Err(Error::CheckpointVersion { found: 2, expected: 1 })));
        assert!(matches!(
            Checkpoint::from_bytes(&bytes[..bytes.len() - 8]),
            Err(Error::CheckpointTruncated { .. })
        ));
        assert!(matches!(Checkpoint::from_bytes(&bytes[..20]), Err(Error::CheckpointTruncated { .. })));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(Checkpoint::from_bytes(&long), Err(Error::CheckpointTrailing { extra: 1 })));
    }

    #[test]
    fn field_round_trip() {
        let c = sample();
        let f = c.field().unwrap();
        let again = Checkpoint::from_field(&f, c.t, c.alpha, c.beta, c.mu, c.nu).unwrap();
        for (a, b) in again.samples.data.iter().zip(&c.samples.data) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
