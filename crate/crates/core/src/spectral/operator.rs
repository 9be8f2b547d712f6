use std::fmt;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid, SpectralField};
use crate::error::{Error, Result};

/// Largest admissible multiplier order.
pub const MAX_ORDER: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            _ => Err(Error::InvalidOperator(format!("axis must be 1 or 2, got {i}"))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Axis::X1 => Axis::X2,
            Axis::X2 => Axis::X1,
        }
    }

    #[inline]
    pub(crate) fn pick(self, k1: i64, k2: i64) -> i64 {
        match self {
            Axis::X1 => k1,
            Axis::X2 => k2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X1 => write!(f, "x1"),
            Axis::X2 => write!(f, "x2"),
        }
    }
}

/// Fourier multiplier.
///
/// | kind | symbol |
/// |------|--------|
/// | `DirectionalFractional { axis, order: s }` | `|k_axis|^s` |
/// | `FullFractional { order: s }` | `|k|^s` |
/// | `Riesz { axis }` | `i·k_axis/|k|`, `0` at `k = 0` |
/// | `PartialDerivative { axis }` | `i·k_axis` |
///
/// `|0|^s = 0` for `s > 0`; order `0` is the identity. The odd symbols
/// vanish on the Nyquist row of their axis, which has no conjugate partner.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OperatorSpec {
    DirectionalFractional { axis: Axis, order: f64 },
    FullFractional { order: f64 },
    Riesz { axis: Axis },
    PartialDerivative { axis: Axis },
}

#[inline]
fn power(magnitude: f64, order: f64) -> f64 {
    if order == 0.0 {
        1.0
    } else if magnitude == 0.0 {
        0.0
    } else if order == 1.0 {
        magnitude
    } else if order == 2.0 {
        magnitude * magnitude
    } else {
        magnitude.powf(order)
    }
}

impl OperatorSpec {
    pub fn directional(axis: Axis, order: f64) -> Self {
        OperatorSpec::DirectionalFractional { axis, order }
    }

    pub fn full(order: f64) -> Self {
        OperatorSpec::FullFractional { order }
    }

    pub fn riesz(axis: Axis) -> Self {
        OperatorSpec::Riesz { axis }
    }

    pub fn derivative(axis: Axis) -> Self {
        OperatorSpec::PartialDerivative { axis }
    }

    pub fn validate(&self) -> Result<()> {
        let order = match *self {
            OperatorSpec::DirectionalFractional { order, .. } | OperatorSpec::FullFractional { order } => order,
            _ => return Ok(()),
        };
        if !(0.0..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidOperator(format!(
                "order {order} outside [0, {MAX_ORDER}]"
            )));
        }
        Ok(())
    }

    /// Symbol value at the mode `(k1, k2)` of `grid`.
    pub fn symbol(&self, grid: &Grid, k1: i64, k2: i64) -> Complex64 {
        let nyquist = |axis: Axis| {
            let (k, n) = match axis {
                Axis::X1 => (k1, grid.n1()),
                Axis::X2 => (k2, grid.n2()),
            };
            k == -(n as i64) / 2
        };
        match *self {
            OperatorSpec::DirectionalFractional { axis, order } => {
                Complex64::new(power(axis.pick(k1, k2).unsigned_abs() as f64, order), 0.0)
            }
            OperatorSpec::FullFractional { order } => {
                let m = ((k1 * k1 + k2 * k2) as f64).sqrt();
                Complex64::new(power(m, order), 0.0)
            }
            OperatorSpec::Riesz { axis } => {
                if (k1 == 0 && k2 == 0) || nyquist(axis) {
                    return Complex64::new(0.0, 0.0);
                }
                let m = ((k1 * k1 + k2 * k2) as f64).sqrt();
                Complex64::new(0.0, axis.pick(k1, k2) as f64 / m)
            }
            OperatorSpec::PartialDerivative { axis } => {
                if nyquist(axis) {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::new(0.0, axis.pick(k1, k2) as f64)
            }
        }
    }
}

impl SpectralField {
    /// Per-mode product with the operator symbol.
    pub fn apply(&self, op: OperatorSpec) -> Result<SpectralField> {
        op.validate()?;
        let grid = self.grid().clone();
        let n1 = grid.n1();
        let k1s = grid.k1();
        let k2s = grid.k2();
        let mut coeffs = self.coeffs().to_vec();
        let apply_row = |(i2, row): (usize, &mut [Complex64])| {
            let k2 = k2s[i2];
            for (i1, c) in row.iter_mut().enumerate() {
                *c *= op.symbol(&grid, k1s[i1], k2);
            }
        };
        if coeffs.len() >= 128 * 128 {
            coeffs.par_chunks_mut(n1).enumerate().for_each(apply_row);
        } else {
            coeffs.chunks_mut(n1).enumerate().for_each(apply_row);
        }
        SpectralField::from_coeffs(&grid, coeffs, self.is_real())
    }

    /// Apply a chain of operators right to left (the last one acts first).
    ///
    /// Symbols are multiplied per mode before touching the coefficient, so a
    /// two-operator chain gives the same bits in either order.
    pub fn apply_all(&self, ops: &[OperatorSpec]) -> Result<SpectralField> {
        for op in ops {
            op.validate()?;
        }
        let grid = self.grid().clone();
        let n1 = grid.n1();
        let k1s = grid.k1();
        let k2s = grid.k2();
        let mut coeffs = self.coeffs().to_vec();
        let apply_row = |(i2, row): (usize, &mut [Complex64])| {
            let k2 = k2s[i2];
            for (i1, c) in row.iter_mut().enumerate() {
                let mut sym = Complex64::new(1.0, 0.0);
                for op in ops.iter().rev() {
                    sym *= op.symbol(&grid, k1s[i1], k2);
                }
                *c *= sym;
            }
        };
        if coeffs.len() >= 128 * 128 {
            coeffs.par_chunks_mut(n1).enumerate().for_each(apply_row);
        } else {
            coeffs.chunks_mut(n1).enumerate().for_each(apply_row);
        }
        SpectralField::from_coeffs(&grid, coeffs, self.is_real())
    }

    /// Spectral divergence `∂₁u₁ + ∂₂u₂`, maximum modulus over modes.
    pub fn max_divergence(u1: &SpectralField, u2: &SpectralField) -> Result<f64> {
        let d1 = u1.apply(OperatorSpec::derivative(Axis::X1))?;
        let d2 = u2.apply(OperatorSpec::derivative(Axis::X2))?;
        Ok(d1
            .coeffs()
            .iter()
            .zip(d2.coeffs())
            .map(|(a, b)| (a + b).norm())
            .fold(0.0, f64::max))
    }
}

/// Velocity law of the transport term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VelocityLaw {
    /// `u = (−R₂θ, R₁θ)`.
    Sqg,
    /// `u = (−R₁R₂θ, R₁R₁θ)`.
    Pm,
}

impl VelocityLaw {
    pub fn velocity(self, theta: &SpectralField) -> Result<(SpectralField, SpectralField)> {
        match self {
            VelocityLaw::Sqg => velocity_sqg(theta),
            VelocityLaw::Pm => velocity_pm(theta),
        }
    }
}

impl fmt::Display for VelocityLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VelocityLaw::Sqg => write!(f, "sqg"),
            VelocityLaw::Pm => write!(f, "pm"),
        }
    }
}

/// SQG velocity `(−R₂θ, R₁θ)`.
pub fn velocity_sqg(theta: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let u1 = theta.apply(OperatorSpec::riesz(Axis::X2))?.scale(-1.0);
    let u2 = theta.apply(OperatorSpec::riesz(Axis::X1))?;
    Ok((u1, u2))
}

/// Porous-medium velocity `(−R₁R₂θ, R₁R₁θ)`.
pub fn velocity_pm(theta: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let r1 = theta.apply(OperatorSpec::riesz(Axis::X1))?;
    let u1 = r1.apply(OperatorSpec::riesz(Axis::X2))?.scale(-1.0);
    let u2 = r1.apply(OperatorSpec::riesz(Axis::X1))?;
    Ok((u1, u2))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::spectral::{random_band_limited_field, SpectrumProfile, ZeroModePolicy};

    fn grid(n: usize) -> Arc<Grid> {
        Grid::shared(n, n).unwrap()
    }

    fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn directional_symbol_on_cosine() {
        let g = grid(32);
        let f = SpectralField::cosine(&g, 3, 0, 1.0);
        let out = f.apply(OperatorSpec::directional(Axis::X1, 1.2)).unwrap();
        let expected = f.scale(3f64.powf(1.2));
        assert!((3f64.powf(1.2) - 3.7372).abs() < 1e-4);
        assert!(max_diff(&out, &expected) < 1e-13);
    }

    #[test]
    fn directional_axis_two_reads_second_wavenumber() {
        let g = grid(32);
        let f = SpectralField::cosine(&g, 3, 2, 1.0);
        let out = f.apply(OperatorSpec::directional(Axis::X2, 1.0)).unwrap();
        assert!(max_diff(&out, &f.scale(2.0)) < 1e-15);
    }

    #[test]
    fn riesz_of_sine_is_cosine() {
        let g = grid(16);
        let out = SpectralField::sine(&g, 1, 0, 1.0)
            .apply(OperatorSpec::riesz(Axis::X1))
            .unwrap();
        assert!(max_diff(&out, &SpectralField::cosine(&g, 1, 0, 1.0)) < 1e-15);
    }

    #[test]
    fn order_range_is_enforced() {
        let g = grid(8);
        let f = SpectralField::zeros(&g);
        assert!(f.apply(OperatorSpec::full(4.5)).is_err());
        assert!(f.apply(OperatorSpec::directional(Axis::X1, -0.1)).is_err());
        assert!(f.apply(OperatorSpec::full(4.0)).is_ok());
    }

    #[test]
    fn zero_order_is_identity_and_zero_mode_vanishes() {
        let g = grid(8);
        let mut f = SpectralField::cosine(&g, 1, 1, 1.0);
        f.coeffs_mut()[0] = Complex64::new(2.0, 0.0);
        let id = f.apply(OperatorSpec::full(0.0)).unwrap();
        assert_eq!(id.coeffs(), f.coeffs());
        let half = f.apply(OperatorSpec::full(0.5)).unwrap();
        assert_eq!(half.coeff(0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn eigenfunction_property_for_every_operator() {
        let g = grid(16);
        let ops = [
            OperatorSpec::directional(Axis::X1, 0.7),
            OperatorSpec::directional(Axis::X2, 2.5),
            OperatorSpec::full(1.3),
            OperatorSpec::riesz(Axis::X1),
            OperatorSpec::riesz(Axis::X2),
            OperatorSpec::derivative(Axis::X1),
            OperatorSpec::derivative(Axis::X2),
        ];
        for &(k1, k2) in &[(1, 0), (3, -2), (-5, 4), (0, 7)] {
            let mut f = SpectralField::zeros(&g);
            f.coeffs_mut()[g.index_of(k1, k2)] = Complex64::new(1.0, 0.0);
            let f = SpectralField::from_coeffs(&g, f.into_coeffs(), false).unwrap();
            for op in ops {
                let out = f.apply(op).unwrap();
                let (a1, a2) = (k1 as f64, k2 as f64);
                let m = (a1 * a1 + a2 * a2).sqrt();
                let expected = match op {
                    OperatorSpec::DirectionalFractional { axis: Axis::X1, order } => Complex64::new(a1.abs().powf(order), 0.0),
                    OperatorSpec::DirectionalFractional { axis: Axis::X2, order } => Complex64::new(a2.abs().powf(order), 0.0),
                    OperatorSpec::FullFractional { order } => Complex64::new(m.powf(order), 0.0),
                    OperatorSpec::Riesz { axis: Axis::X1 } => Complex64::new(0.0, a1 / m),
                    OperatorSpec::Riesz { axis: Axis::X2 } => Complex64::new(0.0, a2 / m),
                    OperatorSpec::PartialDerivative { axis: Axis::X1 } => Complex64::new(0.0, a1),
                    OperatorSpec::PartialDerivative { axis: Axis::X2 } => Complex64::new(0.0, a2),
                };
                let got = out.coeff(k1, k2);
                assert!((got - expected).norm() <= 1e-13 * expected.norm().max(1e-300), "{op:?} at ({k1},{k2})");
            }
        }
    }

    #[test]
    fn directional_multipliers_commute_bitwise() {
        let g = grid(32);
        let f = random_band_limited_field(&g, 4, 10, SpectrumProfile::Flat, ZeroModePolicy::Keep).unwrap();
        let a = OperatorSpec::directional(Axis::X1, 0.8);
        let b = OperatorSpec::directional(Axis::X2, 1.4);
        let ab = f.apply_all(&[a, b]).unwrap();
        let ba = f.apply_all(&[b, a]).unwrap();
        assert_eq!(ab.coeffs(), ba.coeffs());
        // one at a time the rounding differs, but only in the last bits
        let seq = f.apply(a).unwrap().apply(b).unwrap();
        for (x, y) in seq.coeffs().iter().zip(ab.coeffs()) {
            assert!((x - y).norm() <= 4.0 * f64::EPSILON * y.norm());
        }
    }

    #[test]
    fn outputs_stay_hermitian() {
        let g = grid(16);
        let f = random_band_limited_field(&g, 9, 5, SpectrumProfile::Flat, ZeroModePolicy::Keep).unwrap();
        for op in [
            OperatorSpec::riesz(Axis::X2),
            OperatorSpec::derivative(Axis::X1),
            OperatorSpec::full(2.2),
        ] {
            assert!(f.apply(op).unwrap().hermitian_defect() < 1e-16);
        }
        // Nyquist content is annihilated by odd symbols.
        let mut nyq = SpectralField::zeros(&g);
        nyq.coeffs_mut()[g.index_of(-8, 0)] = Complex64::new(1.0, 0.0);
        assert_eq!(nyq.apply(OperatorSpec::derivative(Axis::X1)).unwrap().max_coeff(), 0.0);
    }

    #[test]
    fn sqg_velocity_of_single_modes() {
        let g = grid(16);
        let (u1, u2) = velocity_sqg(&SpectralField::sine(&g, 1, 0, 1.0)).unwrap();
        assert!(u1.max_coeff() < 1e-16);
        assert!(max_diff(&u2, &SpectralField::cosine(&g, 1, 0, 1.0)) < 1e-15);
        let (u1, u2) = velocity_sqg(&SpectralField::sine(&g, 0, 1, 1.0)).unwrap();
        assert!(max_diff(&u1, &SpectralField::cosine(&g, 0, 1, -1.0)) < 1e-15);
        assert!(u2.max_coeff() < 1e-16);
    }

    #[test]
    fn pm_velocity_of_single_modes() {
        let g = grid(16);
        let (u1, u2) = velocity_pm(&SpectralField::sine(&g, 1, 0, 1.0)).unwrap();
        assert!(u1.max_coeff() < 1e-16);
        assert!(max_diff(&u2, &SpectralField::sine(&g, 1, 0, -1.0)) < 1e-15);
        let (u1, u2) = velocity_pm(&SpectralField::sine(&g, 0, 1, 1.0)).unwrap();
        assert_eq!(u1.max_coeff(), 0.0);
        assert_eq!(u2.max_coeff(), 0.0);
    }

    #[test]
    fn velocities_are_divergence_free() {
        let g = grid(64);
        for seed in 0..5 {
            let theta = random_band_limited_field(&g, seed, 21, SpectrumProfile::Flat, ZeroModePolicy::Keep).unwrap();
            let norm = theta.l2_norm();
            for law in [VelocityLaw::Sqg, VelocityLaw::Pm] {
                let (u1, u2) = law.velocity(&theta).unwrap();
                let div = SpectralField::max_divergence(&u1, &u2).unwrap();
                assert!(div <= 1e-14 * norm, "{law} seed {seed}: {div:e}");
            }
        }
    }
}
