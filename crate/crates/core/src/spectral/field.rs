use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::{Grid, DOMAIN_MEASURE};
use crate::error::{Error, Result};

/// Relative tolerance on the imaginary residue of an inverse transform.
const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Real-space samples on an `n1 x n2` grid, row-major with `x₂` outer.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    pub n1: usize,
    pub n2: usize,
    pub data: Vec<f64>,
}

impl PhysicalField {
    pub fn new(n1: usize, n2: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n1 * n2 {
            return Err(Error::InvalidConfig(format!(
                "{} samples cannot fill a {n1}x{n2} array",
                data.len()
            )));
        }
        Ok(PhysicalField { n1, n2, data })
    }

    /// Sample `f(x₁, x₂)` at the grid nodes.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for j2 in 0..grid.n2() {
            for j1 in 0..grid.n1() {
                let (x1, x2) = grid.coordinates(j1, j2);
                data.push(f(x1, x2));
            }
        }
        PhysicalField {
            n1: grid.n1(),
            n2: grid.n2(),
            data,
        }
    }

    #[inline]
    pub fn at(&self, j1: usize, j2: usize) -> f64 {
        self.data[j2 * self.n1 + j1]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Pointwise product with another sample array of the same shape.
    pub fn mul(&self, other: &PhysicalField) -> PhysicalField {
        debug_assert_eq!(self.data.len(), other.data.len());
        PhysicalField {
            n1: self.n1,
            n2: self.n2,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

/// A scalar field stored as Fourier coefficients of the mean-normalized DFT.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        SpectralField {
            grid: Arc::clone(grid),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
            real: true,
        }
    }

    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: Vec<Complex64>, real: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected_n1: grid.n1(),
                expected_n2: grid.n2(),
                got_n1: coeffs.len(),
                got_n2: 1,
            });
        }
        Ok(SpectralField {
            grid: Arc::clone(grid),
            coeffs,
            real,
        })
    }

    /// Field with a single pair of conjugate modes: `amplitude·cos(k·x)`.
    pub fn cosine(grid: &Arc<Grid>, k1: i64, k2: i64, amplitude: f64) -> Self {
        let mut f = Self::zeros(grid);
        let i = grid.index_of(k1, k2);
        let j = grid.index_of(-k1, -k2);
        if i == j {
            f.coeffs[i] += Complex64::new(amplitude, 0.0);
        } else {
            f.coeffs[i] += Complex64::new(0.5 * amplitude, 0.0);
            f.coeffs[j] += Complex64::new(0.5 * amplitude, 0.0);
        }
        f
    }

    /// `amplitude·sin(k·x)`.
    pub fn sine(grid: &Arc<Grid>, k1: i64, k2: i64, amplitude: f64) -> Self {
        let mut f = Self::zeros(grid);
        let i = grid.index_of(k1, k2);
        let j = grid.index_of(-k1, -k2);
        if i != j {
            f.coeffs[i] += Complex64::new(0.0, -0.5 * amplitude);
            f.coeffs[j] += Complex64::new(0.0, 0.5 * amplitude);
        }
        f
    }

    /// Forward transform of real samples. The zero mode equals the mean.
    pub fn to_spectral(grid: &Arc<Grid>, samples: &PhysicalField) -> Result<Self> {
        if samples.n1 != grid.n1() || samples.n2 != grid.n2() {
            return Err(Error::DimensionMismatch {
                expected_n1: grid.n1(),
                expected_n2: grid.n2(),
                got_n1: samples.n1,
                got_n2: samples.n2,
            });
        }
        let mut buf: Vec<Complex64> = samples
            .data
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        grid.fft2(&mut buf, false);
        let scale = 1.0 / grid.len() as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Ok(SpectralField {
            grid: Arc::clone(grid),
            coeffs: buf,
            real: true,
        })
    }

    /// Inverse transform to real samples, rejecting fields whose imaginary
    /// residue exceeds `1e-12` of their amplitude.
    pub fn from_spectral(&self) -> Result<PhysicalField> {
        if !self.real {
            return Err(Error::NotReal);
        }
        let buf = self.inverse_complex();
        let mut residue = 0.0_f64;
        let mut amplitude = 0.0_f64;
        for z in &buf {
            residue = residue.max(z.im.abs());
            amplitude = amplitude.max(z.norm());
        }
        let tolerance = HERMITIAN_TOLERANCE * amplitude;
        if residue > tolerance {
            return Err(Error::NotHermitian { residue, tolerance });
        }
        Ok(PhysicalField {
            n1: self.grid.n1(),
            n2: self.grid.n2(),
            data: buf.into_iter().map(|z| z.re).collect(),
        })
    }

    pub(crate) fn inverse_complex(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        self.grid.fft2(&mut buf, true);
        buf
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Coefficient of the mode `(k1, k2)`.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeffs[self.grid.index_of(k1, k2)]
    }

    /// Largest deviation from `c(−k) = conj(c(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[self.grid.conjugate_index(i)] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ |c_k|²`.
    pub fn coefficient_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `‖f‖_{L²(T²)}` via Parseval, `2π·(Σ|c_k|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (DOMAIN_MEASURE * self.coefficient_energy()).sqrt()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Zero every mode outside the two-thirds mask.
    pub fn dealias(&self) -> Self {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub fn dealias_in_place(&mut self) {
        for (c, &keep) in self.coeffs.iter_mut().zip(self.grid.mask()) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn is_dealiased(&self) -> bool {
        self.coeffs
            .iter()
            .zip(self.grid.mask())
            .all(|(c, &keep)| keep || (c.re == 0.0 && c.im == 0.0))
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= factor;
        }
        out
    }

    fn check_same_grid(&self, other: &SpectralField) -> Result<()> {
        if *self.grid != *other.grid {
            return Err(Error::GridMismatch(format!(
                "{}x{} vs {}x{}",
                self.grid.n1(),
                self.grid.n2(),
                other.grid.n1(),
                other.grid.n2()
            )));
        }
        Ok(())
    }

    /// Linear combination `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &SpectralField, b: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Ok(SpectralField {
            grid: Arc::clone(&self.grid),
            coeffs,
            real: self.real && other.real,
        })
    }

    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        self.axpby(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self> {
        self.axpby(1.0, other, -1.0)
    }

    /// Pseudo-spectral product of two real fields, evaluated on this grid.
    /// Aliasing is not removed; callers dealias or pad as they need.
    pub fn product(&self, other: &SpectralField) -> Result<Self> {
        self.check_same_grid(other)?;
        let a = self.from_spectral()?;
        let b = other.from_spectral()?;
        Self::to_spectral(&self.grid, &a.mul(&b))
    }

    /// Re-express the field on another grid by zero padding or truncating
    /// the coefficient table. Exact whenever every nonzero mode fits.
    ///
    /// Modes on the Nyquist row of the target are dropped so the result
    /// stays Hermitian.
    pub fn resample(&self, target: &Arc<Grid>) -> Self {
        let mut out = SpectralField::zeros(target);
        let (h1, h2) = (target.n1() as i64 / 2, target.n2() as i64 / 2);
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let (k1, k2) = self.grid.wavenumber(idx);
            if k1.abs() >= h1 || k2.abs() >= h2 {
                continue;
            }
            out.coeffs[target.index_of(k1, k2)] = *c;
        }
        out.real = self.real;
        out
    }

    /// Evaluate the trigonometric series at an arbitrary point by direct
    /// summation. `O(n1·n2)`; meant for oracles and probes.
    pub fn evaluate_at(&self, x1: f64, x2: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let (k1, k2) = self.grid.wavenumber(idx);
            let phase = k1 as f64 * x1 + k2 as f64 * x2;
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        acc.re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> Arc<Grid> {
        Grid::shared(n, n).unwrap()
    }

    #[test]
    fn constant_maps_to_mean_mode() {
        let g = grid(16);
        let f = SpectralField::to_spectral(&g, &PhysicalField::from_fn(&g, |_, _| 5.0)).unwrap();
        assert!((f.coeff(0, 0).re - 5.0).abs() < 1e-14);
        let rest: f64 = f.coeffs().iter().skip(1).map(|c| c.norm()).sum();
        assert!(rest < 1e-13);
    }

    #[test]
    fn cosine_has_half_amplitude_modes() {
        let g = grid(64);
        let f = SpectralField::to_spectral(&g, &PhysicalField::from_fn(&g, |x, _| x.cos())).unwrap();
        assert!((f.coeff(1, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-13);
        assert!((f.coeff(-1, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-13);
        let others = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != g.index_of(1, 0) && *i != g.index_of(-1, 0))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert!(others < 1e-13);
    }

    #[test]
    fn round_trip_reproduces_random_samples() {
        let g = Grid::shared(32, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let data: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-3.0..3.0)).collect();
        let input = PhysicalField::new(32, 16, data).unwrap();
        let back = SpectralField::to_spectral(&g, &input)
            .unwrap()
            .from_spectral()
            .unwrap();
        let err = input
            .data
            .iter()
            .zip(&back.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-13 * input.max_abs(), "err = {err:e}");
    }

    #[test]
    fn zero_and_constant_fields_invert_trivially() {
        let g = grid(8);
        assert!(SpectralField::zeros(&g)
            .from_spectral()
            .unwrap()
            .data
            .iter()
            .all(|&v| v == 0.0));
        let mut c = SpectralField::zeros(&g);
        c.coeffs_mut()[0] = Complex64::new(3.0, 0.0);
        assert!(c.from_spectral().unwrap().data.iter().all(|&v| (v - 3.0).abs() < 1e-15));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = grid(16);
        let samples = PhysicalField::new(8, 8, vec![0.0; 64]).unwrap();
        let err = SpectralField::to_spectral(&g, &samples).unwrap_err();
        assert!(err.to_string().contains("expected 16x16"));
    }

    #[test]
    fn corrupted_field_is_rejected() {
        let g = grid(16);
        let mut f = SpectralField::cosine(&g, 2, 1, 1.0);
        let i = g.index_of(2, 1);
        f.coeffs_mut()[i] = Complex64::new(0.5, 0.3);
        assert!(matches!(f.from_spectral(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn complex_flag_is_rejected() {
        let g = grid(8);
        let f = SpectralField::from_coeffs(&g, vec![Complex64::new(0.0, 0.0); 64], false).unwrap();
        assert!(matches!(f.from_spectral(), Err(Error::NotReal)));
    }

    #[test]
    fn dealias_zeroes_high_modes_and_is_idempotent() {
        let g = grid(64);
        let f = SpectralField::cosine(&g, 31, 0, 1.0).add(&SpectralField::cosine(&g, 3, 2, 1.0)).unwrap();
        let d = f.dealias();
        assert_eq!(d.coeff(31, 0), Complex64::new(0.0, 0.0));
        assert_eq!(d.coeff(3, 2), f.coeff(3, 2));
        let dd = d.dealias();
        assert_eq!(d.coeffs(), dd.coeffs());
        let inside = SpectralField::cosine(&g, 21, -21, 2.0);
        assert_eq!(inside.dealias().coeffs(), inside.coeffs());
    }

    #[test]
    fn plancherel_matches_quadrature() {
        let g = grid(32);
        let f = SpectralField::cosine(&g, 3, 1, 1.3)
            .add(&SpectralField::sine(&g, -2, 5, 0.4))
            .unwrap();
        let samples = f.from_spectral().unwrap();
        let quad = (samples.data.iter().map(|v| v * v).sum::<f64>() / g.len() as f64 * DOMAIN_MEASURE).sqrt();
        assert!((quad - f.l2_norm()).abs() <= 1e-12 * quad);
    }

    #[test]
    fn resample_preserves_band_limited_fields() {
        let g = grid(16);
        let big = grid(32);
        let f = SpectralField::cosine(&g, 3, -2, 1.0).add(&SpectralField::sine(&g, 1, 4, 0.5)).unwrap();
        let up = f.resample(&big);
        let down = up.resample(&g);
        assert_eq!(down.coeffs(), f.coeffs());
        let x = (0.3, 1.7);
        assert!((f.evaluate_at(x.0, x.1) - up.evaluate_at(x.0, x.1)).abs() < 1e-14);
    }
}
