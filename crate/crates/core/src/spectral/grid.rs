use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Row count above which the 2D transforms fan out over rayon.
const PARALLEL_THRESHOLD: usize = 128 * 128;

/// Discretization of the torus: resolution, wavenumber tables, two-thirds
/// dealias mask and cached FFT plans.
pub struct Grid {
    n1: usize,
    n2: usize,
    k1: Vec<i64>,
    k2: Vec<i64>,
    mask: Vec<bool>,
    fwd1: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n1", &self.n1)
            .field("n2", &self.n2)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n1 == other.n1 && self.n2 == other.n2
    }
}

fn wavenumbers(n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| {
            if i < n / 2 {
                i as i64
            } else {
                i as i64 - n as i64
            }
        })
        .collect()
}

impl Grid {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 < 8 || n2 < 8 {
            return Err(Error::InvalidGrid {
                n1,
                n2,
                reason: "each axis needs at least 8 modes",
            });
        }
        if n1 % 2 != 0 || n2 % 2 != 0 {
            return Err(Error::InvalidGrid {
                n1,
                n2,
                reason: "mode counts must be even",
            });
        }
        let k1 = wavenumbers(n1);
        let k2 = wavenumbers(n2);
        let mut mask = Vec::with_capacity(n1 * n2);
        for &q2 in &k2 {
            for &q1 in &k1 {
                mask.push(3 * q1.unsigned_abs() as usize <= n1 && 3 * q2.unsigned_abs() as usize <= n2);
            }
        }
        let mut planner = FftPlanner::new();
        Ok(Grid {
            n1,
            n2,
            k1,
            k2,
            mask,
            fwd1: planner.plan_fft_forward(n1),
            inv1: planner.plan_fft_inverse(n1),
            fwd2: planner.plan_fft_forward(n2),
            inv2: planner.plan_fft_inverse(n2),
        })
    }

    /// Convenience constructor returning the grid behind an `Arc`, which is
    /// how fields hold on to it.
    pub fn shared(n1: usize, n2: usize) -> Result<Arc<Self>> {
        Self::new(n1, n2).map(Arc::new)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed wavenumbers along `x₁`, FFT ordering.
    pub fn k1(&self) -> &[i64] {
        &self.k1
    }

    /// Signed wavenumbers along `x₂`, FFT ordering.
    pub fn k2(&self) -> &[i64] {
        &self.k2
    }

    /// `true` for retained modes, `|k₁| ≤ n₁/3` and `|k₂| ≤ n₂/3`.
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Wavenumber pair of the mode stored at `idx`.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> (i64, i64) {
        (self.k1[idx % self.n1], self.k2[idx / self.n1])
    }

    /// Storage index of the wavenumber pair, wrapping negative values.
    pub fn index_of(&self, k1: i64, k2: i64) -> usize {
        let i1 = k1.rem_euclid(self.n1 as i64) as usize;
        let i2 = k2.rem_euclid(self.n2 as i64) as usize;
        i2 * self.n1 + i1
    }

    /// Index of the mode `-k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let i1 = idx % self.n1;
        let i2 = idx / self.n1;
        let j1 = (self.n1 - i1) % self.n1;
        let j2 = (self.n2 - i2) % self.n2;
        j2 * self.n1 + j1
    }

    /// Physical coordinates of sample `(j1, j2)`.
    pub fn coordinates(&self, j1: usize, j2: usize) -> (f64, f64) {
        (
            super::DOMAIN_LENGTH * j1 as f64 / self.n1 as f64,
            super::DOMAIN_LENGTH * j2 as f64 / self.n2 as f64,
        )
    }

    /// Unnormalized in-place 2D DFT (forward: `e^{-ik·x}`).
    pub(crate) fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.len());
        let (row, col) = if inverse {
            (&self.inv1, &self.inv2)
        } else {
            (&self.fwd1, &self.fwd2)
        };
        let parallel = self.len() >= PARALLEL_THRESHOLD;
        transform_rows(row.as_ref(), data, self.n1, parallel);
        let mut t = transpose(data, self.n1, self.n2);
        transform_rows(col.as_ref(), &mut t, self.n2, parallel);
        let back = transpose(&t, self.n2, self.n1);
        data.copy_from_slice(&back);
    }
}

fn transform_rows(fft: &dyn Fft<f64>, data: &mut [Complex64], len: usize, parallel: bool) {
    if parallel {
        let rows_per_task = 16;
        data.par_chunks_mut(len * rows_per_task)
            .for_each(|chunk| fft.process(chunk));
    } else {
        fft.process(data);
    }
}

/// Transpose a row-major `rows x cols` array (`cols` contiguous).
fn transpose(data: &[Complex64], cols: usize, rows: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}
