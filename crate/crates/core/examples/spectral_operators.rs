//! Fourier multipliers, Riesz transforms and the norm zoo on one field.

use asqg::norms::{besov_b0_inf, directional_seminorm, norm, NormSpec};
use asqg::spectral::{random_band_limited_field, SpectrumProfile, ZeroModePolicy};
use asqg::{Axis, Grid, OperatorSpec, SpectralField};

fn main() -> asqg::Result<()> {
    let grid = Grid::shared(64, 64)?;

    // Λ^s_{x1} acts on cos(k x1) as multiplication by |k|^s
    let mode = SpectralField::cosine(&grid, 5, 0, 1.0);
    let lifted = mode.apply(OperatorSpec::directional(Axis::X1, 1.5))?;
    println!("‖Λ^1.5_x1 cos 5x1‖ / ‖cos 5x1‖ = {:.12} (5^1.5 = {:.12})", lifted.l2_norm() / mode.l2_norm(), 5f64.powf(1.5));

    // R1² + R2² = −I away from the zero mode
    let f = random_band_limited_field(&grid, 3, 12, SpectrumProfile::Decaying { rate: 1.0 }, ZeroModePolicy::Keep)?;
    let mut mean_free = f.clone();
    mean_free.coeffs_mut()[0] = Default::default();
    let f = mean_free;
    let r1 = f.apply_all(&[OperatorSpec::riesz(Axis::X1), OperatorSpec::riesz(Axis::X1)])?;
    let r2 = f.apply_all(&[OperatorSpec::riesz(Axis::X2), OperatorSpec::riesz(Axis::X2)])?;
    println!("‖(R1² + R2²)f + f‖ = {:.3e}", r1.add(&r2)?.add(&f)?.l2_norm());

    for (name, spec) in [
        ("L2", NormSpec::Lebesgue(2.0)),
        ("L4", NormSpec::Lebesgue(4.0)),
        ("L∞", NormSpec::Sup),
        ("H1", NormSpec::FullSobolev { s: 1.0 }),
        ("L^4_x2 L^2_x1", NormSpec::Mixed { p: 2.0, q: 4.0 }),
    ] {
        println!("{name:>14} {:.6}", norm(&f, spec)?);
    }
    println!("{:>14} {:.6}", "Λ^0.3_x2", directional_seminorm(&f, Axis::X2, 0.3));
    println!("{:>14} {:.6}", "B^0_∞,∞", besov_b0_inf(&f)?);
    Ok(())
}
