//! Integrating-factor RK4 for `∂ₜθ = −Lθ − N(θ)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Axis, Complex64, Grid, OperatorSpec, SpectralField, VelocityLaw};

use super::config::SimulationConfig;

#[derive(Clone, Debug)]
pub struct SolverState {
    pub t: f64,
    pub theta: SpectralField,
    pub step: u64,
}

/// `dealias(u₁∂₁θ + u₂∂₂θ)`, products taken on the grid.
pub fn nonlinear_term(theta: &SpectralField, law: VelocityLaw) -> Result<SpectralField> {
    let (u1, u2) = law.velocity(theta)?;
    let d1 = theta.apply(OperatorSpec::derivative(Axis::X1))?;
    let d2 = theta.apply(OperatorSpec::derivative(Axis::X2))?;
    let (u1, u2, d1, d2) = (u1.from_spectral()?, u2.from_spectral()?, d1.from_spectral()?, d2.from_spectral()?);
    let mut adv = u1.mul(&d1);
    for (a, (x, y)) in adv.data.iter_mut().zip(u2.data.iter().zip(&d2.data)) {
        *a += x * y;
    }
    let mut out = SpectralField::to_spectral(theta.grid(), &adv)?;
    out.dealias_in_place();
    Ok(out)
}

/// `L(k) = μ|k₁|^{2α} + ν|k₂|^{2β}` per mode.
pub fn linear_symbol(grid: &Grid, config: &SimulationConfig) -> Vec<f64> {
    (0..grid.len())
        .map(|idx| {
            let (k1, k2) = grid.wavenumber(idx);
            let p = |k: i64, s: f64| if k == 0 { 0.0 } else { (k.unsigned_abs() as f64).powf(2.0 * s) };
            config.mu * p(k1, config.alpha) + config.nu * p(k2, config.beta)
        })
        .collect()
}

/// Stepper with the exponential factors for the last `dt` cached.
#[derive(Clone, Debug)]
pub struct IfRk4 {
    grid: Arc<Grid>,
    law: VelocityLaw,
    symbol: Vec<f64>,
    cached_dt: f64,
    /// `e^{−L dt/2}`
    half: Vec<f64>,
    /// `e^{−L dt}`
    full: Vec<f64>,
}

impl IfRk4 {
    pub fn new(grid: &Arc<Grid>, config: &SimulationConfig) -> Self {
        IfRk4 {
            grid: Arc::clone(grid),
            law: config.velocity_law,
            symbol: linear_symbol(grid, config),
            cached_dt: f64::NAN,
            half: Vec::new(),
            full: Vec::new(),
        }
    }

    fn prepare(&mut self, dt: f64) {
        if dt == self.cached_dt {
            return;
        }
        self.half = self.symbol.iter().map(|l| (-l * dt * 0.5).exp()).collect();
        self.full = self.half.iter().map(|e| e * e).collect();
        self.cached_dt = dt;
    }

    fn rhs(&self, theta: &SpectralField, t: f64) -> Result<Vec<Complex64>> {
        let n = nonlinear_term(theta, self.law)?;
        if !n.is_finite() {
            return Err(Error::BlowUp { t, what: "non-finite nonlinear term".into() });
        }
        Ok(n.into_coeffs().into_iter().map(|c| -c).collect())
    }

    fn field(&self, coeffs: Vec<Complex64>) -> Result<SpectralField> {
        let mut f = SpectralField::from_coeffs(&self.grid, coeffs, true)?;
        f.dealias_in_place();
        Ok(f)
    }

    pub fn step(&mut self, state: &SolverState, dt: f64) -> Result<SolverState> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::out_of_range("dt", dt, "(0, ∞)"));
        }
        self.prepare(dt);
        let (e, e2) = (&self.half, &self.full);
        let th = state.theta.coeffs();
        let h = 0.5 * dt;

        let k1 = self.rhs(&state.theta, state.t)?;
        let a: Vec<_> = (0..th.len()).map(|i| e[i] * (th[i] + k1[i] * h)).collect();
        let k2 = self.rhs(&self.field(a)?, state.t + h)?;
        let b: Vec<_> = (0..th.len()).map(|i| e[i] * th[i] + k2[i] * h).collect();
        let k3 = self.rhs(&self.field(b)?, state.t + h)?;
        let c: Vec<_> = (0..th.len()).map(|i| e2[i] * th[i] + e[i] * k3[i] * dt).collect();
        let k4 = self.rhs(&self.field(c)?, state.t + dt)?;
        let next: Vec<_> = (0..th.len())
            .map(|i| e2[i] * th[i] + (e2[i] * k1[i] + (k2[i] + k3[i]) * (2.0 * e[i]) + k4[i]) * (dt / 6.0))
            .collect();
        let theta = self.field(next)?;
        if !theta.is_finite() {
            return Err(Error::BlowUp { t: state.t + dt, what: "non-finite field after step".into() });
        }
        Ok(SolverState { t: state.t + dt, theta, step: state.step + 1 })
    }
}

/// One IF-RK4 step with a fresh stepper.
pub fn step(state: &SolverState, dt: f64, config: &SimulationConfig) -> Result<SolverState> {
    IfRk4::new(state.theta.grid(), config).step(state, dt)
}

pub const CFL_DT_MIN: f64 = 1e-7;
pub const CFL_DT_MAX: f64 = 1e-1;
const CFL_VELOCITY_FLOOR: f64 = 1e-8;

/// `cfl · Δx / max(‖u₁‖∞, ‖u₂‖∞, 1e-8)` clamped to `[1e-7, 1e-1]`.
pub fn cfl_dt_for_velocity(u1: &SpectralField, u2: &SpectralField, cfl_factor: f64) -> Result<f64> {
    let grid = u1.grid();
    let dx = std::f64::consts::TAU / grid.n1().max(grid.n2()) as f64;
    let umax = u1
        .from_spectral()?
        .max_abs()
        .max(u2.from_spectral()?.max_abs())
        .max(CFL_VELOCITY_FLOOR);
    Ok((cfl_factor * dx / umax).clamp(CFL_DT_MIN, CFL_DT_MAX))
}

pub fn cfl_dt(state: &SolverState, config: &SimulationConfig, cfl_factor: f64) -> Result<f64> {
    let (u1, u2) = config.velocity_law.velocity(&state.theta)?;
    cfl_dt_for_velocity(&u1, &u2, cfl_factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::config::InitialCondition;
    use crate::spectral::{random_band_limited_field, SpectrumProfile, ZeroModePolicy};

    fn config(alpha: f64, beta: f64, mu: f64, law: VelocityLaw) -> SimulationConfig {
        let mut c = SimulationConfig::new(
            64,
            alpha,
            beta,
            law,
            InitialCondition::PlaneWave { k1: 3, k2: 2, amplitude: 1.0 },
        );
        c.mu = mu;
        c.nu = mu;
        c
    }

    fn random(n: usize, seed: u64, kmax: usize) -> SpectralField {
        let g = Grid::shared(n, n).unwrap();
        random_band_limited_field(&g, seed, kmax, SpectrumProfile::Decaying { rate: 3.0 }, ZeroModePolicy::Keep).unwrap()
    }

    #[test]
    fn nonlinear_term_of_plane_waves_is_roundoff() {
        let g = Grid::shared(64, 64).unwrap();
        for law in [VelocityLaw::Sqg, VelocityLaw::Pm] {
            for (k1, k2) in [(3, 2), (1, 0), (0, 5), (7, -4)] {
                let th = SpectralField::cosine(&g, k1, k2, 1.0);
                let n = nonlinear_term(&th, law).unwrap();
                let scale = (k1 * k1 + k2 * k2) as f64;
                assert!(n.max_coeff() <= 1e-15 * scale, "{law} ({k1},{k2}): {}", n.max_coeff());
            }
        }
    }

    #[test]
    fn nonlinear_term_of_zero_is_zero() {
        let g = Grid::shared(16, 16).unwrap();
        let n = nonlinear_term(&SpectralField::zeros(&g), VelocityLaw::Sqg).unwrap();
        assert_eq!(n.max_coeff(), 0.0);
    }

    #[test]
    fn nonlinear_term_has_zero_mean() {
        for seed in 0..5 {
            let th = random(64, seed, 21);
            let norm2 = th.l2_norm().powi(2);
            for law in [VelocityLaw::Sqg, VelocityLaw::Pm] {
                let n = nonlinear_term(&th, law).unwrap();
                assert!(n.coeff(0, 0).norm() <= 1e-13 * norm2);
                assert!(n.is_dealiased());
            }
        }
    }

    #[test]
    fn nonlinear_term_matches_direct_evaluation() {
        // pointwise u·∇θ at off-grid points from the series themselves
        let g = Grid::shared(32, 32).unwrap();
        let th = random_band_limited_field(&g, 3, 5, SpectrumProfile::Flat, ZeroModePolicy::Keep).unwrap();
        let (u1, u2) = VelocityLaw::Sqg.velocity(&th).unwrap();
        let d1 = th.apply(OperatorSpec::derivative(Axis::X1)).unwrap();
        let d2 = th.apply(OperatorSpec::derivative(Axis::X2)).unwrap();
        let n = nonlinear_term(&th, VelocityLaw::Sqg).unwrap();
        // kmax 5 keeps the product inside the mask, so nothing is dealiased away
        for (x1, x2) in [(0.3, 1.7), (2.9, 4.4), (5.5, 0.1)] {
            let direct = u1.evaluate_at(x1, x2) * d1.evaluate_at(x1, x2) + u2.evaluate_at(x1, x2) * d2.evaluate_at(x1, x2);
            assert!((n.evaluate_at(x1, x2) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn single_step_plane_wave_decay() {
        let cfg = config(0.5, 0.75, 1.0, VelocityLaw::Sqg);
        let g = Grid::shared(64, 64).unwrap();
        let th = SpectralField::cosine(&g, 3, 2, 1.0);
        let s0 = SolverState { t: 0.0, theta: th.clone(), step: 0 };
        let dt = 1e-3;
        let s1 = step(&s0, dt, &cfg).unwrap();
        let rate = 3.0 + 2f64.powf(1.5);
        let exact = th.scale((-rate * dt).exp());
        let err = s1.theta.sub(&exact).unwrap().max_coeff();
        assert!(err <= 1e-12 * exact.max_coeff());
        assert_eq!(s1.step, 1);
        assert!((s1.t - dt).abs() < 1e-18);
    }

    #[test]
    fn inviscid_plane_wave_is_unchanged() {
        let cfg = config(0.5, 0.75, 0.0, VelocityLaw::Pm);
        let g = Grid::shared(64, 64).unwrap();
        let th = SpectralField::cosine(&g, 3, 2, 1.0);
        let mut s = SolverState { t: 0.0, theta: th.clone(), step: 0 };
        let mut stepper = IfRk4::new(&g, &cfg);
        for _ in 0..50 {
            s = stepper.step(&s, 1e-2).unwrap();
        }
        assert!(s.theta.sub(&th).unwrap().max_coeff() < 1e-14);
    }

    #[test]
    fn fourth_order_on_random_data() {
        let cfg = config(0.5, 0.75, 1.0, VelocityLaw::Sqg);
        let th = random(32, 11, 10).scale(3.0);
        let g = th.grid().clone();
        let run = |dt: f64, steps: usize| {
            let mut st = IfRk4::new(&g, &cfg);
            let mut s = SolverState { t: 0.0, theta: th.clone(), step: 0 };
            for _ in 0..steps {
                s = st.step(&s, dt).unwrap();
            }
            s.theta
        };
        let dt = 0.05;
        let reference = run(dt / 8.0, 8 * 4);
        let e1 = run(dt, 4).sub(&reference).unwrap().l2_norm();
        let e2 = run(dt / 2.0, 8).sub(&reference).unwrap().l2_norm();
        let order = (e1 / e2).log2();
        assert!(order >= 3.8, "observed order {order} ({e1:e} -> {e2:e})");
    }

    #[test]
    fn nan_input_is_blow_up() {
        let cfg = config(0.5, 0.75, 1.0, VelocityLaw::Sqg);
        let g = Grid::shared(16, 16).unwrap();
        let mut th = SpectralField::cosine(&g, 1, 1, 1.0);
        th.coeffs_mut()[g.index_of(1, 1)].re = f64::NAN;
        let s = SolverState { t: 0.25, theta: th, step: 0 };
        match step(&s, 1e-3, &cfg) {
            Err(Error::BlowUp { .. }) | Err(Error::NotReal) => {}
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn cfl_formula() {
        let g = Grid::shared(64, 64).unwrap();
        let zero = SpectralField::zeros(&g);
        assert_eq!(cfl_dt_for_velocity(&zero, &zero, 0.5).unwrap(), CFL_DT_MAX);
        let mut one = SpectralField::zeros(&g);
        one.coeffs_mut()[0].re = 1.0;
        let dt = cfl_dt_for_velocity(&one, &zero, 0.5).unwrap();
        assert!((dt - 0.5 * std::f64::consts::TAU / 64.0).abs() < 1e-15);
        assert!((dt - 0.04909).abs() < 1e-5);
        let g2 = Grid::shared(128, 128).unwrap();
        let mut one2 = SpectralField::zeros(&g2);
        one2.coeffs_mut()[0].re = 1.0;
        let dt2 = cfl_dt_for_velocity(&one2, &SpectralField::zeros(&g2), 0.5).unwrap();
        assert!((dt2 - dt / 2.0).abs() < 1e-16);
        let huge = one.scale(1e12);
        assert_eq!(cfl_dt_for_velocity(&huge, &zero, 0.5).unwrap(), CFL_DT_MIN);
    }
}
