use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::VelocityLaw;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeStep {
    Fixed(f64),
    /// CFL factor; `dt` is recomputed from the velocity before every step.
    Cfl(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// `amplitude · cos(k1 x1 + k2 x2)`.
    PlaneWave { k1: i64, k2: i64, amplitude: f64 },
    /// Random band-limited data with zero mean, rescaled so `max|θ₀| = amplitude`.
    /// `decay` selects a `(1+|k|²)^{-decay/2}` amplitude profile; absent means flat.
    Random {
        seed: u64,
        kmax: usize,
        amplitude: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decay: Option<f64>,
    },
    FromCheckpoint { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n1: usize,
    pub n2: usize,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub velocity_law: VelocityLaw,
    pub t_end: f64,
    pub time_step: TimeStep,
    pub initial_condition: InitialCondition,
    pub diagnostics_every: usize,
}

impl SimulationConfig {
    /// `μ = ν = 1`, fixed `dt`, diagnostics every step.
    pub fn new(n: usize, alpha: f64, beta: f64, velocity_law: VelocityLaw, initial_condition: InitialCondition) -> Self {
        SimulationConfig {
            n1: n,
            n2: n,
            alpha,
            beta,
            mu: 1.0,
            nu: 1.0,
            velocity_law,
            t_end: 1.0,
            time_step: TimeStep::Fixed(1e-3),
            initial_condition,
            diagnostics_every: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::out_of_range(name, v, "(0, 1]"));
            }
        }
        for (name, v) in [("mu", self.mu), ("nu", self.nu)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::out_of_range(name, v, "[0, ∞)"));
            }
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::out_of_range("t_end", self.t_end, "(0, ∞)"));
        }
        match self.time_step {
            TimeStep::Fixed(dt) if !(dt > 0.0 && dt.is_finite()) => {
                return Err(Error::out_of_range("dt", dt, "(0, ∞)"));
            }
            TimeStep::Cfl(c) if !(c > 0.0 && c.is_finite()) => {
                return Err(Error::out_of_range("cfl_factor", c, "(0, ∞)"));
            }
            _ => {}
        }
        if self.diagnostics_every == 0 {
            return Err(Error::InvalidConfig("diagnostics_every must be at least 1".into()));
        }
        match &self.initial_condition {
            InitialCondition::PlaneWave { amplitude, .. } | InitialCondition::Random { amplitude, .. }
                if !(*amplitude > 0.0 && amplitude.is_finite()) =>
            {
                Err(Error::out_of_range("amplitude", *amplitude, "(0, ∞)"))
            }
            InitialCondition::Random { decay: Some(d), .. } if !(d.is_finite() && *d >= 0.0) => {
                Err(Error::out_of_range("decay", *d, "[0, ∞)"))
            }
            _ => Ok(()),
        }
    }
}
