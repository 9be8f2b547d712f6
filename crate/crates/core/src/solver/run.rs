use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::Checkpoint;
use crate::spectral::{random_band_limited_field, Complex64, Grid, SpectralField, SpectrumProfile, ZeroModePolicy};

use super::admissibility::{check_admissibility, Admissibility};
use super::config::{InitialCondition, SimulationConfig, TimeStep};
use super::diagnostics::{compute_record, DiagnosticsRecord};
use super::stepper::{cfl_dt, IfRk4, SolverState};

/// Header echoed at the top of every diagnostics stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    /// `None` when `α` or `β` equals 1, outside the range the check covers.
    pub admissibility: Option<Admissibility>,
    /// `"admissible"` or `"exploratory"`.
    pub label: String,
    pub config: SimulationConfig,
}

impl RunHeader {
    pub fn new(config: &SimulationConfig) -> Self {
        let admissibility = check_admissibility(config.alpha, config.beta).ok();
        let label = match admissibility {
            Some(a) if a.admissible => "admissible",
            _ => "exploratory",
        };
        RunHeader { admissibility, label: label.to_string(), config: config.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowUp {
    pub t: f64,
    pub what: String,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub header: RunHeader,
    pub records: Vec<DiagnosticsRecord>,
    /// Set when the run stopped early; `records` then ends with the last
    /// finite record.
    pub blow_up: Option<BlowUp>,
    pub final_state: SolverState,
}

/// Initial field for a config, already dealiased.
pub fn initial_state(config: &SimulationConfig) -> Result<SolverState> {
    let grid = Grid::shared(config.n1, config.n2)?;
    let theta = match &config.initial_condition {
        InitialCondition::PlaneWave { k1, k2, amplitude } => {
            let (h1, h2) = (config.n1 as i64 / 3, config.n2 as i64 / 3);
            if k1.abs() > h1 || k2.abs() > h2 {
                return Err(Error::InvalidConfig(format!(
                    "plane wave ({k1},{k2}) lies outside the dealiased band |k1| ≤ {h1}, |k2| ≤ {h2}"
                )));
            }
            SpectralField::cosine(&grid, *k1, *k2, *amplitude)
        }
        InitialCondition::Random { seed, kmax, amplitude, decay } => {
            let profile = match decay {
                Some(rate) => SpectrumProfile::Decaying { rate: *rate },
                None => SpectrumProfile::Flat,
            };
            let mut f = random_band_limited_field(&grid, *seed, *kmax, profile, ZeroModePolicy::Keep)?;
            f.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            let peak = f.from_spectral()?.max_abs();
            if peak == 0.0 {
                return Err(Error::InvalidConfig("random initial condition has no modes".into()));
            }
            f.scale(amplitude / peak)
        }
        InitialCondition::FromCheckpoint { path } => {
            let c = Checkpoint::load(path)?;
            if (c.samples.n1, c.samples.n2) != (config.n1, config.n2) {
                return Err(Error::DimensionMismatch {
                    expected_n1: config.n1,
                    expected_n2: config.n2,
                    got_n1: c.samples.n1,
                    got_n2: c.samples.n2,
                });
            }
            let pairs = [("alpha", c.alpha, config.alpha), ("beta", c.beta, config.beta), ("mu", c.mu, config.mu), ("nu", c.nu, config.nu)];
            for (name, saved, wanted) in pairs {
                if saved != wanted {
                    return Err(Error::InvalidConfig(format!(
                        "checkpoint was written with {name} = {saved}, config has {wanted}"
                    )));
                }
            }
            if !(c.t < config.t_end) {
                return Err(Error::InvalidConfig(format!("checkpoint time {} is not before t_end {}", c.t, config.t_end)));
            }
            return Ok(SolverState { t: c.t, theta: c.field()?, step: 0 });
        }
    };
    Ok(SolverState { t: 0.0, theta: theta.dealias(), step: 0 })
}

/// A configured run that can be stepped by hand or driven to `t_end`.
#[derive(Clone, Debug)]
pub struct Simulation {
    config: SimulationConfig,
    grid: Arc<Grid>,
    stepper: IfRk4,
    state: SolverState,
    t0: f64,
}

impl Simulation {
    pub fn new(config: SimulationConfig) -> Result<Self> {
        config.validate()?;
        let state = initial_state(&config)?;
        Self::from_state(config, state)
    }

    pub fn from_state(config: SimulationConfig, state: SolverState) -> Result<Self> {
        config.validate()?;
        let grid = state.theta.grid().clone();
        if (grid.n1(), grid.n2()) != (config.n1, config.n2) {
            return Err(Error::DimensionMismatch {
                expected_n1: config.n1,
                expected_n2: config.n2,
                got_n1: grid.n1(),
                got_n2: grid.n2(),
            });
        }
        let stepper = IfRk4::new(&grid, &config);
        let t0 = state.t;
        Ok(Simulation { config, grid, stepper, state, t0 })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.state.t >= self.config.t_end
    }

    pub fn diagnostics(&self) -> Result<DiagnosticsRecord> {
        compute_record(self.state.t, &self.state.theta, self.config.alpha, self.config.beta)
    }

    pub fn checkpoint(&self) -> Result<Checkpoint> {
        let c = &self.config;
        Checkpoint::from_field(&self.state.theta, self.state.t, c.alpha, c.beta, c.mu, c.nu)
    }

    /// Advance one step, never past `t_end`. Fixed steps land on
    /// `t0 + k·dt` exactly so resumed runs see the same times.
    pub fn step(&mut self) -> Result<()> {
        let remaining = self.config.t_end - self.state.t;
        if remaining <= 0.0 {
            return Ok(());
        }
        let (dt, t_next) = match self.config.time_step {
            TimeStep::Fixed(dt) => {
                let k = self.state.step + 1;
                let t_next = self.t0 + k as f64 * dt;
                // treat a last partial step within roundoff as a full one
                if t_next >= self.config.t_end - 1e-9 * dt {
                    (self.config.t_end - self.state.t, self.config.t_end)
                } else {
                    (t_next - self.state.t, t_next)
                }
            }
            TimeStep::Cfl(factor) => {
                let dt = cfl_dt(&self.state, &self.config, factor)?.min(remaining);
                let t_next = if dt == remaining { self.config.t_end } else { self.state.t + dt };
                (dt, t_next)
            }
        };
        let mut next = self.stepper.step(&self.state, dt)?;
        next.t = t_next;
        self.state = next;
        Ok(())
    }

    /// Step to `t_end`, recording at the first step, every
    /// `diagnostics_every` steps and at the end.
    pub fn run(mut self) -> Result<RunOutput> {
        let header = RunHeader::new(&self.config);
        let (mu, nu) = (self.config.mu, self.config.nu);
        let every = self.config.diagnostics_every as u64;
        let mut records: Vec<DiagnosticsRecord> = vec![self.diagnostics()?];
        let mut blow_up = None;
        if !records[0].is_finite() {
            return Err(Error::BlowUp { t: self.state.t, what: "initial data is not finite".into() });
        }
        while !self.is_finished() {
            if let Err(e) = self.step() {
                match e {
                    Error::BlowUp { t, what } => {
                        blow_up = Some(BlowUp { t, what });
                        break;
                    }
                    other => return Err(other),
                }
            }
            if self.state.step % every == 0 || self.is_finished() {
                let mut r = self.diagnostics()?;
                r.set_energy_residual(records.last().unwrap(), mu, nu);
                if !r.is_finite() {
                    blow_up = Some(BlowUp { t: r.t, what: "non-finite diagnostics".into() });
                    break;
                }
                records.push(r);
            }
        }
        Ok(RunOutput { header, records, blow_up, final_state: self.state })
    }
}

/// Run a config from its initial condition to `t_end`.
pub fn run(config: &SimulationConfig) -> Result<RunOutput> {
    Simulation::new(config.clone())?.run()
}
