//! Time integration of the transport equation with anisotropic fractional
//! dissipation, plus per-record monitors.

pub mod admissibility;
pub mod config;
pub mod diagnostics;
pub mod run;
pub mod stepper;

pub use admissibility::{check_admissibility, Admissibility, Regime};
pub use config::{InitialCondition, SimulationConfig, TimeStep};
pub use diagnostics::{compute_record, energy_defects, verify_dissipation_relation, DiagnosticsRecord};
pub use run::{initial_state, run, BlowUp, RunHeader, RunOutput, Simulation};
pub use stepper::{cfl_dt, cfl_dt_for_velocity, linear_symbol, nonlinear_term, step, IfRk4, SolverState};
