//! Explicit bounds for the logarithmic Gronwall inequality
//!
//! ```text
//! A' + B ≤ [l + m ln(A+e) + n (ln(A+B+e))^α] (A+e) + f,
//! B ≥ C1 A^γ,  n ≤ K (A+B+e)^β,  β < (γ−1)/γ
//! ```
//!
//! and brute-force ODE trajectories to check them against.

pub mod campaign;
pub mod certificate;
pub mod coefficient;
pub mod problem;
pub mod trajectory;

pub use campaign::{run_problem_trials, run_soundness_campaign, GronwallReport, TrialOutcome};
pub use certificate::{build_certificate, GronwallCertificate, KeyBound, ProofChecks};
pub use coefficient::Coefficient;
pub use problem::GronwallProblem;
pub use trajectory::{
    synth_trajectory, verify_trajectory, verify_with_certificate, Sample, SynthMode, Synthesized, Trajectory,
    TrajectoryVerdict,
};
