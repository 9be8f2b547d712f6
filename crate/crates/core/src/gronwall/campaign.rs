use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::campaign::sample_seed;

use super::certificate::{build_certificate, KeyBound};
use super::problem::GronwallProblem;
use super::trajectory::{synth_trajectory, verify_with_certificate, SynthMode, TrajectoryVerdict};

/// Distance kept from the `β < (γ−1)/γ` limit when drawing problems.
pub const BETA_MARGIN: f64 = 0.05;

/// Random problem with `γ ∈ (1,2]`, `α ∈ (1,2]`, `C1 ∈ [1,4]`, `K ∈ [0,2]`
/// and `β` at least [`BETA_MARGIN`] below its limit. Coefficients are left
/// at zero; the random-coefficient trajectories fill them in.
pub fn random_problem(rng: &mut ChaCha8Rng) -> GronwallProblem {
    // smallest γ leaving room for the margin
    let gamma_min = 1.0 / (1.0 - BETA_MARGIN) + 1e-3;
    let gamma = rng.random_range(gamma_min..=2.0);
    let alpha = 1.0 + (1.0 - rng.random::<f64>());
    let beta_max = (gamma - 1.0) / gamma - BETA_MARGIN;
    let beta = rng.random_range(0.0..=beta_max);
    let c1 = rng.random_range(1.0..=4.0);
    let k = rng.random_range(0.0..=2.0);
    let a0 = rng.random_range(0.0..=4.0);
    GronwallProblem::new(gamma, alpha, beta, c1, k, 1.0, a0).expect("sampled inside the valid ranges")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub mode: SynthMode,
    pub seed: u64,
    pub gamma: f64,
    pub alpha_g: f64,
    pub beta_g: f64,
    pub key: Option<KeyBound>,
    /// `X(T)` of the trajectory's certificate.
    pub x_end: Option<f64>,
    pub verdict: Option<TrajectoryVerdict>,
    pub error: Option<String>,
}

impl TrialOutcome {
    /// Sound unless the hypotheses held and the bound did not, or the
    /// certificate could not be built.
    pub fn sound(&self) -> bool {
        match &self.verdict {
            Some(v) => !v.hypotheses_ok || v.bound_ok,
            None => false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GronwallReport {
    pub seed: u64,
    pub trials: Vec<TrialOutcome>,
}

impl GronwallReport {
    pub fn passed(&self) -> bool {
        self.trials.iter().all(TrialOutcome::sound)
    }

    pub fn min_margin(&self) -> f64 {
        self.trials
            .iter()
            .filter_map(|t| t.verdict.as_ref())
            .filter(|v| v.hypotheses_ok)
            .map(|v| v.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

fn run_one(trial: usize, mode: SynthMode, seed: u64, problem: &GronwallProblem) -> TrialOutcome {
    let mut out = TrialOutcome {
        trial,
        mode,
        seed,
        gamma: problem.gamma,
        alpha_g: problem.alpha_g,
        beta_g: problem.beta_g,
        key: None,
        x_end: None,
        verdict: None,
        error: None,
    };
    let result = (|| -> Result<()> {
        let synth = synth_trajectory(problem, mode, seed)?;
        let cert = build_certificate(&synth.problem)?;
        out.key = Some(cert.key);
        let t_end = synth.trajectory.samples.last().map_or(0.0, |s| s.t);
        out.x_end = Some(cert.with_initial(synth.problem.a0).x(t_end));
        out.verdict = Some(verify_with_certificate(&cert, &synth.trajectory)?);
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    out
}

/// Trajectories of one problem: saturating first, then decaying, then
/// random coefficients.
pub fn run_problem_trials(problem: &GronwallProblem, trials: usize, seed: u64) -> GronwallReport {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mode = match i {
                0 => SynthMode::Saturating,
                1 => SynthMode::Decaying,
                _ => SynthMode::RandomCoefficient,
            };
            run_one(i, mode, sample_seed(seed, 0, i, 0x6E), problem)
        })
        .collect();
    GronwallReport { seed, trials: outcomes }
}

/// One random problem per trial, each with a saturating and a
/// random-coefficient trajectory.
pub fn run_soundness_campaign(problems: usize, seed: u64) -> GronwallReport {
    let outcomes = (0..problems)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, 0, i, 0x67));
            let mut problem = random_problem(&mut rng);
            // saturating runs use a constant n at its majorant K
            problem.n = super::Coefficient::constant(problem.k);
            let traj_seed = sample_seed(seed, 1, i, 0x67);
            [SynthMode::Saturating, SynthMode::RandomCoefficient]
                .into_iter()
                .map(move |mode| run_one(i, mode, traj_seed, &problem))
                .collect::<Vec<_>>()
        })
        .collect();
    GronwallReport { seed, trials: outcomes }
}
