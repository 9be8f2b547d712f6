use std::f64::consts::E;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::certificate::{build_certificate, GronwallCertificate};
use super::coefficient::Coefficient;
use super::problem::GronwallProblem;

pub const SYNTH_DT: f64 = 1e-4;
/// Slack on the hypotheses, relative to `max(1, |rhs|)`.
pub const HYPOTHESIS_SLACK: f64 = 1e-9;
/// Allowed mismatch between `A'` samples and differences of `A`.
pub const DERIVATIVE_TOLERANCE: f64 = 0.01;
pub const OVERFLOW_LIMIT: f64 = 1e200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// `A'(t)`
    pub da: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Integration stopped early on overflow.
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthMode {
    /// The problem as given, with equality in both hypotheses.
    Saturating,
    /// All coefficients zero: `A' = −C1 A^γ`.
    Decaying,
    /// Random nonnegative coefficients with `n ≤ K` and a random `A(0)`.
    RandomCoefficient,
}

impl SynthMode {
    pub const ALL: [SynthMode; 3] = [SynthMode::Saturating, SynthMode::Decaying, SynthMode::RandomCoefficient];
}

impl std::str::FromStr for SynthMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "saturating" => Ok(SynthMode::Saturating),
            "decaying" => Ok(SynthMode::Decaying),
            "random-coefficient" => Ok(SynthMode::RandomCoefficient),
            _ => Err(Error::InvalidConfig(format!("unknown trajectory mode `{s}`"))),
        }
    }
}

/// A synthesized trajectory together with the problem it satisfies, which
/// differs from the input in the decaying and random modes.
#[derive(Clone, Debug)]
pub struct Synthesized {
    pub problem: GronwallProblem,
    pub trajectory: Trajectory,
}

fn random_coefficient(rng: &mut ChaCha8Rng, horizon: f64, cap: f64) -> Coefficient {
    match rng.random_range(0..3) {
        0 => Coefficient::constant(cap * rng.random::<f64>()),
        1 => {
            // nonnegative on [0, T]: c0 + c1 t + c2 t² with c0, c2 ≥ 0 and c1 ≥ −c0/T
            let c0 = 0.5 * cap * rng.random::<f64>();
            let c1 = rng.random_range(-c0 / horizon..=0.25 * cap / horizon);
            let c2 = 0.25 * cap * rng.random::<f64>() / (horizon * horizon);
            Coefficient::Polynomial { coeffs: vec![c0, c1, c2] }
        }
        _ => {
            let pieces = rng.random_range(2..=4);
            let mut breaks: Vec<f64> = (1..pieces).map(|i| horizon * i as f64 / pieces as f64).collect();
            breaks.iter_mut().for_each(|b| *b *= rng.random_range(0.8..1.0));
            let values = (0..pieces).map(|_| cap * rng.random::<f64>()).collect();
            Coefficient::PiecewiseConstant { breaks, values }
        }
    }
}

/// Integrates `A' = RHS(t, A, B) − B` with `B = C1 A^γ` by classical RK4 at
/// `dt = 1e−4`, sampling every step.
pub fn synth_trajectory(problem: &GronwallProblem, mode: SynthMode, seed: u64) -> Result<Synthesized> {
    problem.validate()?;
    let mut p = problem.clone();
    match mode {
        SynthMode::Saturating => {}
        SynthMode::Decaying => {
            p.l = Coefficient::ZERO;
            p.m = Coefficient::ZERO;
            p.n = Coefficient::ZERO;
            p.f = Coefficient::ZERO;
        }
        SynthMode::RandomCoefficient => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            p.l = random_coefficient(&mut rng, p.horizon, 1.0);
            p.m = random_coefficient(&mut rng, p.horizon, 1.0);
            p.f = random_coefficient(&mut rng, p.horizon, 1.0);
            // n ≤ K ≤ K (A+B+e)^β
            p.n = match rng.random_range(0..2) {
                0 => Coefficient::constant(p.k * rng.random::<f64>()),
                _ => Coefficient::PiecewiseConstant {
                    breaks: vec![0.5 * p.horizon],
                    values: vec![p.k * rng.random::<f64>(), p.k * rng.random::<f64>()],
                },
            };
            p.a0 = 4.0 * rng.random::<f64>();
            p.validate()?;
        }
    }
    let trajectory = integrate(&p);
    Ok(Synthesized { problem: p, trajectory })
}

fn integrate(p: &GronwallProblem) -> Trajectory {
    let b_of = |a: f64| p.c1 * a.max(0.0).powf(p.gamma);
    let field = |t: f64, a: f64| {
        let a = a.max(0.0);
        let b = b_of(a);
        p.rhs(t, a, b) - b
    };
    let steps = (p.horizon / SYNTH_DT).round().max(1.0) as usize;
    let dt = p.horizon / steps as f64;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut a = p.a0;
    let mut truncated = false;
    for i in 0..=steps {
        let t = i as f64 * dt;
        let da = field(t, a);
        if !a.is_finite() || !da.is_finite() || a > OVERFLOW_LIMIT {
            truncated = true;
            break;
        }
        samples.push(Sample { t, a, b: b_of(a), da });
        if i == steps {
            break;
        }
        let k1 = da;
        let k2 = field(t + 0.5 * dt, a + 0.5 * dt * k1);
        let k3 = field(t + 0.5 * dt, a + 0.5 * dt * k2);
        let k4 = field(t + dt, a + dt * k3);
        a += dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
    }
    Trajectory { samples, truncated }
}

/// Closed form of `A' = −C1 A^γ`.
pub fn decay_closed_form(a0: f64, c1: f64, gamma: f64, t: f64) -> f64 {
    if a0 == 0.0 {
        return 0.0;
    }
    (a0.powf(1.0 - gamma) + c1 * (gamma - 1.0) * t).powf(1.0 / (1.0 - gamma))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryVerdict {
    pub hypotheses_ok: bool,
    pub bound_ok: bool,
    /// `min (A_bound − A)/A_bound`, evaluated in log space.
    pub margin: f64,
    pub samples: usize,
    pub truncated: bool,
    /// First failing check, if any.
    pub failure: Option<String>,
}

fn check_derivatives(problem: &GronwallProblem, samples: &[Sample]) -> Result<()> {
    let Some(first) = samples.first() else {
        return Err(Error::Trajectory("empty trajectory".into()));
    };
    if first.t != 0.0 {
        return Err(Error::Trajectory(format!("trajectory starts at t = {} instead of 0", first.t)));
    }
    for (i, s) in samples.iter().enumerate() {
        if ![s.t, s.a, s.b, s.da].iter().all(|v| v.is_finite()) || s.a < 0.0 || s.b < 0.0 {
            return Err(Error::Trajectory(format!("sample {i} is not finite and nonnegative: {s:?}")));
        }
    }
    for (i, w) in samples.windows(2).enumerate() {
        let dt = w[1].t - w[0].t;
        if !(dt > 0.0) {
            return Err(Error::Trajectory(format!("time not increasing at sample {}", i + 1)));
        }
        let secant = (w[1].a - w[0].a) / dt;
        let mean = 0.5 * (w[0].da + w[1].da);
        let scale = w[0].da.abs().max(w[1].da.abs());
        let noise = 1e-12 * w[0].a.max(w[1].a).max(1.0) / dt;
        let tol = DERIVATIVE_TOLERANCE * scale + noise;
        let consistent = if problem.jumps_in(w[0].t, w[1].t) {
            // A' jumps inside the step; the secant only has to lie between the ends
            secant >= w[0].da.min(w[1].da) - tol && secant <= w[0].da.max(w[1].da) + tol
        } else {
            (secant - mean).abs() <= tol
        };
        if !consistent {
            return Err(Error::Trajectory(format!(
                "A' inconsistent with A differences on [{}, {}]: secant {secant:e}, samples {:e}, {:e}",
                w[0].t, w[1].t, w[0].da, w[1].da
            )));
        }
    }
    Ok(())
}

/// Checks the hypotheses at every sample and the certificate's bounds.
pub fn verify_trajectory(problem: &GronwallProblem, trajectory: &Trajectory) -> Result<TrajectoryVerdict> {
    let cert = build_certificate(problem)?;
    verify_with_certificate(&cert, trajectory)
}

/// As [`verify_trajectory`] with a prebuilt certificate; `X0` is taken from
/// the trajectory's `A(0)`.
pub fn verify_with_certificate(cert: &GronwallCertificate, trajectory: &Trajectory) -> Result<TrajectoryVerdict> {
    let samples = &trajectory.samples;
    check_derivatives(&cert.problem, samples)?;
    let cert = cert.with_initial(samples[0].a);
    let p = &cert.problem;
    let slack = |rhs: f64| HYPOTHESIS_SLACK * rhs.abs().max(1.0);

    let mut failure = None;
    let mut hypotheses_ok = true;
    let mut bound_ok = true;
    let mut margin = f64::INFINITY;
    let mut b_integral = 0.0;
    for (i, s) in samples.iter().enumerate() {
        let rhs = p.rhs(s.t, s.a, s.b);
        let coercive = p.c1 * s.a.powf(p.gamma);
        let n_cap = p.k * (s.a + s.b + E).powf(p.beta_g);
        let n = p.n.eval(s.t);
        let broken = if s.da + s.b > rhs + slack(rhs) {
            Some(format!("A' + B = {:e} > {rhs:e}", s.da + s.b))
        } else if s.b < coercive - slack(coercive) {
            Some(format!("B = {:e} < C1 A^γ = {coercive:e}", s.b))
        } else if n > n_cap + slack(n_cap) {
            Some(format!("n = {n:e} > K (A+B+e)^β = {n_cap:e}"))
        } else {
            None
        };
        if let Some(msg) = broken {
            hypotheses_ok = false;
            failure.get_or_insert(format!("hypothesis at t = {}: {msg}", s.t));
        }

        if i > 0 {
            let prev = &samples[i - 1];
            b_integral += 0.5 * (prev.b + s.b) * (s.t - prev.t);
        }
        // ln A ≤ X and ln ∫B ≤ ln(2X) + X, so overflowed bounds still compare
        let x = cert.x(s.t);
        let ln_a = s.a.ln();
        let a_ok = ln_a <= x;
        let b_ok = b_integral == 0.0 || b_integral.ln() <= cert.ln_b_integral_bound(s.t);
        if !(a_ok && b_ok) {
            bound_ok = false;
            failure.get_or_insert(format!(
                "bound at t = {}: ln A = {ln_a}, X = {x}, ∫B = {b_integral:e}",
                s.t
            ));
        }
        margin = margin.min(-(ln_a - x).exp_m1());
    }
    Ok(TrajectoryVerdict {
        hypotheses_ok,
        bound_ok,
        margin,
        samples: samples.len(),
        truncated: trajectory.truncated,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay_problem(a0: f64) -> GronwallProblem {
        GronwallProblem::new(2.0, 1.5, 0.0, 1.0, 0.0, 1.0, a0).unwrap()
    }

    #[test]
    fn decay_matches_closed_form() {
        for (gamma, c1, a0) in [(2.0, 1.0, 4.0), (1.5, 2.5, 1.0), (1.2, 1.0, 10.0)] {
            let p = GronwallProblem::new(gamma, 1.5, 0.0, c1, 0.0, 1.0, a0).unwrap();
            let s = synth_trajectory(&p, SynthMode::Decaying, 0).unwrap();
            for smp in &s.trajectory.samples {
                let exact = decay_closed_form(a0, c1, gamma, smp.t);
                assert!((smp.a - exact).abs() <= 1e-8 * exact, "{gamma} {c1} {a0} t {}", smp.t);
            }
            assert_eq!(s.trajectory.samples.len(), 10_001);
        }
    }

    #[test]
    fn zero_initial_data_stays_zero() {
        let s = synth_trajectory(&decay_problem(0.0), SynthMode::Decaying, 0).unwrap();
        assert!(s.trajectory.samples.iter().all(|x| x.a == 0.0));
    }

    #[test]
    fn zero_trajectory_has_unit_margin() {
        let traj = Trajectory {
            samples: (0..=10).map(|i| Sample { t: i as f64 / 10.0, a: 0.0, b: 0.0, da: 0.0 }).collect(),
            truncated: false,
        };
        let v = verify_trajectory(&decay_problem(0.0), &traj).unwrap();
        assert!(v.hypotheses_ok && v.bound_ok);
        assert_eq!(v.margin, 1.0);
    }

    fn exponential(a0: f64, c1: f64, gamma: f64) -> Trajectory {
        // A = A0 e^{−t}, B = C1 A^γ
        let samples = (0..=1000)
            .map(|i| {
                let t = i as f64 / 1000.0;
                let a = a0 * (-t).exp();
                Sample { t, a, b: c1 * a.powf(gamma), da: -a }
            })
            .collect();
        Trajectory { samples, truncated: false }
    }

    #[test]
    fn exponential_decay_is_certified() {
        // A' + B = −A + C1 A^γ ≤ l (A+e) once l ≥ C1 A0^{γ−1}
        let (a0, c1, gamma) = (2.0, 1.0, 2.0);
        let p = GronwallProblem::new(gamma, 1.5, 0.0, c1, 0.0, 1.0, a0)
            .unwrap()
            .with_coefficients(Coefficient::constant(c1 * a0), Coefficient::ZERO, Coefficient::ZERO, Coefficient::ZERO)
            .unwrap();
        let v = verify_trajectory(&p, &exponential(a0, c1, gamma)).unwrap();
        assert!(v.hypotheses_ok, "{v:?}");
        assert!(v.bound_ok);
        assert!(v.margin > 0.0);
    }

    #[test]
    fn halved_b_breaks_hypotheses() {
        let (a0, c1, gamma) = (2.0, 1.0, 2.0);
        let p = GronwallProblem::new(gamma, 1.5, 0.0, c1, 0.0, 1.0, a0)
            .unwrap()
            .with_coefficients(Coefficient::constant(c1 * a0), Coefficient::ZERO, Coefficient::ZERO, Coefficient::ZERO)
            .unwrap();
        let mut traj = exponential(a0, c1, gamma);
        traj.samples[500].b *= 0.5;
        let v = verify_trajectory(&p, &traj).unwrap();
        assert!(!v.hypotheses_ok);
        assert!(v.failure.unwrap().contains("C1 A^γ"));
    }

    #[test]
    fn inconsistent_derivatives_rejected() {
        let mut traj = exponential(2.0, 1.0, 2.0);
        traj.samples[10].da *= 1.5;
        assert!(matches!(verify_trajectory(&decay_problem(2.0), &traj), Err(Error::Trajectory(_))));
        let mut late = exponential(2.0, 1.0, 2.0);
        late.samples.iter_mut().for_each(|s| s.t += 1.0);
        assert!(verify_trajectory(&decay_problem(2.0), &late).is_err());
    }

    #[test]
    fn synthesized_trajectories_are_certified() {
        let base = GronwallProblem::new(2.0, 1.5, 0.3, 1.0, 1.0, 1.0, 1.0).unwrap();
        for seed in 0..10 {
            let s = synth_trajectory(&base, SynthMode::RandomCoefficient, seed).unwrap();
            let v = verify_trajectory(&s.problem, &s.trajectory).unwrap();
            assert!(v.hypotheses_ok, "seed {seed}: {v:?}");
            assert!(v.bound_ok, "seed {seed}: {v:?}");
        }
        let again = synth_trajectory(&base, SynthMode::RandomCoefficient, 3).unwrap();
        assert_eq!(again.trajectory, synth_trajectory(&base, SynthMode::RandomCoefficient, 3).unwrap().trajectory);
    }

    #[test]
    fn overflow_truncates() {
        // f huge and a weak coercivity so A explodes before T
        let p = GronwallProblem::new(1.01, 1.5, 0.0, 1e-6, 0.0, 1.0, 1.0)
            .unwrap()
            .with_coefficients(Coefficient::constant(1e4), Coefficient::ZERO, Coefficient::ZERO, Coefficient::ZERO)
            .unwrap();
        let s = synth_trajectory(&p, SynthMode::Saturating, 0).unwrap();
        assert!(s.trajectory.truncated);
        assert!(s.trajectory.samples.len() < 10_001);
    }
}
