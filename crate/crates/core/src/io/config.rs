//! TOML config files.
//!
//! Simulation keys: `grid` (integer or `[n1, n2]`), `alpha`, `beta`, `mu`,
//! `nu`, `velocity_law` (`"sqg"` or `"pm"`), `t_end`, exactly one of `dt` and
//! `cfl_factor`, an `[initial_condition]` table, `diagnostics_every` and
//! `seed`. A top-level `seed` overrides the seed of random initial data.
//!
//! ```toml
//! grid = 128
//! alpha = 0.5
//! beta = 0.6
//! velocity_law = "sqg"
//! t_end = 1.0
//! dt = 1e-3
//! seed = 7
//!
//! [initial_condition]
//! kind = "random"
//! kmax = 16
//! amplitude = 1.0
//! ```

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gronwall::{Coefficient, GronwallProblem};
use crate::solver::{InitialCondition, SimulationConfig, TimeStep};
use crate::spectral::VelocityLaw;

#[derive(Deserialize)]
#[serde(untagged)]
enum GridSize {
    Square(usize),
    Rect([usize; 2]),
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawInitial {
    PlaneWave {
        k1: i64,
        k2: i64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Random {
        seed: Option<u64>,
        kmax: usize,
        #[serde(default = "one")]
        amplitude: f64,
        decay: Option<f64>,
    },
    FromCheckpoint {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    grid: GridSize,
    alpha: f64,
    beta: f64,
    #[serde(default = "one")]
    mu: f64,
    #[serde(default = "one")]
    nu: f64,
    velocity_law: VelocityLaw,
    t_end: f64,
    dt: Option<f64>,
    cfl_factor: Option<f64>,
    initial_condition: RawInitial,
    #[serde(default = "default_every")]
    diagnostics_every: usize,
    seed: Option<u64>,
}

fn default_every() -> usize {
    1
}

/// 1-based line of the first assignment to `key` or `[key]` header.
fn key_line(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            let rest = l.strip_prefix(key).map(str::trim_start);
            matches!(rest, Some(r) if r.starts_with('=')) || l.starts_with(&format!("[{key}]"))
        })
        .map_or(0, |i| i + 1)
}

fn config_error(text: &str, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line: key_line(text, key),
        key: key.to_string(),
        message: message.into(),
    }
}

fn from_toml<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        let message = e.message().trim().to_string();
        // serde names the offending key between backticks
        let key = message.split('`').nth(1).unwrap_or("").to_string();
        Error::Config { line, key, message }
    })
}

/// Parses and validates a simulation config. `α` and `β` must lie in `(0, 1)`.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let raw: RawSimulation = from_toml(text)?;
    let (n1, n2) = match raw.grid {
        GridSize::Square(n) => (n, n),
        GridSize::Rect([a, b]) => (a, b),
    };
    for (key, v) in [("alpha", raw.alpha), ("beta", raw.beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(config_error(text, key, format!("{v} is outside (0, 1)")));
        }
    }
    let time_step = match (raw.dt, raw.cfl_factor) {
        (Some(_), Some(_)) => return Err(config_error(text, "cfl_factor", "`dt` and `cfl_factor` are mutually exclusive")),
        (Some(dt), None) => TimeStep::Fixed(dt),
        (None, Some(c)) => TimeStep::Cfl(c),
        (None, None) => return Err(config_error(text, "dt", "one of `dt` or `cfl_factor` is required")),
    };
    let initial_condition = match raw.initial_condition {
        RawInitial::PlaneWave { k1, k2, amplitude } => InitialCondition::PlaneWave { k1, k2, amplitude },
        RawInitial::Random { seed, kmax, amplitude, decay } => {
            let Some(seed) = raw.seed.or(seed) else {
                return Err(config_error(text, "seed", "random initial data needs a `seed`"));
            };
            InitialCondition::Random { seed, kmax, amplitude, decay }
        }
        RawInitial::FromCheckpoint { path } => InitialCondition::FromCheckpoint { path },
    };
    let config = SimulationConfig {
        n1,
        n2,
        alpha: raw.alpha,
        beta: raw.beta,
        mu: raw.mu,
        nu: raw.nu,
        velocity_law: raw.velocity_law,
        t_end: raw.t_end,
        time_step,
        initial_condition,
        diagnostics_every: raw.diagnostics_every,
    };
    crate::spectral::Grid::new(n1, n2).map_err(|e| config_error(text, "grid", e.to_string()))?;
    config.validate().map_err(|e| match e {
        Error::OutOfRange { ref name, .. } => config_error(text, &name.clone(), e.to_string()),
        other => config_error(text, "", other.to_string()),
    })?;
    Ok(config)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGronwall {
    gamma: f64,
    alpha_g: f64,
    #[serde(default)]
    beta_g: f64,
    c1: f64,
    #[serde(default)]
    k: f64,
    #[serde(default = "one")]
    horizon: f64,
    #[serde(default)]
    a0: f64,
    l: Option<Coefficient>,
    m: Option<Coefficient>,
    n: Option<Coefficient>,
    f: Option<Coefficient>,
}

/// Parses a Gronwall problem. Coefficients are tables tagged by `kind`
/// (`constant`, `polynomial`, `piecewise_constant`) and default to zero.
///
/// ```toml
/// gamma = 2.0
/// alpha_g = 1.5
/// beta_g = 0.3
/// c1 = 1.0
/// k = 0.5
///
/// [n]
/// kind = "constant"
/// value = 0.5
/// ```
pub fn parse_gronwall_config(text: &str) -> Result<GronwallProblem> {
    let raw: RawGronwall = from_toml(text)?;
    let problem = GronwallProblem {
        l: raw.l.unwrap_or(Coefficient::ZERO),
        m: raw.m.unwrap_or(Coefficient::ZERO),
        n: raw.n.unwrap_or(Coefficient::ZERO),
        f: raw.f.unwrap_or(Coefficient::ZERO),
        alpha_g: raw.alpha_g,
        gamma: raw.gamma,
        beta_g: raw.beta_g,
        c1: raw.c1,
        k: raw.k,
        horizon: raw.horizon,
        a0: raw.a0,
    };
    problem.validate().map_err(|e| match e {
        Error::OutOfRange { ref name, .. } => config_error(text, &name.clone(), e.to_string()),
        Error::InvalidConfig(ref msg) => {
            let key = msg.split_whitespace().nth(1).unwrap_or("").trim_end_matches(':').to_string();
            config_error(text, &key, msg.clone())
        }
        other => other,
    })?;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::check_admissibility;

    const MINIMAL: &str = r#"
grid = 64
alpha = 0.5
beta = 0.6
velocity_law = "sqg"
t_end = 1.0
dt = 1e-3

[initial_condition]
kind = "plane_wave"
k1 = 3
k2 = 2
"#;

    #[test]
    fn minimal_config_is_admissible() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!((c.n1, c.n2, c.mu, c.nu), (64, 64, 1.0, 1.0));
        assert_eq!(c.time_step, TimeStep::Fixed(1e-3));
        assert!(check_admissibility(c.alpha, c.beta).unwrap().admissible);
    }

    #[test]
    fn dt_and_cfl_conflict() {
        let text = MINIMAL.replace("dt = 1e-3", "dt = 1e-3\ncfl_factor = 0.5");
        match parse_config(&text) {
            Err(Error::Config { key, message, line }) => {
                assert_eq!(key, "cfl_factor");
                assert!(message.contains("dt"));
                assert_eq!(line, 8);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alpha_out_of_range() {
        let text = MINIMAL.replace("alpha = 0.5", "alpha = 1.5");
        match parse_config(&text) {
            Err(Error::Config { key, line, .. }) => assert_eq!((key.as_str(), line), ("alpha", 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_an_error() {
        let text = MINIMAL.replace("beta = 0.6", "beta = 0.6\nbetta = 0.7");
        match parse_config(&text) {
            Err(Error::Config { key, line, .. }) => assert_eq!((key.as_str(), line), ("betta", 5)),
            other => panic!("{other:?}"),
        }
        let nested = MINIMAL.replace("k2 = 2", "k2 = 2\nk3 = 1");
        assert!(matches!(parse_config(&nested), Err(Error::Config { .. })));
    }

    #[test]
    fn missing_key_is_an_error() {
        let text = MINIMAL.replace("t_end = 1.0\n", "");
        match parse_config(&text) {
            Err(Error::Config { message, .. }) => assert!(message.contains("t_end"), "{message}"),
            other => panic!("{other:?}"),
        }
        let no_step = MINIMAL.replace("dt = 1e-3\n", "");
        assert!(matches!(parse_config(&no_step), Err(Error::Config { key, .. }) if key == "dt"));
    }

    #[test]
    fn seed_override_and_random_data() {
        let text = r#"
grid = [64, 32]
alpha = 0.4
beta = 0.9
mu = 0.5
velocity_law = "pm"
t_end = 0.5
cfl_factor = 0.4
seed = 99
diagnostics_every = 10

[initial_condition]
kind = "random"
seed = 1
kmax = 8
decay = 2.0
"#;
        let c = parse_config(text).unwrap();
        assert_eq!((c.n1, c.n2), (64, 32));
        assert_eq!(c.velocity_law, VelocityLaw::Pm);
        assert_eq!(c.time_step, TimeStep::Cfl(0.4));
        assert_eq!(
            c.initial_condition,
            InitialCondition::Random { seed: 99, kmax: 8, amplitude: 1.0, decay: Some(2.0) }
        );
        let unseeded = text.replace("seed = 99\n", "").replace("seed = 1\n", "");
        assert!(matches!(parse_config(&unseeded), Err(Error::Config { key, .. }) if key == "seed"));
    }

    #[test]
    fn gronwall_config() {
        let text = r#"
gamma = 2.0
alpha_g = 1.5
beta_g = 0.3
c1 = 1.0
k = 0.5

[n]
kind = "constant"
value = 0.5

[f]
kind = "piecewise_constant"
breaks = [0.5]
values = [1.0, 0.0]
"#;
        let p = parse_gronwall_config(text).unwrap();
        assert_eq!(p.n, Coefficient::constant(0.5));
        assert_eq!(p.l, Coefficient::ZERO);
        let bad = text.replace("beta_g = 0.3", "beta_g = 0.5");
        assert!(matches!(parse_gronwall_config(&bad), Err(Error::Config { key, line: 4, .. }) if key == "beta_g"));
        let neg = text.replace("values = [1.0, 0.0]", "values = [1.0, -1.0]");
        assert!(matches!(parse_gronwall_config(&neg), Err(Error::Config { key, .. }) if key == "f"));
    }
}
