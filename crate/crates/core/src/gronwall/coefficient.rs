use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form coefficient functions with exact integrals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coefficient {
    Constant { value: f64 },
    /// `Σ c_i tⁱ`
    Polynomial { coeffs: Vec<f64> },
    /// `values[i]` on `[breaks[i-1], breaks[i])`, with `breaks` ascending and
    /// one more value than breaks.
    PiecewiseConstant { breaks: Vec<f64>, values: Vec<f64> },
}

impl Coefficient {
    pub const ZERO: Coefficient = Coefficient::Constant { value: 0.0 };

    pub fn constant(value: f64) -> Self {
        Coefficient::Constant { value }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Coefficient::Constant { value } => *value,
            Coefficient::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            Coefficient::PiecewiseConstant { breaks, values } => {
                let i = breaks.partition_point(|b| *b <= t);
                values[i]
            }
        }
    }

    /// `∫₀ᵗ`
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            Coefficient::Constant { value } => value * t,
            Coefficient::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (i, c)| acc * t + c / (i + 1) as f64)
                * t,
            Coefficient::PiecewiseConstant { breaks, values } => {
                let mut total = 0.0;
                let mut start = 0.0;
                for (i, v) in values.iter().enumerate() {
                    let end = breaks.get(i).copied().unwrap_or(f64::INFINITY).min(t);
                    if end > start {
                        total += v * (end - start);
                    }
                    if end >= t {
                        break;
                    }
                    start = start.max(end);
                }
                total
            }
        }
    }

    /// Whether a jump lies in `(t0, t1]`.
    pub fn jumps_in(&self, t0: f64, t1: f64) -> bool {
        match self {
            Coefficient::PiecewiseConstant { breaks, .. } => breaks.iter().any(|b| *b > t0 && *b <= t1),
            _ => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Constant { value } => *value == 0.0,
            Coefficient::Polynomial { coeffs } => coeffs.iter().all(|c| *c == 0.0),
            Coefficient::PiecewiseConstant { values, .. } => values.iter().all(|v| *v == 0.0),
        }
    }

    /// Largest value on `[0, horizon]`, exact for constants and pieces and
    /// sampled on the dense grid for polynomials.
    pub fn max_on(&self, horizon: f64) -> f64 {
        match self {
            Coefficient::Polynomial { .. } => dense_grid(horizon).map(|t| self.eval(t)).fold(f64::MIN, f64::max),
            _ => self.samples_exact(horizon).into_iter().fold(f64::MIN, f64::max),
        }
    }

    fn samples_exact(&self, horizon: f64) -> Vec<f64> {
        match self {
            Coefficient::Constant { value } => vec![*value],
            Coefficient::PiecewiseConstant { breaks, values } => {
                // pieces that start before the horizon
                let live = 1 + breaks.iter().filter(|b| **b < horizon && **b > 0.0).count();
                let first = breaks.iter().filter(|b| **b <= 0.0).count();
                values[first..(first + live).min(values.len())].to_vec()
            }
            Coefficient::Polynomial { .. } => unreachable!(),
        }
    }

    pub fn validate(&self, name: &str, horizon: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(format!("coefficient {name}: {msg}")));
        match self {
            Coefficient::Constant { value } if !value.is_finite() => return bad("not finite".into()),
            Coefficient::Polynomial { coeffs } if coeffs.iter().any(|c| !c.is_finite()) => {
                return bad("not finite".into())
            }
            Coefficient::PiecewiseConstant { breaks, values } => {
                if values.len() != breaks.len() + 1 {
                    return bad(format!("{} values for {} breaks", values.len(), breaks.len()));
                }
                if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().chain(values).any(|v| !v.is_finite()) {
                    return bad("breaks must be finite and strictly ascending".into());
                }
            }
            _ => {}
        }
        let min = match self {
            Coefficient::Polynomial { .. } => dense_grid(horizon).map(|t| self.eval(t)).fold(f64::MAX, f64::min),
            _ => self.samples_exact(horizon).into_iter().fold(f64::MAX, f64::min),
        };
        if min < 0.0 {
            return bad(format!("negative value {min} on [0, {horizon}]"));
        }
        Ok(())
    }
}

/// Nonnegativity grid for polynomial coefficients.
pub const DENSE_GRID_POINTS: usize = 10_001;

fn dense_grid(horizon: f64) -> impl Iterator<Item = f64> {
    (0..DENSE_GRID_POINTS).map(move |i| horizon * i as f64 / (DENSE_GRID_POINTS - 1) as f64)
}
