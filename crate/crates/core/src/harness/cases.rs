//! The registered inequalities: parameters, exponent tables and evaluators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{self, NormSpec};
use crate::spectral::{Axis, OperatorSpec, SpectralField, ZeroModePolicy, DOMAIN_MEASURE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    InterpL2A,
    InterpL2B,
    InterpLinfA,
    InterpLinfB,
    TripleMixed,
    TripleL2,
    Commutator,
    LogSobolev,
    AnisoLinf,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::InterpL2A,
        CaseId::InterpL2B,
        CaseId::InterpLinfA,
        CaseId::InterpLinfB,
        CaseId::TripleMixed,
        CaseId::TripleL2,
        CaseId::Commutator,
        CaseId::LogSobolev,
        CaseId::AnisoLinf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::InterpL2A => "interp-l2-a",
            CaseId::InterpL2B => "interp-l2-b",
            CaseId::InterpLinfA => "interp-linf-a",
            CaseId::InterpLinfB => "interp-linf-b",
            CaseId::TripleMixed => "triple-mixed",
            CaseId::TripleL2 => "triple-l2",
            CaseId::Commutator => "commutator",
            CaseId::LogSobolev => "log-sobolev",
            CaseId::AnisoLinf => "aniso-linf",
        }
    }

    /// Constant exactly 1 on the torus (Hölder in frequency).
    pub fn is_exact(self) -> bool {
        matches!(self, CaseId::InterpL2A | CaseId::InterpL2B)
    }

    /// Number of independent random fields a sample needs.
    pub fn field_count(self) -> usize {
        match self {
            CaseId::TripleMixed | CaseId::TripleL2 => 3,
            CaseId::Commutator => 2,
            _ => 1,
        }
    }

    /// Frozen regression threshold on the ratio at the representative
    /// parameters. First campaigns (n = 64, 128, 256, 500 samples each,
    /// seed 2024) peaked at 0.754, 0.670, 0.061, 0.019, 0.318, 0.231 and
    /// 0.144 for the seven empirical cases in declaration order; the bounds
    /// leave about a factor of two.
    pub fn regression_bound(self) -> f64 {
        match self {
            CaseId::InterpL2A | CaseId::InterpL2B => 1.0 + 1e-10,
            CaseId::InterpLinfA => 1.5,
            CaseId::InterpLinfB => 1.5,
            CaseId::TripleMixed => 0.15,
            CaseId::TripleL2 => 0.05,
            CaseId::Commutator => 0.75,
            CaseId::LogSobolev => 0.5,
            CaseId::AnisoLinf => 0.3,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown inequality case `{s}`")))
    }
}

/// A case with concrete parameters. `axis` applies to the one-direction
/// cases and is ignored elsewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCase {
    pub id: CaseId,
    pub params: BTreeMap<String, f64>,
    pub axis: Axis,
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn range_err(id: CaseId, what: &str) -> Error {
    Error::InvalidConfig(format!("{id}: parameters out of range, need {what}"))
}

impl InequalityCase {
    pub fn new(id: CaseId, params: BTreeMap<String, f64>, axis: Axis) -> Result<Self> {
        let case = InequalityCase { id, params, axis };
        case.validate()?;
        Ok(case)
    }

    /// Representative parameters inside each inequality's range.
    pub fn representative(id: CaseId) -> Self {
        let p = match id {
            CaseId::InterpL2A => params(&[("s", 0.7), ("delta", 0.5)]),
            CaseId::InterpL2B => params(&[("gamma", 0.4), ("rho", 0.9)]),
            CaseId::InterpLinfA => params(&[("gamma", 0.5)]),
            CaseId::InterpLinfB => params(&[("delta", 0.6), ("rho", 0.5)]),
            CaseId::TripleMixed => params(&[("p", 4.0), ("q", 3.0), ("gamma1", 0.6), ("gamma2", 0.75)]),
            CaseId::TripleL2 => params(&[("gamma1", 0.75), ("gamma2", 0.75)]),
            CaseId::Commutator => params(&[("s", 0.5), ("p", 2.0)]),
            CaseId::LogSobolev => params(&[("sigma", 1.5)]),
            CaseId::AnisoLinf => params(&[("delta1", 1.5), ("delta2", 1.2)]),
        };
        InequalityCase { id, params: p, axis: Axis::X1 }
    }

    /// Parameters drawn uniformly from the inequality's range (bounded where
    /// the range is open-ended).
    pub fn random(id: CaseId, rng: &mut impl Rng) -> Self {
        let axis = if rng.random::<bool>() { Axis::X1 } else { Axis::X2 };
        let p = match id {
            CaseId::InterpL2A => {
                let delta = rng.random_range(0.0..=2.0);
                params(&[("delta", delta), ("s", rng.random_range(0.0..=delta + 1.0))])
            }
            CaseId::InterpL2B => {
                let rho = rng.random_range(0.05..=3.0);
                params(&[("rho", rho), ("gamma", rng.random_range(0.0..=rho))])
            }
            CaseId::InterpLinfA => params(&[("gamma", rng.random_range(0.0..=2.0))]),
            CaseId::InterpLinfB => {
                let rho = rng.random_range(0.0..=2.0);
                params(&[("rho", rho), ("delta", rng.random_range(0.05..=rho + 1.0))])
            }
            CaseId::TripleMixed => {
                let p = rng.random_range(2.0..=8.0);
                let q = rng.random_range(2.0..=8.0);
                params(&[
                    ("p", p),
                    ("q", q),
                    ("gamma1", rng.random_range(1.0 / p + 0.05..=1.0)),
                    ("gamma2", rng.random_range(1.0 / q + 0.05..=1.0)),
                ])
            }
            CaseId::TripleL2 => params(&[
                ("gamma1", rng.random_range(0.55..=1.0)),
                ("gamma2", rng.random_range(0.55..=1.0)),
            ]),
            CaseId::Commutator => params(&[("s", rng.random_range(0.05..0.95)), ("p", 2.0)]),
            CaseId::LogSobolev => params(&[("sigma", rng.random_range(1.05..=3.0))]),
            CaseId::AnisoLinf => {
                let d1 = rng.random_range(0.8..=3.0);
                // keep 1/δ₁ + 1/δ₂ ≤ 1.9
                let min_d2 = 1.0 / (1.9 - 1.0 / d1);
                params(&[("delta1", d1), ("delta2", rng.random_range(min_d2..=(min_d2 + 2.0).min(4.0)))])
            }
        };
        InequalityCase { id, params: p, axis }
    }

    pub fn param(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("{}: missing parameter `{name}`", self.id)))
    }

    pub fn validate(&self) -> Result<()> {
        let id = self.id;
        let known: &[&str] = match id {
            CaseId::InterpL2A => &["s", "delta"],
            CaseId::InterpL2B => &["gamma", "rho"],
            CaseId::InterpLinfA => &["gamma"],
            CaseId::InterpLinfB => &["delta", "rho"],
            CaseId::TripleMixed => &["p", "q", "gamma1", "gamma2"],
            CaseId::TripleL2 => &["gamma1", "gamma2"],
            CaseId::Commutator => &["s", "p"],
            CaseId::LogSobolev => &["sigma"],
            CaseId::AnisoLinf => &["delta1", "delta2"],
        };
        if let Some(k) = self.params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::InvalidConfig(format!("{id}: unknown parameter `{k}`")));
        }
        let ok = match id {
            CaseId::InterpL2A => {
                let (s, d) = (self.param("s")?, self.param("delta")?);
                // operator orders stay within [0, 4]
                (0.0..=3.0).contains(&d) && s >= 0.0 && s <= d + 1.0
            }
            CaseId::InterpL2B => {
                let (g, r) = (self.param("gamma")?, self.param("rho")?);
                r > 0.0 && r <= 4.0 && g >= 0.0 && g <= r
            }
            CaseId::InterpLinfA => (0.0..=3.0).contains(&self.param("gamma")?),
            CaseId::InterpLinfB => {
                let (d, r) = (self.param("delta")?, self.param("rho")?);
                (0.0..=3.0).contains(&r) && d > 0.0 && d <= r + 1.0 && d <= 4.0
            }
            CaseId::TripleMixed => {
                let (p, q) = (self.param("p")?, self.param("q")?);
                let (g1, g2) = (self.param("gamma1")?, self.param("gamma2")?);
                p >= 2.0 && q >= 2.0 && g1 > 1.0 / p && g1 <= 1.0 && g2 > 1.0 / q && g2 <= 1.0
            }
            CaseId::TripleL2 => {
                let (g1, g2) = (self.param("gamma1")?, self.param("gamma2")?);
                g1 > 0.5 && g1 <= 1.0 && g2 > 0.5 && g2 <= 1.0
            }
            CaseId::Commutator => {
                let s = self.param("s")?;
                let p = self.params.get("p").copied().unwrap_or(2.0);
                s > 0.0 && s < 1.0 && p == 2.0
            }
            CaseId::LogSobolev => {
                let s = self.param("sigma")?;
                s > 1.0 && s <= 4.0
            }
            CaseId::AnisoLinf => {
                let (d1, d2) = (self.param("delta1")?, self.param("delta2")?);
                d1 > 0.0 && d2 > 0.0 && d1 <= 4.0 && d2 <= 4.0 && 1.0 / d1 + 1.0 / d2 < 2.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(range_err(id, self.range_text()))
        }
    }

    fn range_text(&self) -> &'static str {
        match self.id {
            CaseId::InterpL2A => "0 ≤ s ≤ δ+1, 0 ≤ δ ≤ 3",
            CaseId::InterpL2B => "0 ≤ γ ≤ ϱ ≤ 4, ϱ > 0",
            CaseId::InterpLinfA => "0 ≤ γ ≤ 3",
            CaseId::InterpLinfB => "0 < δ ≤ ϱ+1, 0 ≤ ϱ ≤ 3",
            CaseId::TripleMixed => "p, q ≥ 2, γ₁ ∈ (1/p, 1], γ₂ ∈ (1/q, 1]",
            CaseId::TripleL2 => "γ₁, γ₂ ∈ (½, 1]",
            CaseId::Commutator => "s ∈ (0, 1), p = 2",
            CaseId::LogSobolev => "1 < σ ≤ 4",
            CaseId::AnisoLinf => "δ₁, δ₂ ∈ (0, 4], 1/δ₁ + 1/δ₂ < 2",
        }
    }

    /// Zero-mode stripping per field, standing in for decay at infinity.
    pub fn policies(&self) -> Vec<ZeroModePolicy> {
        let along = match self.axis {
            Axis::X1 => ZeroModePolicy::StripX1,
            Axis::X2 => ZeroModePolicy::StripX2,
        };
        match self.id {
            CaseId::InterpL2A | CaseId::InterpL2B | CaseId::InterpLinfA | CaseId::InterpLinfB => vec![along],
            CaseId::TripleMixed | CaseId::TripleL2 => {
                vec![ZeroModePolicy::Keep, ZeroModePolicy::StripX1, ZeroModePolicy::StripX2]
            }
            CaseId::Commutator => vec![ZeroModePolicy::Keep, ZeroModePolicy::Keep],
            CaseId::LogSobolev | CaseId::AnisoLinf => vec![ZeroModePolicy::StripBoth],
        }
    }

    /// Exponents applied to the right-hand factors, in factor order.
    /// Empty for log-sobolev, whose right side is not a product.
    pub fn exponents(&self) -> Result<Vec<f64>> {
        Ok(match self.id {
            CaseId::InterpL2A => {
                let e = self.param("s")? / (self.param("delta")? + 1.0);
                vec![1.0 - e, e]
            }
            CaseId::InterpL2B => {
                let e = self.param("gamma")? / self.param("rho")?;
                vec![1.0 - e, e]
            }
            CaseId::InterpLinfA => {
                let g = self.param("gamma")?;
                vec![g / (g + 1.0), 1.0 / (g + 1.0)]
            }
            CaseId::InterpLinfB => {
                let e = self.param("delta")? / (self.param("rho")? + 1.0);
                vec![1.0 - e, e]
            }
            CaseId::TripleMixed => {
                let a = 1.0 / (self.param("gamma1")? * self.param("p")?);
                let b = 1.0 / (self.param("gamma2")? * self.param("q")?);
                vec![1.0, 1.0 - a, a, 1.0 - b, b]
            }
            CaseId::TripleL2 => {
                let a = 1.0 / (2.0 * self.param("gamma1")?);
                let b = 1.0 / (2.0 * self.param("gamma2")?);
                vec![1.0, 1.0 - a, a, 1.0 - b, b]
            }
            CaseId::Commutator => vec![1.0, 1.0],
            CaseId::LogSobolev => vec![],
            CaseId::AnisoLinf => {
                let a = 1.0 / (2.0 * self.param("delta1")?);
                let b = 1.0 / (2.0 * self.param("delta2")?);
                vec![1.0 - a - b, a, b]
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs_factors: Vec<f64>,
    pub rhs: f64,
    /// `lhs / rhs`; `None` when both sides vanish.
    pub ratio: Option<f64>,
}

impl Evaluation {
    fn new(lhs: f64, rhs_factors: Vec<f64>, rhs: f64) -> Self {
        let ratio = if rhs == 0.0 && lhs == 0.0 {
            None
        } else if rhs == 0.0 {
            Some(f64::INFINITY)
        } else {
            Some(lhs / rhs)
        };
        Evaluation { lhs, rhs_factors, rhs, ratio }
    }

    /// Positive left side against a vanishing right side.
    pub fn is_hard_violation(&self) -> bool {
        self.rhs == 0.0 && self.lhs > 0.0
    }
}

fn product_with_exponents(factors: &[f64], exponents: &[f64]) -> f64 {
    factors
        .iter()
        .zip(exponents)
        .map(|(f, e)| if *e == 0.0 { 1.0 } else { f.powf(*e) })
        .product()
}

/// `∫|f g h|` by grid quadrature.
pub fn triple_integral(f: &SpectralField, g: &SpectralField, h: &SpectralField) -> Result<f64> {
    let (f, g, h) = (f.from_spectral()?, g.from_spectral()?, h.from_spectral()?);
    let sum: f64 = f.data.iter().zip(&g.data).zip(&h.data).map(|((a, b), c)| (a * b * c).abs()).sum();
    Ok(DOMAIN_MEASURE * sum / f.data.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorForm {
    /// `Λ^s(fg) − gΛ^s f − fΛ^s g`
    Full,
    /// `Λ^s(fg) − fΛ^s g`
    Reduced,
}

/// `L²` norm of the commutator bracket. Products are taken on the grid,
/// exact when both fields sit below a quarter of the grid.
pub fn commutator_lhs(f: &SpectralField, g: &SpectralField, s: f64, form: CommutatorForm) -> Result<f64> {
    let op = OperatorSpec::full(s);
    let lam_fg = f.product(g)?.apply(op)?;
    let f_lam_g = f.product(&g.apply(op)?)?;
    let mut bracket = lam_fg.sub(&f_lam_g)?;
    if form == CommutatorForm::Full {
        bracket = bracket.sub(&g.product(&f.apply(op)?)?)?;
    }
    Ok(bracket.l2_norm())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSobolevCheck {
    pub lhs: f64,
    pub rhs_with_c1: f64,
    pub implied_c: f64,
}

/// `‖f‖∞ / (1 + ‖f‖₂ + ‖f‖_{Ḃ⁰∞∞}·ln(e + ‖Λ^σ f‖₂))`.
pub fn log_sobolev_check(f: &SpectralField, sigma: f64) -> Result<LogSobolevCheck> {
    if !(sigma > 1.0) || sigma > 4.0 {
        return Err(Error::out_of_range("sigma", sigma, "(1, 4]"));
    }
    let lhs = norms::norm(f, NormSpec::Sup)?;
    let besov = norms::besov_b0_inf(f)?;
    let top = f.apply(OperatorSpec::full(sigma))?.l2_norm();
    let rhs = 1.0 + f.l2_norm() + besov * (std::f64::consts::E + top).ln();
    Ok(LogSobolevCheck { lhs, rhs_with_c1: rhs, implied_c: lhs / rhs })
}

/// Both sides of one inequality on concrete fields, `fields.len()` equal
/// to [`CaseId::field_count`].
pub fn eval_case(case: &InequalityCase, fields: &[SpectralField]) -> Result<Evaluation> {
    case.validate()?;
    if fields.len() != case.id.field_count() {
        return Err(Error::InvalidConfig(format!(
            "{} needs {} fields, got {}",
            case.id,
            case.id.field_count(),
            fields.len()
        )));
    }
    let f = &fields[0];
    let axis = case.axis;
    let dir = |s: f64| norms::directional_seminorm(f, axis, s);
    // ‖Λ^s_{x_i} ∂_i f‖₂ = ‖Λ^{s+1}_{x_i} f‖₂ mode by mode
    let dir_d = |s: f64| norms::directional_seminorm(f, axis, s + 1.0);
    let exps = case.exponents()?;
    let finish = |lhs: f64, factors: Vec<f64>| {
        let rhs = product_with_exponents(&factors, &exps);
        Evaluation::new(lhs, factors, rhs)
    };
    Ok(match case.id {
        CaseId::InterpL2A => finish(dir(case.param("s")?), vec![f.l2_norm(), dir_d(case.param("delta")?)]),
        CaseId::InterpL2B => finish(dir(case.param("gamma")?), vec![f.l2_norm(), dir(case.param("rho")?)]),
        CaseId::InterpLinfA => {
            let g = case.param("gamma")?;
            let d = f.apply(OperatorSpec::derivative(axis))?.from_spectral()?;
            let lhs = norms::lebesgue(&d, 2.0 * (g + 1.0));
            finish(lhs, vec![norms::norm(f, NormSpec::Sup)?, dir_d(g)])
        }
        CaseId::InterpLinfB => {
            let (delta, rho) = (case.param("delta")?, case.param("rho")?);
            let d = f.apply(OperatorSpec::directional(axis, delta))?.from_spectral()?;
            let lhs = norms::lebesgue(&d, 2.0 * (rho + 1.0) / delta);
            finish(lhs, vec![norms::norm(f, NormSpec::Sup)?, dir_d(rho)])
        }
        CaseId::TripleMixed | CaseId::TripleL2 => {
            let (g, h) = (&fields[1], &fields[2]);
            let lhs = triple_integral(f, g, h)?;
            let (g1, g2) = (case.param("gamma1")?, case.param("gamma2")?);
            let f_norm = match case.id {
                CaseId::TripleMixed => {
                    norms::mixed(&f.from_spectral()?, case.param("p")?, case.param("q")?)
                }
                _ => f.l2_norm(),
            };
            let factors = vec![
                f_norm,
                g.l2_norm(),
                norms::directional_seminorm(g, Axis::X1, g1),
                h.l2_norm(),
                norms::directional_seminorm(h, Axis::X2, g2),
            ];
            finish(lhs, factors)
        }
        CaseId::Commutator => {
            let g = &fields[1];
            let s = case.param("s")?;
            let lhs = commutator_lhs(f, g, s, CommutatorForm::Full)?;
            let factors = vec![norms::norm(g, NormSpec::Sup)?, f.apply(OperatorSpec::full(s))?.l2_norm()];
            finish(lhs, factors)
        }
        CaseId::LogSobolev => {
            let sigma = case.param("sigma")?;
            let c = log_sobolev_check(f, sigma)?;
            let factors = vec![
                f.l2_norm(),
                norms::besov_b0_inf(f)?,
                f.apply(OperatorSpec::full(sigma))?.l2_norm(),
            ];
            Evaluation::new(c.lhs, factors, c.rhs_with_c1)
        }
        CaseId::AnisoLinf => {
            let (d1, d2) = (case.param("delta1")?, case.param("delta2")?);
            let factors = vec![
                f.l2_norm(),
                norms::directional_seminorm(f, Axis::X1, d1),
                norms::directional_seminorm(f, Axis::X2, d2),
            ];
            finish(norms::norm(f, NormSpec::Sup)?, factors)
        }
    })
}
