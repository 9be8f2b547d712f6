use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::coefficient::Coefficient;

/// Hypotheses of the logarithmic Gronwall inequality:
///
/// ```text
/// A' + B ≤ [l + m ln(A+e) + n (ln(A+B+e))^α] (A+e) + f
/// B ≥ C1 A^γ,   n ≤ K (A+B+e)^β
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GronwallProblem {
    pub l: Coefficient,
    pub m: Coefficient,
    pub n: Coefficient,
    pub f: Coefficient,
    /// Power of the logarithm.
    pub alpha_g: f64,
    pub gamma: f64,
    pub beta_g: f64,
    pub c1: f64,
    pub k: f64,
    pub horizon: f64,
    /// `A(0)`.
    pub a0: f64,
}

impl GronwallProblem {
    pub fn new(gamma: f64, alpha_g: f64, beta_g: f64, c1: f64, k: f64, horizon: f64, a0: f64) -> Result<Self> {
        let p = GronwallProblem {
            l: Coefficient::ZERO,
            m: Coefficient::ZERO,
            n: Coefficient::ZERO,
            f: Coefficient::ZERO,
            alpha_g,
            gamma,
            beta_g,
            c1,
            k,
            horizon,
            a0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_coefficients(mut self, l: Coefficient, m: Coefficient, n: Coefficient, f: Coefficient) -> Result<Self> {
        self.l = l;
        self.m = m;
        self.n = n;
        self.f = f;
        self.validate()?;
        Ok(self)
    }

    /// `(γ−1)/γ`, the strict upper limit for `β`.
    pub fn beta_limit(&self) -> f64 {
        (self.gamma - 1.0) / self.gamma
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, ok: bool, v: f64, range: &str| if ok { Ok(()) } else { Err(Error::out_of_range(name, v, range)) };
        check("gamma", self.gamma > 1.0 && self.gamma.is_finite(), self.gamma, "(1, ∞)")?;
        check("alpha_g", self.alpha_g > 0.0 && self.alpha_g.is_finite(), self.alpha_g, "(0, ∞)")?;
        let limit = self.beta_limit();
        check("beta_g", self.beta_g >= 0.0 && self.beta_g < limit, self.beta_g, "[0, (γ−1)/γ)")?;
        check("c1", self.c1 > 0.0 && self.c1.is_finite(), self.c1, "(0, ∞)")?;
        check("k", self.k >= 0.0 && self.k.is_finite(), self.k, "[0, ∞)")?;
        check("horizon", self.horizon > 0.0 && self.horizon.is_finite(), self.horizon, "(0, ∞)")?;
        check("a0", self.a0 >= 0.0 && self.a0.is_finite(), self.a0, "[0, ∞)")?;
        for (name, c) in [("l", &self.l), ("m", &self.m), ("n", &self.n), ("f", &self.f)] {
            c.validate(name, self.horizon)?;
        }
        Ok(())
    }

    /// Right side of the differential inequality.
    pub fn rhs(&self, t: f64, a: f64, b: f64) -> f64 {
        let e = std::f64::consts::E;
        let n = self.n.eval(t);
        let log_term = if n == 0.0 { 0.0 } else { n * (a + b + e).ln().powf(self.alpha_g) };
        (self.l.eval(t) + self.m.eval(t) * (a + e).ln() + log_term) * (a + e) + self.f.eval(t)
    }

    pub fn jumps_in(&self, t0: f64, t1: f64) -> bool {
        [&self.l, &self.m, &self.n, &self.f].iter().any(|c| c.jumps_in(t0, t1))
    }

    /// Named presets for the command line.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            // pure decay: A' = −C1 A^γ
            "decay" => GronwallProblem::new(2.0, 1.5, 0.0, 1.0, 0.0, 1.0, 4.0),
            // every coefficient active, n at its majorant K
            "saturating" => GronwallProblem::new(2.0, 1.5, 0.3, 1.0, 0.5, 1.0, 1.0)?.with_coefficients(
                Coefficient::constant(0.5),
                Coefficient::Polynomial { coeffs: vec![0.2, 0.1] },
                Coefficient::constant(0.5),
                Coefficient::PiecewiseConstant { breaks: vec![0.5], values: vec![1.0, 0.25] },
            ),
            // near the β limit
            "tight" => GronwallProblem::new(1.5, 2.0, 0.28, 2.0, 1.0, 1.0, 2.0)?.with_coefficients(
                Coefficient::constant(0.1),
                Coefficient::constant(0.1),
                Coefficient::constant(1.0),
                Coefficient::constant(0.1),
            ),
            other => Err(Error::InvalidConfig(format!(
                "unknown gronwall preset `{other}` (known: decay, saturating, tight)"
            ))),
        }
    }

    pub const PRESETS: [&'static str; 3] = ["decay", "saturating", "tight"];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_limit_is_strict() {
        assert!(GronwallProblem::new(2.0, 1.5, 0.5, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(GronwallProblem::new(2.0, 1.5, 0.49, 1.0, 0.0, 1.0, 0.0).is_ok());
        assert!(GronwallProblem::new(1.0, 1.5, 0.0, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(GronwallProblem::new(2.0, 1.5, 0.0, 0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn presets_parse() {
        for name in GronwallProblem::PRESETS {
            GronwallProblem::preset(name).unwrap();
        }
        assert!(GronwallProblem::preset("nope").is_err());
    }

    #[test]
    fn rhs_of_zero_problem() {
        let p = GronwallProblem::new(2.0, 1.5, 0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(p.rhs(0.3, 5.0, 7.0), 0.0);
    }
}
