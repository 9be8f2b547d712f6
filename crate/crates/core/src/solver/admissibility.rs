//! Which `(α, β)` pairs fall in the global-regularity region.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `α ≤ ½`, `β > 1/(2α+1)`.
    LowAlpha,
    /// `α > ½`, `β ≥ α`.
    HighAlphaLargeBeta,
    /// `α > β > (1−α)/(2α)`.
    HighAlphaSmallBeta,
    None,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::LowAlpha => "low-alpha",
            Regime::HighAlphaLargeBeta => "high-alpha-large-beta",
            Regime::HighAlphaSmallBeta => "high-alpha-small-beta",
            Regime::None => "none",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub regime: Regime,
    pub threshold: f64,
}

/// `threshold(α)` is `1/(2α+1)` up to `α = ½` and `(1−α)/(2α)` after; the
/// pair is admissible when `β` exceeds it.
pub fn check_admissibility(alpha: f64, beta: f64) -> Result<Admissibility> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::out_of_range(name, v, "(0, 1)"));
        }
    }
    let threshold = if alpha <= 0.5 {
        1.0 / (2.0 * alpha + 1.0)
    } else {
        (1.0 - alpha) / (2.0 * alpha)
    };
    let admissible = beta > threshold;
    let regime = if !admissible {
        Regime::None
    } else if alpha <= 0.5 {
        Regime::LowAlpha
    } else if beta >= alpha {
        Regime::HighAlphaLargeBeta
    } else {
        Regime::HighAlphaSmallBeta
    };
    Ok(Admissibility { admissible, regime, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_pairs() {
        let a = check_admissibility(0.5, 0.6).unwrap();
        assert!(a.admissible);
        assert_eq!(a.threshold, 0.5);
        assert_eq!(a.regime, Regime::LowAlpha);

        let b = check_admissibility(0.75, 0.2).unwrap();
        assert!(b.admissible);
        assert!((b.threshold - 0.25 / 1.5).abs() < 1e-15);
        assert_eq!(b.regime, Regime::HighAlphaSmallBeta);

        let c = check_admissibility(0.3, 0.5).unwrap();
        assert!(!c.admissible);
        assert!((c.threshold - 0.625).abs() < 1e-15);
        assert_eq!(c.regime, Regime::None);
    }

    #[test]
    fn threshold_is_continuous_at_one_half() {
        let below = check_admissibility(0.5, 0.9).unwrap().threshold;
        let above = check_admissibility(0.5 + 1e-12, 0.9).unwrap().threshold;
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn regimes_match_the_two_hypotheses() {
        // β > max{α, 1/(2α+1)} or α > β > (1−α)/(2α)
        for i in 1..40 {
            for j in 1..40 {
                let (alpha, beta) = (i as f64 / 40.0, j as f64 / 40.0);
                let a = check_admissibility(alpha, beta).unwrap();
                let prop_a = beta > alpha.max(1.0 / (2.0 * alpha + 1.0));
                let prop_b = alpha > beta && beta > (1.0 - alpha) / (2.0 * alpha) && alpha > 0.5;
                let boundary = alpha > 0.5 && beta == alpha;
                assert_eq!(a.admissible, prop_a || prop_b || boundary, "({alpha},{beta})");
                match a.regime {
                    Regime::LowAlpha | Regime::HighAlphaLargeBeta => assert!(prop_a || boundary),
                    Regime::HighAlphaSmallBeta => assert!(prop_b),
                    Regime::None => {}
                }
            }
        }
    }

    #[test]
    fn boundary_beta_equals_alpha() {
        let a = check_admissibility(0.7, 0.7).unwrap();
        assert_eq!(a.regime, Regime::HighAlphaLargeBeta);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(check_admissibility(0.0, 0.5).is_err());
        assert!(check_admissibility(0.5, 1.0).is_err());
        assert!(check_admissibility(f64::NAN, 0.5).is_err());
    }
}
