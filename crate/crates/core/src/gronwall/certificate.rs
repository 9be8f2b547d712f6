use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::problem::GronwallProblem;

/// Points per axis of the verification grid.
pub const GRID_POINTS: usize = 400;
/// The `A₁` grid ends here; beyond it a closed-form tail argument takes over.
pub const A1_GRID_MAX: f64 = 1e12;
pub const B1_GRID_MAX: f64 = 1e16;
/// Largest `σ` and `C2` the search will try.
pub const SEARCH_LIMIT: f64 = 1e12;

const SIGMA_BISECTIONS: usize = 40;
const C2_BISECTIONS: usize = 30;

/// Exponents and constants of the key bound
/// `(ln B₁)^α ≤ C2 B₁^{θ₁}/A₁^{θ₂} + C3 ln A₁`, where `A₁ = A+e+σ` and
/// `B₁ = A+B+e+σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyBound {
    pub sigma: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Worst log-gap `ln(lhs) − ln(rhs)` of each proof inequality. Nonnegative
/// gaps mean the inequality holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofChecks {
    /// `F(B_lo(A₁)) ≥ 0` over grid cells
    pub lower_edge_gap: f64,
    pub lower_edge_tail_gap: f64,
    /// `B₁ F'(B₁) ≥ 0` over grid cells
    pub slope_gap: f64,
    pub slope_tail_gap: f64,
}

impl ProofChecks {
    pub fn passed(&self) -> bool {
        [self.lower_edge_gap, self.lower_edge_tail_gap, self.slope_gap, self.slope_tail_gap]
            .iter()
            .all(|g| *g >= 0.0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GronwallCertificate {
    pub problem: GronwallProblem,
    pub key: KeyBound,
    /// `ln(A(0) + e + σ)`
    pub x0: f64,
    /// `sup_{x≥1} (C2 K x^{θ₂} − x/2)`, clamped at zero.
    pub c_star: f64,
    pub sigma_floor: f64,
    pub checks: ProofChecks,
}

impl GronwallCertificate {
    pub fn sigma(&self) -> f64 {
        self.key.sigma
    }

    /// `X(t) = exp(∫(m + C3 n)) (X0 + ∫(1 + C* + l + f))`
    pub fn x(&self, t: f64) -> f64 {
        let p = &self.problem;
        let growth = p.m.integral(t) + self.key.c3 * p.n.integral(t);
        let source = self.x0 + (1.0 + self.c_star) * t + p.l.integral(t) + p.f.integral(t);
        growth.exp() * source
    }

    /// `e^{X(t)}`; overflows to infinity for large `X`, in which case compare
    /// `ln A` against [`Self::x`] instead.
    pub fn a_bound(&self, t: f64) -> f64 {
        self.x(t).exp()
    }

    /// `ln` of [`Self::b_integral_bound`], finite even when the bound is not.
    pub fn ln_b_integral_bound(&self, t: f64) -> f64 {
        let x = self.x(t);
        (2.0 * x).ln() + x
    }

    pub fn b_integral_bound(&self, t: f64) -> f64 {
        let x = self.x(t);
        2.0 * x * x.exp()
    }

    /// Same constants, different `A(0)`.
    pub fn with_initial(&self, a0: f64) -> Self {
        let mut c = self.clone();
        c.problem.a0 = a0;
        c.x0 = (a0 + E + self.key.sigma).ln();
        c
    }
}

/// `θ₁` at the midpoint of `(β/(γ−1), 1−β)`.
pub fn theta1(problem: &GronwallProblem) -> f64 {
    let lo = problem.beta_g / (problem.gamma - 1.0);
    let hi = 1.0 - problem.beta_g;
    0.5 * (lo + hi)
}

pub fn sigma_floor(problem: &GronwallProblem) -> f64 {
    ((2.0 / problem.c1).powf(1.0 / (problem.gamma - 1.0)) - E).max(0.0)
}

fn logaddexp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `ln B_lo` at `A₁ = eˣ`, where `B_lo = A₁ + C1 (A₁ − s)^γ` is the smallest
/// `B₁` compatible with `B ≥ C1 A^γ`.
pub fn ln_b_lower(x: f64, s: f64, c1: f64, gamma: f64) -> f64 {
    let r = s * (-x).exp();
    let coercive = if r >= 1.0 {
        f64::NEG_INFINITY
    } else {
        c1.ln() + gamma * (x + (-r).ln_1p())
    };
    logaddexp(x, coercive)
}

/// Upper bound on `ln A₁` given `B₁ = eʸ`: inverts `B₁ ≥ B_lo(A₁)` using
/// `A₁ ≤ B₁` and `A₁ ≤ s + (B₁/C1)^{1/γ}`.
pub fn ln_a_upper(y: f64, s: f64, c1: f64, gamma: f64) -> f64 {
    y.min(logaddexp(s.ln(), (y - c1.ln()) / gamma))
}

/// `F(B₁) = C2 B₁^{θ₁}/A₁^{θ₂} + C3 ln A₁ − (ln B₁)^α`
pub fn comparison_function(key: &KeyBound, alpha: f64, a1: f64, b1: f64) -> f64 {
    key.c2 * b1.powf(key.theta1) / a1.powf(key.theta2) + key.c3 * a1.ln() - b1.ln().powf(alpha)
}

fn grid(lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> {
    let h = (hi - lo) / (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS - 1).map(move |i| (lo + i as f64 * h, if i == GRID_POINTS - 2 { hi } else { lo + (i + 1) as f64 * h }))
}

/// Evaluates both proof inequalities for a given `σ` and `C2`.
///
/// Each grid cell is bounded from below using the monotonicity of every
/// term separately, so a nonnegative gap covers the whole cell and not only
/// its end points. Beyond the grid both residuals are convex in log
/// coordinates and their minimum is taken in closed form.
pub fn proof_checks(problem: &GronwallProblem, key: &KeyBound) -> ProofChecks {
    let (gamma, alpha, c1) = (problem.gamma, problem.alpha_g, problem.c1);
    let (t1, t2, c2, c3) = (key.theta1, key.theta2, key.c2, key.c3);
    let s = E + key.sigma;
    let x0 = s.ln();

    // (a) F(B_lo(A₁)) ≥ 0 for A₁ = eˣ ≥ s.
    let x_end = A1_GRID_MAX.ln().max(x0 + 1.0);
    let mut lower_edge_gap = f64::INFINITY;
    for (xa, xb) in grid(x0, x_end) {
        let lhs = logaddexp(c2.ln() + t1 * ln_b_lower(xa, s, c1, gamma) - t2 * xb, (c3 * xa).ln());
        let rhs = alpha * ln_b_lower(xb, s, c1, gamma).ln();
        lower_edge_gap = lower_edge_gap.min(lhs - rhs);
    }
    // For x ≥ x_end: ln B_lo ≥ ln C1 + γx + γ ln(1 − s e^{−x_end}) and
    // ln B_lo ≤ ln(1+C1) + γx, leaving h(x) = P + ε'x − α ln(q + γx).
    let eps_a = gamma * t1 - t2;
    let p = c2.ln() + t1 * (c1.ln() + gamma * (-(s * (-x_end).exp())).ln_1p());
    let q = (1.0 + c1).ln();
    let x_min = ((alpha * gamma / eps_a - q) / gamma).max(x_end);
    let lower_edge_tail_gap = p + eps_a * x_min - alpha * (q + gamma * x_min).ln();

    // (b) B₁F'(B₁) ≥ 0, i.e. ln(C2 θ₁) + θ₁y − θ₂ ln A₁ ≥ ln α + (α−1) ln y.
    let y0 = x0;
    let y_end = B1_GRID_MAX.ln().max(y0 + 1.0);
    let mut slope_gap = f64::INFINITY;
    for (ya, yb) in grid(y0, y_end) {
        let lhs = (c2 * t1).ln() + t1 * ya - t2 * ln_a_upper(yb, s, c1, gamma);
        let y_log = if alpha >= 1.0 { yb } else { ya };
        let rhs = alpha.ln() + (alpha - 1.0) * y_log.ln();
        slope_gap = slope_gap.min(lhs - rhs);
    }
    // For y ≥ y_end: ln A₁ ≤ (y − ln C1)/γ + ln(1 + s e^{−(y_end − ln C1)/γ}).
    let eps_b = t1 - t2 / gamma;
    let shift = (s * (-(y_end - c1.ln()) / gamma).exp()).ln_1p();
    let r = (c2 * t1).ln() + t2 * c1.ln() / gamma - t2 * shift - alpha.ln();
    let y_min = if alpha > 1.0 { ((alpha - 1.0) / eps_b).max(y_end) } else { y_end };
    let slope_tail_gap = r + eps_b * y_min - (alpha - 1.0) * y_min.ln();

    ProofChecks {
        lower_edge_gap,
        lower_edge_tail_gap,
        slope_gap,
        slope_tail_gap,
    }
}

/// `sup_{x≥1} (C2 K x^{θ₂} − x/2)` by golden-section search on the concave
/// remainder, clamped at zero.
pub fn young_constant(c2k: f64, theta2: f64) -> f64 {
    if c2k == 0.0 {
        return 0.0;
    }
    let g = |x: f64| c2k * x.powf(theta2) - 0.5 * x;
    let mut hi = 2.0;
    while g(hi) >= g(hi / 2.0) {
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let (mut a, mut b) = (1.0f64, hi);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a) <= 1e-15 * b {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = g(d);
        }
    }
    let best = g(a).max(g(b)).max(gc).max(gd).max(g(1.0));
    // concave, so the golden point is within rounding of the sup
    (best + 1e-12 * best.abs()).max(0.0)
}

struct Search<'a> {
    problem: &'a GronwallProblem,
    theta1: f64,
    theta2: f64,
    floor: f64,
}

impl Search<'_> {
    fn key(&self, sigma: f64, c2: f64) -> KeyBound {
        KeyBound {
            sigma,
            theta1: self.theta1,
            theta2: self.theta2,
            c2,
            c3: 1.0,
        }
    }

    fn passes(&self, sigma: f64, c2: f64) -> bool {
        proof_checks(self.problem, &self.key(sigma, c2)).passed()
    }

    fn candidates(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.floor).chain((-3..=12).map(move |j| self.floor + 10f64.powi(j)))
    }

    /// First passing candidate from the coarse scan.
    fn scan(&self, c2: f64) -> Option<(Option<f64>, f64)> {
        let mut prev = None;
        for sigma in self.candidates() {
            if sigma > SEARCH_LIMIT {
                break;
            }
            if self.passes(sigma, c2) {
                return Some((prev, sigma));
            }
            prev = Some(sigma);
        }
        None
    }

    fn sigma_for(&self, c2: f64) -> Option<f64> {
        let (prev, mut hi) = self.scan(c2)?;
        let Some(mut lo) = prev else { return Some(hi) };
        for _ in 0..SIGMA_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if self.passes(mid, c2) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

/// Builds the explicit bound. `C3 = 1`; `C2` starts at 1 and is raised by
/// decades, then bisected down in log scale, until some `σ` satisfies both
/// proof inequalities.
pub fn build_certificate(problem: &GronwallProblem) -> Result<GronwallCertificate> {
    problem.validate()?;
    let theta1 = theta1(problem);
    let theta2 = problem.beta_g + theta1;
    let floor = sigma_floor(problem);
    if !floor.is_finite() || floor > SEARCH_LIMIT {
        return Err(Error::CertificateFailure {
            limit: SEARCH_LIMIT,
            reason: format!("sigma floor {floor:e} is already past the search limit"),
        });
    }
    let search = Search {
        problem,
        theta1,
        theta2,
        floor,
    };

    let mut c2 = 1.0;
    if search.scan(c2).is_none() {
        let mut lo = c2;
        loop {
            c2 *= 10.0;
            if c2 > SEARCH_LIMIT {
                return Err(Error::CertificateFailure {
                    limit: SEARCH_LIMIT,
                    reason: format!("proof inequalities fail for every C2 ≤ {SEARCH_LIMIT:e}"),
                });
            }
            if search.scan(c2).is_some() {
                break;
            }
            lo = c2;
        }
        let (mut l, mut h) = (lo.ln(), c2.ln());
        for _ in 0..C2_BISECTIONS {
            let mid = 0.5 * (l + h);
            if search.scan(mid.exp()).is_some() {
                h = mid;
            } else {
                l = mid;
            }
        }
        c2 = h.exp();
    }
    let sigma = search.sigma_for(c2).expect("scan found a passing sigma");
    let key = search.key(sigma, c2);
    let checks = proof_checks(problem, &key);
    debug_assert!(checks.passed());

    let k_eff = if problem.n.is_zero() { 0.0 } else { problem.k };
    let c_star = young_constant(c2 * k_eff, theta2);
    Ok(GronwallCertificate {
        problem: problem.clone(),
        key,
        x0: (problem.a0 + E + sigma).ln(),
        c_star,
        sigma_floor: floor,
        checks,
    })
}
