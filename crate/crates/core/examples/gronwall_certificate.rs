//! Builds the explicit bound for a logarithmic Gronwall system and checks it
//! against a saturating trajectory.

use asqg::gronwall::{build_certificate, synth_trajectory, verify_with_certificate, GronwallProblem, SynthMode};

fn main() -> asqg::Result<()> {
    let problem = GronwallProblem::preset("saturating")?;
    let cert = build_certificate(&problem)?;
    println!(
        "σ = {:.4e}, θ1 = {:.3}, θ2 = {:.3}, C2 = {:.3e}, C* = {:.3e}",
        cert.sigma(),
        cert.key.theta1,
        cert.key.theta2,
        cert.key.c2,
        cert.c_star
    );

    let synth = synth_trajectory(&problem, SynthMode::Saturating, 0)?;
    let verdict = verify_with_certificate(&cert, &synth.trajectory)?;
    println!("hypotheses hold: {}, bound holds: {}, margin {:.4}", verdict.hypotheses_ok, verdict.bound_ok, verdict.margin);

    println!("{:>5} {:>12} {:>12}", "t", "ln A(t)", "X(t)");
    for s in synth.trajectory.samples.iter().step_by(2000) {
        println!("{:5.2} {:12.4e} {:12.4e}", s.t, (s.a + 1e-300).ln(), cert.x(s.t));
    }
    Ok(())
}
