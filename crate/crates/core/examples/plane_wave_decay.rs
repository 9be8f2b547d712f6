//! A single Fourier mode is an exact solution: the nonlinear term vanishes
//! and the mode decays at rate `μ|k1|^{2α} + ν|k2|^{2β}`.

use asqg::solver::{InitialCondition, Simulation, SimulationConfig};
use asqg::spectral::VelocityLaw;

fn main() -> asqg::Result<()> {
    let (alpha, beta) = (0.5, 0.75);
    let config = SimulationConfig::new(
        64,
        alpha,
        beta,
        VelocityLaw::Sqg,
        InitialCondition::PlaneWave { k1: 3, k2: 2, amplitude: 1.0 },
    );
    let rate = 3f64.powf(2.0 * alpha) + 2f64.powf(2.0 * beta);
    let mut sim = Simulation::new(config)?;
    let a0 = sim.diagnostics()?.linf;

    println!("{:>6} {:>14} {:>14} {:>10}", "t", "max|θ|", "exact", "rel err");
    while !sim.is_finished() {
        sim.step()?;
        if sim.state().step % 200 == 0 {
            let d = sim.diagnostics()?;
            let exact = a0 * (-rate * d.t).exp();
            println!("{:6.3} {:14.8e} {:14.8e} {:10.2e}", d.t, d.linf, exact, (d.linf - exact).abs() / exact);
        }
    }
    Ok(())
}
