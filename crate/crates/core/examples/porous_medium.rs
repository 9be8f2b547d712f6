//! Same initial data under the SQG and porous-medium velocity laws, side by
//! side.

use asqg::solver::{run, InitialCondition, SimulationConfig, TimeStep};
use asqg::spectral::VelocityLaw;

fn main() -> asqg::Result<()> {
    let runs = [VelocityLaw::Sqg, VelocityLaw::Pm].map(|law| {
        let mut c = SimulationConfig::new(
            96,
            0.4,
            0.9,
            law,
            InitialCondition::Random { seed: 7, kmax: 12, amplitude: 2.0, decay: Some(1.0) },
        );
        c.t_end = 0.5;
        c.time_step = TimeStep::Fixed(2e-3);
        c.diagnostics_every = 25;
        run(&c)
    });
    let [sqg, pm] = runs;
    let (sqg, pm) = (sqg?, pm?);

    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "t", "sqg ‖∇θ‖²", "pm ‖∇θ‖²", "sqg ‖Δθ‖", "pm ‖Δθ‖");
    for (a, b) in sqg.records.iter().zip(&pm.records) {
        println!("{:6.3} {:12.5e} {:12.5e} {:12.5e} {:12.5e}", a.t, a.a, b.a, a.h2, b.h2);
    }
    Ok(())
}
