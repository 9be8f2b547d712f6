//! Stop a run halfway, write a checkpoint, and resume from the file.

use asqg::io::Checkpoint;
use asqg::solver::{run, InitialCondition, Simulation, SimulationConfig};
use asqg::spectral::VelocityLaw;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = SimulationConfig::new(
        64,
        0.6,
        0.5,
        VelocityLaw::Pm,
        InitialCondition::Random { seed: 42, kmax: 8, amplitude: 1.0, decay: None },
    );
    config.t_end = 0.2;

    let mut sim = Simulation::new(config.clone())?;
    while sim.state().t < 0.1 - 1e-12 {
        sim.step()?;
    }
    let path = std::env::temp_dir().join("asqg-example.ckpt");
    sim.checkpoint()?.save(&path)?;
    println!("saved t = {} to {}", Checkpoint::load(&path)?.t, path.display());

    let straight = run(&config)?;
    config.initial_condition = InitialCondition::FromCheckpoint { path: path.clone() };
    let resumed = run(&config)?;
    let (a, b) = (straight.records.last().unwrap(), resumed.records.last().unwrap());
    println!("straight ‖θ(T)‖₂ = {:.16e}", a.l2);
    println!("resumed  ‖θ(T)‖₂ = {:.16e}", b.l2);
    std::fs::remove_file(path)?;
    Ok(())
}
