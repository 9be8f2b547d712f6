//! Random smooth data under the SQG law with an admissible `(α, β)` pair.
//! Prints the diagnostics stream to stdout.
//!
//! `cargo run --release --example sqg_run -- [n] [t_end]`

use asqg::io::write_run_output;
use asqg::solver::{check_admissibility, run, InitialCondition, SimulationConfig, TimeStep};
use asqg::spectral::VelocityLaw;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(128);
    let t_end: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1.0);

    let (alpha, beta) = (0.5, 0.6);
    eprintln!("{:?}", check_admissibility(alpha, beta)?);

    let mut config = SimulationConfig::new(
        n,
        alpha,
        beta,
        VelocityLaw::Sqg,
        InitialCondition::Random { seed: 1, kmax: n / 8, amplitude: 1.0, decay: Some(2.0) },
    );
    config.t_end = t_end;
    config.time_step = TimeStep::Cfl(0.25);
    config.diagnostics_every = 10;

    let out = run(&config)?;
    write_run_output(&mut std::io::stdout().lock(), &out)?;
    let (first, last) = (&out.records[0], out.records.last().unwrap());
    eprintln!(
        "{} steps: ‖θ‖₂ {:.6} -> {:.6}, ‖θ‖∞ {:.6} -> {:.6}",
        out.final_state.step, first.l2, last.l2, first.linf, last.linf
    );
    Ok(())
}
