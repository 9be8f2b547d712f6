//! Empirical constants for every inequality case on random band-limited
//! fields at two resolutions.
//!
//! `cargo run --release --example inequality_campaign -- [samples]`

use asqg::harness::{run_campaign, CaseId, InequalityCase};

fn main() -> asqg::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    println!("{:>14} {:>10} {:>10} {:>10} {:>8} {:>6}", "case", "max", "p99", "mean", "stab", "viol");
    for id in CaseId::ALL {
        let report = run_campaign(&InequalityCase::representative(id), samples, &[64, 128], 1)?;
        println!(
            "{:>14} {:10.4e} {:10.4e} {:10.4e} {:8.3} {:6}",
            id.as_str(),
            report.stats.max,
            report.stats.p99,
            report.stats.mean,
            report.resolution_stability.unwrap_or(f64::NAN),
            report.violations.len()
        );
    }
    Ok(())
}
