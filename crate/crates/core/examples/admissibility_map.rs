//! ASCII map of the `(α, β)` global-regularity region.

use asqg::solver::{check_admissibility, Regime};

fn main() -> asqg::Result<()> {
    let n = 40;
    println!("β ↑   L: α ≤ ½   H: β ≥ α > ½   S: α > β   .: not covered");
    for j in (1..n).rev() {
        let beta = j as f64 / n as f64;
        let row: String = (1..n)
            .map(|i| {
                let a = check_admissibility(i as f64 / n as f64, beta)?;
                Ok(match a.regime {
                    Regime::LowAlpha => 'L',
                    Regime::HighAlphaLargeBeta => 'H',
                    Regime::HighAlphaSmallBeta => 'S',
                    Regime::None => '.',
                })
            })
            .collect::<asqg::Result<_>>()?;
        println!("{beta:4.2} {row}");
    }
    println!("     α →");
    Ok(())
}
