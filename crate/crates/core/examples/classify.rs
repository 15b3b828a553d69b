//! Refinement classification on both sides of the √2 threshold for the
//! unit exponential kernel.

use nlburgers::waves::{classify_shock, ClassifyOptions};
use nlburgers::{Kernel, WaveParams};

pub fn run_example() -> nlburgers::Result<()> {
    let kernel = Kernel::exponential(1.0)?;
    let opts = ClassifyOptions {
        base_cells: 512,
        ..Default::default()
    };
    for amplitude in [0.8, 1.2, 1.7, 5.0] {
        let params = WaveParams::centered(amplitude / 2.0)?;
        let (c, _) = classify_shock(&kernel, &params, &opts)?;
        let ratios: Vec<String> = c
            .ratios
            .iter()
            .map(|r| r.map_or("-".into(), |r| format!("{r:.3}")))
            .collect();
        println!(
            "amplitude {amplitude:>4}: J = {:.3e} {:.3e} {:.3e}  ratios {}  → {} (theorem predicts jump: {})",
            c.jumps[0],
            c.jumps[1],
            c.jumps[2],
            ratios.join(" "),
            c.measured.as_str(),
            c.predicted_by_theorem
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nlburgers::Result<()> {
    run_example()
}
