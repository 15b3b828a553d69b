//! Checks a solved profile against the equation in strong and weak form.

use nlburgers::waves::{
    classify_profiles, flux_balance, jump_identity, pointwise_residual, weak_residual, Bump,
    ShockClass,
};
use nlburgers::{solve_wave, Kernel, SolveOptions, WaveParams};

pub fn run_example() -> nlburgers::Result<()> {
    let kernel = Kernel::gaussian(1.0)?;
    let params = WaveParams::new(1.5, 0.5)?;
    let mut profiles = Vec::new();
    for cells in [1024, 2048, 4096] {
        let opts = SolveOptions {
            cells,
            ..Default::default()
        };
        profiles.push(solve_wave(&kernel, &params, &opts)?.0);
    }
    let class = classify_profiles(&kernel, &params, &profiles, 1e-8).measured;
    let fine = &profiles[2];
    let p = pointwise_residual(fine, &kernel)?;
    println!("pointwise residual {:.3e}, slopes in [{:.3}, {:.3e}]", p.sup, p.slope_min, p.slope_max);
    println!("weak residual      {:.3e}", weak_residual(fine, &kernel, &Bump::default_suite())?);
    println!("flux balance       {:.3e}", flux_balance(fine, &kernel)?);
    println!("classified {}", class.as_str());
    if class == ShockClass::Continuous {
        let j = jump_identity(fine, &kernel, class)?;
        println!("jump identity: integral {:.6}, defect {:.3e}, |integral| ≤ {:.4}", j.integral, j.defect, j.bound);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nlburgers::Result<()> {
    run_example()
}
