//! Solves one traveling wave and writes the profile and iteration trace.
//!
//! ```text
//! cargo run --example solve -- 2.5 0
//! ```

use std::fs::File;
use std::io::BufWriter;

use nlburgers::{solve_wave, Kernel, SolveOptions, WaveParams};

pub fn run_with(u_minus: f64, u_plus: f64, out: Option<&std::path::Path>) -> nlburgers::Result<()> {
    let kernel = Kernel::exponential(1.0)?;
    let params = WaveParams::new(u_minus, u_plus)?;
    let opts = SolveOptions {
        cells: 2048,
        ..Default::default()
    };
    let (profile, trace) = solve_wave(&kernel, &params, &opts)?;
    println!(
        "s = {}  u_c = {}  L = {:.3}  {} iterations, last change {:.2e}",
        params.speed(),
        params.half_amplitude(),
        profile.grid().length(),
        profile.iterations,
        profile.final_sup_diff
    );
    println!("U(0⁻) = {:.6}  discrete jump 2u_N = {:.6}", params.speed() + profile.jump() / 2.0, profile.jump());
    println!("invariant violations: {}", trace.total_violations());
    let sub = profile.subsolution();
    println!("subsolution ε = {:.4e} after {} halvings", sub.epsilon, sub.halvings);
    if let Some(dir) = out {
        profile.write_csv(BufWriter::new(File::create(dir.join("profile.csv"))?))?;
        trace.write_csv(BufWriter::new(File::create(dir.join("trace.csv"))?))?;
    }
    Ok(())
}

pub fn run_example() -> nlburgers::Result<()> {
    run_with(2.5, 0.0, None)
}

#[allow(dead_code)]
fn main() -> nlburgers::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    match args.as_slice() {
        [a, b] => run_with(*a, *b, Some(std::path::Path::new("."))),
        _ => run_example(),
    }
}
