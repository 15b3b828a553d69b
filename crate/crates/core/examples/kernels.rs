//! Builds each kernel family, prints its moments and shock threshold, and runs
//! the hypothesis checks.
//!
//! ```text
//! cargo run --example kernels
//! ```

use nlburgers::{validate_kernel, Kernel, KernelSpec};

pub fn run_example() -> nlburgers::Result<()> {
    for spec in ["exp:k=1", "exp:k=2", "gauss:sigma=1", "uniform:a=1", "tri:a=1"] {
        let kernel = Kernel::from_spec(&spec.parse::<KernelSpec>()?)?;
        let m = kernel.moments();
        let report = validate_kernel(&kernel, 256);
        println!(
            "{spec:<14} M1 = {:.6}  M2 = {:.6}  4·M1 = {:.4}  checks {}",
            m.m1,
            m.m2,
            4.0 * m.m1,
            if report.all_passed() { "ok" } else { "FAILED" }
        );
        for flag in &report.flags {
            println!("  note: {flag}");
        }
    }

    // a density that is not monotone on (0, ∞) fails the decay check
    let ys: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
    let ks: Vec<f64> = ys.iter().map(|y| y * y * (2.0 - y.abs()).max(0.0)).collect();
    let bumpy = Kernel::tabulated_unchecked(&ys, &ks)?;
    for c in validate_kernel(&bumpy, 256).checks.iter().filter(|c| !c.passed) {
        println!("bumpy table fails {} (worst {:.3e})", c.name, c.worst);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nlburgers::Result<()> {
    run_example()
}
