//! Convolves the odd step with the exponential kernel on the half line and
//! compares against u_c(1 − eˣ) and a brute-force quadrature.

use nlburgers::convolve::{brute_force_convolve, odd_convolve};
use nlburgers::{HalfLineField, HalfLineGrid, Kernel};

pub fn run_example() -> nlburgers::Result<()> {
    let kernel = Kernel::exponential(1.0)?;
    let uc = 1.0;
    for cells in [1024, 2048, 4096] {
        let grid = HalfLineGrid::new(30.0, cells)?;
        let step = HalfLineField::constant(grid, uc);
        let conv = odd_convolve(&kernel, &step)?;
        let err = grid
            .nodes()
            .iter()
            .zip(conv.values())
            .map(|(x, v)| (v - uc * (1.0 - x.exp())).abs())
            .fold(0.0, f64::max);
        println!("N = {cells:>5}  sup |K*u − u_c(1 − eˣ)| = {err:.3e}");
    }

    let grid = HalfLineGrid::new(30.0, 512)?;
    let values: Vec<f64> = grid.nodes().iter().map(|x| 1.0 - 0.5 * (x / 2.0).exp()).collect();
    let field = HalfLineField::new(grid, values, 1.0)?;
    let conv = odd_convolve(&kernel, &field)?;
    for i in [0, 100, 300, 500] {
        let x = grid.node(i);
        let brute = brute_force_convolve(&kernel, &field, x)?;
        println!("x = {x:>8.3}  fast {:.10}  brute {brute:.10}", conv.values()[i]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> nlburgers::Result<()> {
    run_example()
}
