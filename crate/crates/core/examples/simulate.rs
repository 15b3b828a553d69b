//! Feeds a solved wave to the finite-volume solver and measures how far it
//! drifts from pure translation at the Rankine–Hugoniot speed.

use nlburgers::cauchy::{measure_speed, simulate, translate_error, SimConfig, SimState};
use nlburgers::{solve_wave, Kernel, SolveOptions, WaveParams};

pub fn run_example() -> nlburgers::Result<()> {
    let kernel = Kernel::exponential(1.0)?;
    let params = WaveParams::new(2.5, 0.0)?;
    let opts = SolveOptions {
        length: Some(60.0),
        ..Default::default()
    };
    let (profile, _) = solve_wave(&kernel, &params, &opts)?;
    let xs = profile.full_nodes();
    let us = profile.full_line();
    for cells in [1000, 2000] {
        let cfg = SimConfig {
            cells,
            u_left: params.u_minus(),
            u_right: params.u_plus(),
            ..Default::default()
        };
        let init = SimState::sample(&cfg, |x| nlburgers::cauchy::interpolate_sorted(&xs, &us, x));
        let traj = simulate(&init, &kernel, &cfg)?;
        let fit = measure_speed(&traj, params.speed())?;
        println!(
            "M = {cells}: speed {:.4} (s = {}), L¹ translate error {:.4}, {} steps",
            fit.speed,
            params.speed(),
            translate_error(&traj, &xs, &us, params.speed()),
            traj.steps
        );
    }

    // steepening of smooth data
    let cfg = SimConfig {
        u_left: 2.0,
        u_right: -2.0,
        ..Default::default()
    };
    let traj = simulate(&SimState::sample(&cfg, |x| -2.0 * (3.0 * x).tanh()), &kernel, &cfg)?;
    let slopes = traj.max_slopes();
    println!("tanh data: max slope {:.2} → {:.2}, growth ×{:.2}", slopes[0], slopes[slopes.len() - 1], traj.slope_growth());
    Ok(())
}

#[allow(dead_code)]
fn main() -> nlburgers::Result<()> {
    run_example()
}
