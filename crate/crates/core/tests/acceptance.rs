//! The acceptance suite. Each criterion prints one PASS/FAIL line; the
//! process fails if any criterion does.

use std::time::{Duration, Instant};

use nlburgers::cauchy::{
    interpolate_sorted, measure_speed, simulate, step, translate_error, SimConfig, SimState,
    Trajectory,
};
use nlburgers::convolve::{brute_force_convolve, odd_convolve};
use nlburgers::waves::{
    classify_shock, flux_balance, iterate_once, jump_identity, pointwise_residual, supersolution,
    weak_residual, Bump, ClassifyOptions, ShockClass,
};
use nlburgers::{solve_wave, HalfLineField, HalfLineGrid, Kernel, SolveOptions, WaveParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(
        elapsed.as_secs_f64() < limit_s,
        format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()),
    )
}

fn suite() -> Vec<(&'static str, Kernel)> {
    vec![
        ("exp:k=1", Kernel::exponential(1.0).unwrap()),
        ("gauss:sigma=1", Kernel::gaussian(1.0).unwrap()),
        ("uniform:a=1", Kernel::uniform(1.0).unwrap()),
        ("tri:a=1", Kernel::triangular(1.0).unwrap()),
    ]
}

fn first_iterate_error(cells: usize) -> f64 {
    let kernel = Kernel::exponential(1.0).unwrap();
    let params = WaveParams::centered(1.0).unwrap();
    let grid = HalfLineGrid::new(30.0, cells).unwrap();
    let u1 = iterate_once(&kernel, &supersolution(&params, grid), &params).unwrap();
    grid.nodes()
        .iter()
        .zip(u1.values())
        .map(|(x, v)| (v - (1.0 - x.exp() / 2.0)).abs())
        .fold(0.0, f64::max)
}

fn first_iterate() -> Outcome {
    let t = Instant::now();
    let coarse = first_iterate_error(2048);
    let fine = first_iterate_error(4096);
    let order = (coarse / fine).log2();
    within(t.elapsed(), 2.0)?;
    ensure(fine <= 5e-4, format!("sup error {fine:.3e} > 5e-4"))?;
    ensure(order >= 1.8, format!("order {order:.3} < 1.8"))?;
    Ok(format!("sup error {fine:.3e} at N=4096, order {order:.3}"))
}

fn convolution_oracle() -> Outcome {
    let t = Instant::now();
    let kernel = Kernel::exponential(1.0).unwrap();
    let grid = HalfLineGrid::new(30.0, 4096).unwrap();
    let conv = odd_convolve(&kernel, &HalfLineField::constant(grid, 1.0)).map_err(|e| e.to_string())?;
    let closed = grid
        .nodes()
        .iter()
        .zip(conv.values())
        .map(|(x, v)| (v - (1.0 - x.exp())).abs())
        .fold(0.0, f64::max);
    // a monotone field with curvature everywhere
    let values: Vec<f64> = grid.nodes().iter().map(|x| 1.0 - 0.7 * (x / 3.0).exp()).collect();
    let field = HalfLineField::new(grid, values, 1.0).map_err(|e| e.to_string())?;
    let conv = odd_convolve(&kernel, &field).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut brute: f64 = 0.0;
    for _ in 0..50 {
        let i = rng.gen_range(0..=4096);
        let b = brute_force_convolve(&kernel, &field, grid.node(i)).map_err(|e| e.to_string())?;
        brute = brute.max((b - conv.values()[i]).abs());
    }
    within(t.elapsed(), 2.0)?;
    ensure(closed <= 5e-4, format!("closed-form error {closed:.3e} > 5e-4"))?;
    ensure(brute <= 1e-6, format!("brute-force disagreement {brute:.3e} > 1e-6"))?;
    Ok(format!("closed form {closed:.1e}, brute force {brute:.1e} at 50 nodes"))
}

struct Case {
    label: String,
    amplitude: f64,
    threshold: f64,
    converged: bool,
    iterations: usize,
    violations: usize,
    class: ShockClass,
    pointwise: f64,
    weak: f64,
    flux: f64,
    identity: Option<f64>,
}

fn run_case(name: &str, kernel: &Kernel, amplitude: f64) -> Result<Case, String> {
    let params = WaveParams::centered(amplitude / 2.0).map_err(|e| e.to_string())?;
    let label = format!("{name} amplitude {amplitude}");
    let opts = SolveOptions {
        cells: 4096,
        tol: 1e-8,
        max_iter: 5000,
        ..Default::default()
    };
    let (profile, trace) = solve_wave(kernel, &params, &opts).map_err(|e| format!("{label}: {e}"))?;
    let copts = ClassifyOptions {
        base_cells: 1024,
        ..Default::default()
    };
    let (c, _) = classify_shock(kernel, &params, &copts).map_err(|e| format!("{label}: {e}"))?;
    let err = |e: nlburgers::Error| format!("{label}: {e}");
    let identity = if c.measured == ShockClass::Continuous {
        Some(jump_identity(&profile, kernel, c.measured).map_err(err)?.defect)
    } else {
        None
    };
    Ok(Case {
        amplitude,
        threshold: 4.0 * kernel.moments().m1,
        converged: profile.converged(),
        iterations: profile.iterations,
        violations: trace.total_violations() + trace.sup_diff_increases(1e-10),
        class: c.measured,
        pointwise: pointwise_residual(&profile, kernel).map_err(err)?.sup,
        weak: weak_residual(&profile, kernel, &Bump::default_suite()).map_err(err)?,
        flux: flux_balance(&profile, kernel).map_err(err)?,
        identity,
        label,
    })
}

fn invariant_cases() -> (Vec<Result<Case, String>>, Duration) {
    let t = Instant::now();
    let kernels = suite();
    let jobs: Vec<(usize, f64)> = (0..kernels.len())
        .flat_map(|k| [0.5, 1.0, 2.0, 5.0].map(|a| (k, a)))
        .collect();
    let cases = jobs
        .par_iter()
        .map(|&(k, a)| run_case(kernels[k].0, &kernels[k].1, a))
        .collect();
    (cases, t.elapsed())
}

fn monotone_invariants(cases: &[Result<Case, String>], elapsed: Duration) -> Outcome {
    let mut worst_iter = 0;
    for c in cases {
        let c = c.as_ref().map_err(Clone::clone)?;
        ensure(c.violations == 0, format!("{}: {} violations", c.label, c.violations))?;
        ensure(c.converged, format!("{}: not converged in {} iterations", c.label, c.iterations))?;
        worst_iter = worst_iter.max(c.iterations);
    }
    within(elapsed, 60.0)?;
    Ok(format!(
        "{} cases, 0 violations, at most {worst_iter} iterations, {:.1} s",
        cases.len(),
        elapsed.as_secs_f64()
    ))
}

fn residuals(cases: &[Result<Case, String>]) -> Outcome {
    let (mut p, mut w, mut f, mut j) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut continuous = 0;
    for c in cases {
        let c = c.as_ref().map_err(Clone::clone)?;
        ensure(c.pointwise <= 1e-3, format!("{}: pointwise {:.3e}", c.label, c.pointwise))?;
        ensure(c.weak <= 1e-4, format!("{}: weak {:.3e}", c.label, c.weak))?;
        ensure(c.flux <= 1e-4, format!("{}: flux balance {:.3e}", c.label, c.flux))?;
        if let Some(d) = c.identity {
            ensure(d <= 1e-3, format!("{}: jump identity {d:.3e}", c.label))?;
            j = j.max(d);
            continuous += 1;
        }
        p = p.max(c.pointwise);
        w = w.max(c.weak);
        f = f.max(c.flux);
    }
    Ok(format!(
        "pointwise {p:.2e}, weak {w:.2e}, flux {f:.2e}, jump identity {j:.2e} over {continuous} continuous"
    ))
}

fn sharp_threshold() -> Outcome {
    let t = Instant::now();
    let kernel = Kernel::exponential(1.0).unwrap();
    let opts = ClassifyOptions {
        base_cells: 1024,
        ..Default::default()
    };
    let mut out = Vec::new();
    for (amplitude, want) in [(1.2, ShockClass::Continuous), (1.7, ShockClass::Discontinuous)] {
        let params = WaveParams::centered(amplitude / 2.0).unwrap();
        let (c, _) = classify_shock(&kernel, &params, &opts).map_err(|e| e.to_string())?;
        let r: Vec<String> = c.ratios.iter().map(|r| format!("{:.3}", r.unwrap_or(f64::NAN))).collect();
        ensure(
            c.measured == want,
            format!("amplitude {amplitude}: {} (ratios {})", c.measured.as_str(), r.join(", ")),
        )?;
        out.push(format!("{amplitude} {} [{}]", c.measured.as_str(), r.join(", ")));
    }
    within(t.elapsed(), 30.0)?;
    Ok(out.join("; "))
}

fn theorem_consistency(cases: &[Result<Case, String>]) -> Outcome {
    let opts = ClassifyOptions {
        base_cells: 1024,
        ..Default::default()
    };
    let extra: Vec<(f64, f64)> = [0.5, 2.0]
        .into_iter()
        .flat_map(|k| [0.5, 1.0, 2.0, 5.0, 10.0].map(|a| (k, a)))
        .collect();
    let extra: Vec<Result<(String, f64, f64, ShockClass), String>> = extra
        .par_iter()
        .map(|&(k, a)| {
            let kernel = Kernel::exponential(k).unwrap();
            let params = WaveParams::centered(a / 2.0).unwrap();
            let (c, _) = classify_shock(&kernel, &params, &opts).map_err(|e| e.to_string())?;
            Ok((format!("exp:k={k} amplitude {a}"), a, c.threshold, c.measured))
        })
        .collect();
    let mut rows = Vec::new();
    for c in cases {
        let c = c.as_ref().map_err(Clone::clone)?;
        rows.push((c.label.clone(), c.amplitude, c.threshold, c.class));
    }
    for r in extra {
        rows.push(r?);
    }
    let mut checked = 0;
    for (label, amplitude, threshold, class) in &rows {
        if *amplitude > 1.1 * threshold {
            checked += 1;
            ensure(*class != ShockClass::Continuous, format!("{label}: continuous above threshold"))?;
        }
    }
    ensure(checked > 0, "no case above threshold".into())?;
    Ok(format!("{checked} of {} cases above 1.1·4·M1, none continuous", rows.len()))
}

fn propagate(cells: usize, xs: &[f64], us: &[f64], kernel: &Kernel) -> Result<Trajectory, String> {
    let cfg = SimConfig {
        cells,
        u_left: 2.5,
        u_right: 0.0,
        ..Default::default()
    };
    let init = SimState::sample(&cfg, |x| interpolate_sorted(xs, us, x));
    simulate(&init, kernel, &cfg).map_err(|e| e.to_string())
}

fn rankine_hugoniot() -> Outcome {
    let t = Instant::now();
    let kernel = Kernel::exponential(1.0).unwrap();
    let params = WaveParams::new(2.5, 0.0).unwrap();
    let opts = SolveOptions {
        length: Some(60.0),
        ..Default::default()
    };
    let (profile, _) = solve_wave(&kernel, &params, &opts).map_err(|e| e.to_string())?;
    let xs = profile.full_nodes();
    let us = profile.full_line();
    let s = params.speed();
    let coarse = propagate(2000, &xs, &us, &kernel)?;
    let fine = propagate(4000, &xs, &us, &kernel)?;
    let speed = measure_speed(&coarse, s).map_err(|e| e.to_string())?.speed;
    let e1 = translate_error(&coarse, &xs, &us, s);
    let e2 = translate_error(&fine, &xs, &us, s);
    within(t.elapsed(), 60.0)?;
    let rel = (speed - s).abs() / s;
    ensure(rel <= 0.02, format!("speed {speed:.4} off by {:.2}%", 100.0 * rel))?;
    ensure(e1 <= 0.2, format!("L¹ error {e1:.4} > 0.2"))?;
    ensure(e2 < e1, format!("L¹ error did not decrease: {e1:.4} → {e2:.4}"))?;
    Ok(format!("speed {speed:.4} (s = {s}), L¹ {e1:.4} → {e2:.4} with M doubled"))
}

fn constant_state() -> Outcome {
    let mut worst: f64 = 0.0;
    for (_, kernel) in suite() {
        let cfg = SimConfig {
            u_left: 0.7,
            u_right: 0.7,
            ..Default::default()
        };
        let mut state = SimState::sample(&cfg, |_| 0.7);
        for _ in 0..100 {
            state = step(&state, &kernel, &cfg).map_err(|e| e.to_string())?;
        }
        worst = worst.max(state.values.iter().map(|v| (v - 0.7).abs()).fold(0.0, f64::max));
    }
    ensure(worst <= 1e-12, format!("deviation {worst:.3e}"))?;
    Ok(format!("sup deviation {worst:.1e} after 100 steps, 4 kernels"))
}

fn steepening() -> Outcome {
    let kernel = Kernel::exponential(1.0).unwrap();
    let mut growth = Vec::new();
    for cells in [2000, 4000] {
        let cfg = SimConfig {
            cells,
            u_left: 2.0,
            u_right: -2.0,
            ..Default::default()
        };
        let init = SimState::sample(&cfg, |x| -2.0 * (3.0 * x).tanh());
        growth.push(simulate(&init, &kernel, &cfg).map_err(|e| e.to_string())?.slope_growth());
    }
    ensure(growth[0] >= 3.0, format!("growth {:.2} < 3", growth[0]))?;
    ensure(growth[1] >= growth[0], format!("growth fell {:.2} → {:.2}", growth[0], growth[1]))?;
    Ok(format!("max slope growth {:.2} (M=2000), {:.2} (M=4000)", growth[0], growth[1]))
}

fn centering() -> Outcome {
    let kernel = Kernel::gaussian(1.0).unwrap();
    let (a, c) = (0.8, 1.75);
    let opts = SolveOptions {
        length: Some(40.0),
        cells: 2048,
        ..Default::default()
    };
    let base = WaveParams::new(a, -a).unwrap();
    let shifted = WaveParams::new(a + c, -a + c).unwrap();
    let (p0, _) = solve_wave(&kernel, &base, &opts).map_err(|e| e.to_string())?;
    let (p1, _) = solve_wave(&kernel, &shifted, &opts).map_err(|e| e.to_string())?;
    let diff = p0
        .half_line()
        .iter()
        .zip(p1.half_line())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let ds = shifted.speed() - base.speed();
    ensure(diff <= 1e-12, format!("half-line components differ by {diff:.3e}"))?;
    ensure(ds == c, format!("speeds differ by {ds}, expected {c}"))?;
    Ok(format!("half-line difference {diff:.1e}, speed shift {ds}"))
}

fn main() {
    let (cases, elapsed) = invariant_cases();
    let results: Vec<(&str, Outcome)> = vec![
        ("first-iterate oracle", first_iterate()),
        ("convolution oracle", convolution_oracle()),
        ("monotone-scheme invariants", monotone_invariants(&cases, elapsed)),
        ("fixed-point residuals", residuals(&cases)),
        ("sharp threshold", sharp_threshold()),
        ("theorem criterion consistency", theorem_consistency(&cases)),
        ("Rankine-Hugoniot propagation", rankine_hugoniot()),
        ("constant steady state", constant_state()),
        ("finite-time steepening", steepening()),
        ("centering invariance", centering()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
