use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{InitShape, RunConfig};
use super::{EXIT_ERROR, EXIT_INDETERMINATE, EXIT_OK};
use crate::cauchy::{self, SimConfig, SimState};
use crate::error::{Error, Result};
use crate::kernels::{validate_kernel, Kernel, KernelSpec, Moments, ValidationReport};
use crate::waves::{
    self, classify_profiles, classify_shock, default_length, flux_balance, pointwise_residual,
    solve_wave, weak_residual, Bump, ClassifyOptions, ShockClass, ShockClassification,
    SolveOptions, WaveParams, WaveProfile,
};

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn output_dir(cfg: &RunConfig) -> Result<&Path> {
    fs::create_dir_all(&cfg.output)?;
    Ok(&cfg.output)
}

#[derive(Clone, Copy, Debug, Serialize)]
struct Residuals {
    pointwise: f64,
    weak: f64,
    flux_balance: f64,
    slope_min: f64,
    slope_max: f64,
}

fn residuals(profile: &WaveProfile, kernel: &Kernel) -> Result<Residuals> {
    let p = pointwise_residual(profile, kernel)?;
    Ok(Residuals {
        pointwise: p.sup,
        weak: weak_residual(profile, kernel, &Bump::default_suite())?,
        flux_balance: flux_balance(profile, kernel)?,
        slope_min: p.slope_min,
        slope_max: p.slope_max,
    })
}

#[derive(Serialize)]
struct ProfileMeta<'a> {
    config: &'a RunConfig,
    kernel: String,
    moments: Moments,
    u_minus: f64,
    u_plus: f64,
    s: f64,
    u_c: f64,
    #[serde(rename = "L")]
    length: f64,
    #[serde(rename = "N")]
    cells: usize,
    iterations: usize,
    final_sup_diff: f64,
    status: waves::SolveStatus,
    jump: f64,
    classification: ShockClass,
    refinement: Option<ShockClassification>,
    residuals: Residuals,
    subsolution: &'a waves::SubsolutionSpec,
}

/// Solves on N and, for the refinement verdict, on N/4 and N/2 as well.
pub fn cmd_solve(cfg: &RunConfig) -> Result<i32> {
    let kernel = cfg.kernel()?;
    let params = cfg.params()?;
    let length = cfg.length.unwrap_or_else(|| default_length(&kernel, &params));
    let opts = |cells| SolveOptions {
        length: Some(length),
        cells,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
    };
    let coarse = [cfg.cells / 4, cfg.cells / 2];
    let refine = cfg.cells.is_multiple_of(4) && coarse[0] >= 64;
    let (main, others) = rayon::join(
        || solve_wave(&kernel, &params, &opts(cfg.cells)),
        || -> Result<Vec<WaveProfile>> {
            if !refine {
                return Ok(Vec::new());
            }
            coarse
                .par_iter()
                .map(|&n| solve_wave(&kernel, &params, &opts(n)).map(|r| r.0))
                .collect()
        },
    );
    let (profile, trace) = main?;
    let mut profiles = others?;
    let refinement = if refine {
        profiles.push(profile.clone());
        Some(classify_profiles(&kernel, &params, &profiles, cfg.tol))
    } else {
        None
    };
    let classification = match (&refinement, profile.converged()) {
        (Some(r), true) => r.measured,
        _ => ShockClass::Indeterminate,
    };
    let mut resolved = cfg.clone();
    resolved.length = Some(length);
    let meta = ProfileMeta {
        config: &resolved,
        kernel: kernel.label(),
        moments: kernel.moments(),
        u_minus: params.u_minus(),
        u_plus: params.u_plus(),
        s: params.speed(),
        u_c: params.half_amplitude(),
        length,
        cells: cfg.cells,
        iterations: profile.iterations,
        final_sup_diff: profile.final_sup_diff,
        status: profile.status,
        jump: profile.jump(),
        classification,
        refinement,
        residuals: residuals(&profile, &kernel)?,
        subsolution: profile.subsolution(),
    };
    let dir = output_dir(cfg)?;
    profile.write_csv(create(&dir.join("profile.csv"))?)?;
    trace.write_csv(create(&dir.join("trace.csv"))?)?;
    write_json(&dir.join("profile.meta.json"), &meta)?;
    Ok(if profile.converged() { EXIT_OK } else { EXIT_INDETERMINATE })
}

fn classify_options(cfg: &RunConfig) -> ClassifyOptions {
    ClassifyOptions {
        length: cfg.length,
        base_cells: cfg.base_cells,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
    }
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    config: &'a RunConfig,
    kernel: String,
    u_minus: f64,
    u_plus: f64,
    amplitude: f64,
    #[serde(flatten)]
    classification: &'a ShockClassification,
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<i32> {
    let kernel = cfg.kernel()?;
    let params = cfg.params()?;
    let (c, _) = classify_shock(&kernel, &params, &classify_options(cfg))?;
    let mut resolved = cfg.clone();
    resolved.length = Some(c.length);
    let out = ClassifyOutput {
        config: &resolved,
        kernel: kernel.label(),
        u_minus: params.u_minus(),
        u_plus: params.u_plus(),
        amplitude: params.amplitude(),
        classification: &c,
    };
    write_json(&output_dir(cfg)?.join("classification.json"), &out)?;
    Ok(if c.measured == ShockClass::Indeterminate {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    })
}

/// One line of sweep.csv.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub kernel: String,
    pub amplitude: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub threshold: f64,
    pub predicted_by_theorem: bool,
    pub status: String,
    pub classification: String,
    pub jump: f64,
    pub iterations: usize,
    pub pointwise: f64,
    pub weak: f64,
    pub flux_balance: f64,
    pub message: String,
}

fn sweep_row(spec: &str, amplitude: f64, center: f64, opts: &ClassifyOptions) -> SweepRow {
    let mut row = SweepRow {
        kernel: spec.to_string(),
        amplitude,
        u_minus: center + 0.5 * amplitude,
        u_plus: center - 0.5 * amplitude,
        threshold: f64::NAN,
        predicted_by_theorem: false,
        status: "ok".into(),
        classification: String::new(),
        jump: f64::NAN,
        iterations: 0,
        pointwise: f64::NAN,
        weak: f64::NAN,
        flux_balance: f64::NAN,
        message: String::new(),
    };
    let outcome = (|| -> Result<()> {
        let kernel = Kernel::from_spec(&spec.parse::<KernelSpec>()?)?;
        row.threshold = 4.0 * kernel.moments().m1;
        row.predicted_by_theorem = amplitude > row.threshold;
        let params = WaveParams::new(row.u_minus, row.u_plus)?;
        let (c, profiles) = classify_shock(&kernel, &params, opts)?;
        let finest = &profiles[2];
        row.classification = c.measured.as_str().into();
        row.jump = finest.jump();
        row.iterations = finest.iterations;
        let r = residuals(finest, &kernel)?;
        row.pointwise = r.pointwise;
        row.weak = r.weak;
        row.flux_balance = r.flux_balance;
        Ok(())
    })();
    if let Err(e) = outcome {
        row.status = e.kind().into();
        row.message = e.to_string();
    }
    row
}

fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "kernel",
        "amplitude",
        "u_minus",
        "u_plus",
        "threshold",
        "predicted_by_theorem",
        "status",
        "classification",
        "jump",
        "iterations",
        "pointwise",
        "weak",
        "flux_balance",
        "message",
    ])?;
    for r in rows {
        w.write_record([
            r.kernel.clone(),
            format!("{:e}", r.amplitude),
            format!("{:e}", r.u_minus),
            format!("{:e}", r.u_plus),
            format!("{:e}", r.threshold),
            r.predicted_by_theorem.to_string(),
            r.status.clone(),
            r.classification.clone(),
            format!("{:e}", r.jump),
            r.iterations.to_string(),
            format!("{:e}", r.pointwise),
            format!("{:e}", r.weak),
            format!("{:e}", r.flux_balance),
            r.message.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows run concurrently; the file keeps kernel-major input order.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<i32> {
    let amplitudes = cfg.sweep.amplitude_list()?;
    if cfg.sweep.kernels.is_empty() {
        return Err(Error::Config("kernel list is empty".into()));
    }
    let opts = classify_options(cfg);
    let jobs: Vec<(&str, f64)> = cfg
        .sweep
        .kernels
        .iter()
        .flat_map(|k| amplitudes.iter().map(move |&a| (k.as_str(), a)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(k, a)| sweep_row(k, a, cfg.sweep.center, &opts))
        .collect();
    let dir = output_dir(cfg)?;
    write_sweep_csv(&rows, create(&dir.join("sweep.csv"))?)?;
    write_json(
        &dir.join("sweep.meta.json"),
        &serde_json::json!({ "config": cfg, "rows": rows.len() }),
    )?;
    if rows.iter().all(|r| r.status != "ok") {
        return Err(Error::Contract(format!("all {} sweep rows failed", rows.len())));
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Diagnostics<'a> {
    config: &'a RunConfig,
    sim: SimConfig,
    steps: usize,
    times: Vec<f64>,
    max_slope: Vec<f64>,
    total_variation: Vec<f64>,
    slope_growth: f64,
    expected_speed: Option<f64>,
    measured_speed: Option<f64>,
    speed_fit_rms: Option<f64>,
    #[serde(rename = "L1_error_vs_translate")]
    l1_error_vs_translate: Option<f64>,
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<i32> {
    let kernel = cfg.kernel()?;
    let s = &cfg.sim;
    let mut sim = SimConfig {
        start: s.start,
        end: s.end,
        cells: s.cells,
        cfl: s.cfl,
        end_time: s.end_time,
        u_left: 0.0,
        u_right: 0.0,
        snapshot_interval: s.snapshot_interval,
    };
    sim.validate()?;
    let profile = match &s.init_from {
        Some(path) => {
            let (xs, us) = WaveProfile::read_csv(path)?;
            if xs.len() < 2 || xs[0] > sim.start || xs[xs.len() - 1] < sim.end {
                return Err(Error::Config(format!(
                    "profile {} does not cover the domain [{}, {}]",
                    path.display(),
                    sim.start,
                    sim.end
                )));
            }
            if xs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config(format!("profile {} is not sorted in x", path.display())));
            }
            Some((xs, us))
        }
        None => None,
    };
    let init = match &profile {
        Some((xs, us)) => {
            sim.u_left = us[0];
            sim.u_right = us[us.len() - 1];
            SimState::sample(&sim, |x| cauchy::interpolate_sorted(xs, us, x))
        }
        None => {
            let shape = InitShape::parse(&s.init)?;
            (sim.u_left, sim.u_right) = shape.far_fields();
            SimState::sample(&sim, |x| shape.value(x))
        }
    };
    let traj = cauchy::simulate(&init, &kernel, &sim)?;
    let level = 0.5 * (sim.u_left + sim.u_right);
    let fit = if sim.u_left != sim.u_right && traj.snapshots.len() >= 5 {
        Some(cauchy::measure_speed(&traj, level)?)
    } else {
        None
    };
    let l1 = profile
        .as_ref()
        .map(|(xs, us)| cauchy::translate_error(&traj, xs, us, level));
    let diag = Diagnostics {
        config: cfg,
        sim,
        steps: traj.steps,
        times: traj.snapshots.iter().map(|s| s.time).collect(),
        max_slope: traj.max_slopes(),
        total_variation: traj.total_variations(),
        slope_growth: traj.slope_growth(),
        expected_speed: (sim.u_left != sim.u_right).then_some(level),
        measured_speed: fit.as_ref().map(|f| f.speed),
        speed_fit_rms: fit.as_ref().map(|f| f.residual_rms),
        l1_error_vs_translate: l1,
    };
    let dir = output_dir(cfg)?;
    traj.write_csv(create(&dir.join("snapshots.csv"))?)?;
    write_json(&dir.join("diagnostics.json"), &diag)?;
    Ok(EXIT_OK)
}

fn kernel_for_validation(spec: &KernelSpec) -> Result<Kernel> {
    match Kernel::from_spec(spec) {
        Err(Error::InvalidKernel(_)) if matches!(spec, KernelSpec::Tabulated { .. }) => {
            let KernelSpec::Tabulated { path, .. } = spec else { unreachable!() };
            let (ys, ks) = Kernel::read_table(Path::new(path))?;
            Kernel::tabulated_unchecked(&ys, &ks)
        }
        other => other,
    }
}

#[derive(Serialize)]
struct ValidationOutput<'a> {
    config: &'a RunConfig,
    moments: Moments,
    passed: bool,
    #[serde(flatten)]
    report: ValidationReport,
}

/// Writes validation.json and echoes it on stdout; exit 1 if any check fails.
pub fn cmd_kernel_validate(cfg: &RunConfig) -> Result<i32> {
    let spec: KernelSpec = cfg.kernel.parse()?;
    let kernel = kernel_for_validation(&spec)?;
    let report = validate_kernel(&kernel, cfg.probes);
    let out = ValidationOutput {
        config: cfg,
        moments: kernel.moments(),
        passed: report.all_passed(),
        report,
    };
    write_json(&output_dir(cfg)?.join("validation.json"), &out)?;
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if out.passed { EXIT_OK } else { EXIT_ERROR })
}
