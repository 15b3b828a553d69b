//! Finite-volume solver for u_t + (u²/2)_x = K*u − u on a bounded window
//! with constant far fields: Rusanov fluxes, forward Euler, unsplit source.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::convolve::FullLineConvolver;
use crate::error::{Error, Result};
use crate::kernels::Kernel;

const SANITY_BAND: f64 = 0.1;
const MAX_STEP: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub start: f64,
    pub end: f64,
    pub cells: usize,
    pub cfl: f64,
    pub end_time: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub snapshot_interval: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            start: -40.0,
            end: 40.0,
            cells: 2000,
            cfl: 0.4,
            end_time: 5.0,
            u_left: 0.0,
            u_right: 0.0,
            snapshot_interval: 0.5,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSimConfig(msg));
        if !(self.start.is_finite() && self.end.is_finite() && self.start < self.end) {
            return bad(format!("domain [{}, {}] is empty", self.start, self.end));
        }
        if self.cells < 128 {
            return bad(format!("need at least 128 cells, got {}", self.cells));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return bad(format!("CFL {} outside (0, 0.9]", self.cfl));
        }
        if !(self.end_time > 0.0 && self.end_time.is_finite()) {
            return bad(format!("end time {} must be positive", self.end_time));
        }
        if !(self.snapshot_interval > 0.0) {
            return bad("snapshot interval must be positive".into());
        }
        if !(self.u_left.is_finite() && self.u_right.is_finite()) {
            return bad("far fields must be finite".into());
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / self.cells as f64
    }

    pub fn center(&self, j: usize) -> f64 {
        self.start + (j as f64 + 0.5) * self.spacing()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|j| self.center(j)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub time: f64,
    pub values: Vec<f64>,
}

impl SimState {
    pub fn new(values: Vec<f64>) -> Self {
        SimState { time: 0.0, values }
    }

    /// Point samples of `f` at the cell centres.
    pub fn sample(cfg: &SimConfig, f: impl Fn(f64) -> f64) -> Self {
        SimState::new(cfg.centers().into_iter().map(f).collect())
    }
}

fn rusanov(a: f64, b: f64) -> f64 {
    0.25 * (a * a + b * b) - 0.5 * a.abs().max(b.abs()) * (b - a)
}

/// Reusable stepper holding the convolution plan for one window.
pub struct Simulator {
    cfg: SimConfig,
    conv: FullLineConvolver,
    band: (f64, f64),
}

impl Simulator {
    pub fn new(kernel: &Kernel, cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let conv = FullLineConvolver::new(kernel, cfg.start, cfg.end, cfg.cells)?;
        let lo = cfg.u_left.min(cfg.u_right);
        let hi = cfg.u_left.max(cfg.u_right);
        Ok(Simulator {
            cfg,
            conv,
            band: (lo, hi),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// Largest stable step for the current state.
    pub fn stable_step(&self, values: &[f64]) -> f64 {
        let speed = values
            .iter()
            .chain([self.cfg.u_left, self.cfg.u_right].iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1e-9);
        (self.cfg.cfl * self.cfg.spacing() / speed).min(MAX_STEP)
    }

    /// Advances by `dt` in place.
    pub fn advance(&self, state: &mut SimState, dt: f64) -> Result<()> {
        let m = self.cfg.cells;
        let dx = self.cfg.spacing();
        let u = &state.values;
        let mut conv = vec![0.0; m];
        self.conv.apply(u, self.cfg.u_left, self.cfg.u_right, &mut conv);
        let at = |j: isize| -> f64 {
            if j < 0 {
                self.cfg.u_left
            } else if j as usize >= m {
                self.cfg.u_right
            } else {
                u[j as usize]
            }
        };
        let fluxes: Vec<f64> = (0..=m as isize).map(|j| rusanov(at(j - 1), at(j))).collect();
        let ratio = dt / dx;
        let next: Vec<f64> = (0..m)
            .map(|j| u[j] - ratio * (fluxes[j + 1] - fluxes[j]) + dt * (conv[j] - u[j]))
            .collect();
        if let Some(j) = next.iter().position(|v| !v.is_finite()) {
            return Err(Error::BlowUp {
                time: state.time + dt,
                detail: format!("non-finite value in cell {j}"),
            });
        }
        let (lo, hi) = self.band;
        if let Some(j) = next
            .iter()
            .position(|&v| v < lo - SANITY_BAND || v > hi + SANITY_BAND)
        {
            return Err(Error::BlowUp {
                time: state.time + dt,
                detail: format!("cell {j} left the range [{lo}, {hi}] by more than {SANITY_BAND}"),
            });
        }
        state.values = next;
        state.time += dt;
        Ok(())
    }

    fn widen_band(&mut self, values: &[f64]) {
        for &v in values {
            self.band.0 = self.band.0.min(v);
            self.band.1 = self.band.1.max(v);
        }
    }
}

/// One explicit step at the CFL-limited time step.
pub fn step(state: &SimState, kernel: &Kernel, cfg: &SimConfig) -> Result<SimState> {
    let mut sim = Simulator::new(kernel, *cfg)?;
    sim.widen_band(&state.values);
    let mut next = state.clone();
    let dt = sim.stable_step(&state.values);
    sim.advance(&mut next, dt)?;
    Ok(next)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub centers: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
}

impl Trajectory {
    pub fn spacing(&self) -> f64 {
        self.centers[1] - self.centers[0]
    }

    /// max_j |u_{j+1} − u_j| / Δx per snapshot
    pub fn max_slopes(&self) -> Vec<f64> {
        let dx = self.spacing();
        self.snapshots
            .iter()
            .map(|s| s.values.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max) / dx)
            .collect()
    }

    pub fn total_variations(&self) -> Vec<f64> {
        self.snapshots
            .iter()
            .map(|s| s.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum())
            .collect()
    }

    /// Largest max-slope over the run divided by the initial one.
    pub fn slope_growth(&self) -> f64 {
        let slopes = self.max_slopes();
        let peak = slopes.iter().copied().fold(0.0, f64::max);
        peak / slopes[0]
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory has snapshots")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "x", "u"])?;
        for s in &self.snapshots {
            let t = format!("{:e}", s.time);
            for (x, u) in self.centers.iter().zip(&s.values) {
                w.write_record([t.as_str(), &format!("{x:e}"), &format!("{u:e}")])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Steps to the end time, landing exactly on every snapshot time.
pub fn simulate(init: &SimState, kernel: &Kernel, cfg: &SimConfig) -> Result<Trajectory> {
    let mut sim = Simulator::new(kernel, *cfg)?;
    if init.values.len() != cfg.cells {
        return Err(Error::InvalidSimConfig(format!(
            "initial state has {} cells, config has {}",
            init.values.len(),
            cfg.cells
        )));
    }
    let first = init.values[0];
    let last = init.values[cfg.cells - 1];
    if (first - cfg.u_left).abs() > 1e-6 || (last - cfg.u_right).abs() > 1e-6 {
        return Err(Error::InvalidSimConfig(format!(
            "initial data ({first}, {last}) at the edges does not match far fields ({}, {})",
            cfg.u_left, cfg.u_right
        )));
    }
    sim.widen_band(&init.values);
    let mut state = init.clone();
    let mut snapshots = vec![Snapshot {
        time: state.time,
        values: state.values.clone(),
    }];
    let mut steps = 0;
    let mut k = 1usize;
    loop {
        let next_snap = (init.time + k as f64 * cfg.snapshot_interval).min(cfg.end_time);
        let remaining = next_snap - state.time;
        let mut dt = sim.stable_step(&state.values);
        let lands = dt >= remaining * (1.0 - 1e-12);
        if lands {
            dt = remaining;
        }
        sim.advance(&mut state, dt)?;
        steps += 1;
        if lands {
            state.time = next_snap;
            snapshots.push(Snapshot {
                time: state.time,
                values: state.values.clone(),
            });
            if next_snap >= cfg.end_time {
                break;
            }
            k += 1;
        }
    }
    Ok(Trajectory {
        centers: cfg.centers(),
        snapshots,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedFit {
    pub speed: f64,
    pub intercept: f64,
    /// root-mean-square deviation of the crossings from the fitted line
    pub residual_rms: f64,
    pub crossings: Vec<(f64, f64)>,
}

/// Position where the first snapshot sample pair brackets `level`.
fn crossing(centers: &[f64], values: &[f64], level: f64) -> Option<f64> {
    values.windows(2).enumerate().find_map(|(j, w)| {
        let (a, b) = (w[0] - level, w[1] - level);
        if a == 0.0 {
            Some(centers[j])
        } else if a * b < 0.0 || b == 0.0 {
            Some(centers[j] + a / (a - b) * (centers[j + 1] - centers[j]))
        } else {
            None
        }
    })
}

/// Least-squares slope of level-crossing position against time.
pub fn measure_speed(traj: &Trajectory, level: f64) -> Result<SpeedFit> {
    if traj.snapshots.len() < 5 {
        return Err(Error::Contract(format!(
            "need at least 5 snapshots, have {}",
            traj.snapshots.len()
        )));
    }
    let mut crossings = Vec::with_capacity(traj.snapshots.len());
    for s in &traj.snapshots {
        match crossing(&traj.centers, &s.values, level) {
            Some(x) => crossings.push((s.time, x)),
            None => return Err(Error::LevelNotCrossed { level, time: s.time }),
        }
    }
    let n = crossings.len() as f64;
    let tm = crossings.iter().map(|c| c.0).sum::<f64>() / n;
    let xm = crossings.iter().map(|c| c.1).sum::<f64>() / n;
    let stt: f64 = crossings.iter().map(|c| (c.0 - tm).powi(2)).sum();
    let stx: f64 = crossings.iter().map(|c| (c.0 - tm) * (c.1 - xm)).sum();
    let speed = stx / stt;
    let intercept = xm - speed * tm;
    let residual_rms = (crossings
        .iter()
        .map(|c| (c.1 - intercept - speed * c.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(SpeedFit {
        speed,
        intercept,
        residual_rms,
        crossings,
    })
}

/// Piecewise-linear interpolant of sorted samples, constant beyond the ends.
pub fn interpolate_sorted(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let j = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[j]) / (xs[j + 1] - xs[j]);
    ys[j] + t * (ys[j + 1] - ys[j])
}

/// ∫ |u(x, T) − U(x − sT)| dx over the window, U given by samples.
pub fn translate_error(traj: &Trajectory, profile_x: &[f64], profile_u: &[f64], speed: f64) -> f64 {
    let last = traj.last();
    let shift = speed * (last.time - traj.snapshots[0].time);
    traj.centers
        .iter()
        .zip(&last.values)
        .map(|(&x, &u)| (u - interpolate_sorted(profile_x, profile_u, x - shift)).abs())
        .sum::<f64>()
        * traj.spacing()
}
