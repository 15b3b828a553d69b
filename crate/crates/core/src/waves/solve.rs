use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scheme::{subsolution, supersolution, MonotoneScheme, SubsolutionSpec};
use super::WaveParams;
use crate::convolve::{HalfLineField, HalfLineGrid};
use crate::error::{Error, Result};
use crate::kernels::{validate_kernel, Kernel};

const INVARIANT_SLACK: f64 = 1e-10;
const GRID_TAIL_LIMIT: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    /// Truncation length; `None` picks [`default_length`].
    pub length: Option<f64>,
    pub cells: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            length: None,
            cells: 4096,
            tol: 1e-8,
            max_iter: 5000,
        }
    }
}

/// max(25·max(1, √M2, u_c), 2·r) where the kernel carries at most 1e−10 of
/// its mass beyond r, so the tail beyond L/2 stays below that bound.
pub fn default_length(kernel: &Kernel, params: &WaveParams) -> f64 {
    let scale = 1f64
        .max(kernel.moments().m2.sqrt())
        .max(params.half_amplitude());
    (25.0 * scale).max(2.0 * kernel.tail_radius(GRID_TAIL_LIMIT))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterations,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub n: usize,
    pub sup_diff: f64,
    pub origin_value: f64,
    pub monotonicity_violations: usize,
    pub ordering_violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn total_violations(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.monotonicity_violations + r.ordering_violations)
            .sum()
    }

    /// Number of iterations after the first whose sup-difference grew by more than `slack`.
    pub fn sup_diff_increases(&self, slack: f64) -> usize {
        self.records
            .windows(2)
            .skip(1)
            .filter(|w| w[1].sup_diff > w[0].sup_diff + slack)
            .count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "sup_diff", "u_origin", "monotonicity_violations", "ordering_violations"])?;
        for r in &self.records {
            w.write_record([
                r.n.to_string(),
                format!("{:e}", r.sup_diff),
                format!("{:e}", r.origin_value),
                r.monotonicity_violations.to_string(),
                r.ordering_violations.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Converged (or best available) half-line component with its metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveProfile {
    params: WaveParams,
    kernel_label: String,
    field: HalfLineField,
    subsolution: SubsolutionSpec,
    pub iterations: usize,
    pub final_sup_diff: f64,
    pub status: SolveStatus,
}

impl WaveProfile {
    pub fn params(&self) -> &WaveParams {
        &self.params
    }

    pub fn kernel_label(&self) -> &str {
        &self.kernel_label
    }

    pub fn grid(&self) -> &HalfLineGrid {
        self.field.grid()
    }

    pub fn field(&self) -> &HalfLineField {
        &self.field
    }

    /// u on (−L, 0].
    pub fn half_line(&self) -> &[f64] {
        self.field.values()
    }

    pub fn subsolution(&self) -> &SubsolutionSpec {
        &self.subsolution
    }

    /// J = 2u(0⁻).
    pub fn jump(&self) -> f64 {
        2.0 * self.half_line()[self.grid().cells()]
    }

    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// Full-line nodes x_k = −L + k h, k = 0..=2N.
    pub fn full_nodes(&self) -> Vec<f64> {
        let grid = self.grid();
        let n = grid.cells();
        (0..=2 * n)
            .map(|k| if k <= n { grid.node(k) } else { -grid.node(2 * n - k) })
            .collect()
    }

    /// U = s + u on the left, s at the origin, s − u(−x) on the right.
    pub fn full_line(&self) -> Vec<f64> {
        let s = self.params.speed();
        let u = self.half_line();
        let n = self.grid().cells();
        (0..=2 * n)
            .map(|k| match k.cmp(&n) {
                std::cmp::Ordering::Less => s + u[k],
                std::cmp::Ordering::Equal => s,
                std::cmp::Ordering::Greater => s - u[2 * n - k],
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "U"])?;
        for (x, u) in self.full_nodes().iter().zip(self.full_line()) {
            w.write_record([format!("{x:e}"), format!("{u:e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a profile CSV back as (x, U) columns.
    pub fn read_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut r = csv::Reader::from_path(path)?;
        let headers = r.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "U" {
            return Err(Error::Config(format!("{}: expected header x,U", path.display())));
        }
        let mut xs = Vec::new();
        let mut us = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("{}: bad number {s:?}", path.display())))
            };
            xs.push(parse(&rec[0])?);
            us.push(parse(&rec[1])?);
        }
        Ok((xs, us))
    }
}

fn count_violations(prev: &[f64], next: &[f64], sub: &[f64], uc: f64) -> (usize, usize) {
    let n = next.len() - 1;
    let mut mono = 0;
    let mut order = 0;
    for i in 0..=n {
        if next[i] > prev[i] + INVARIANT_SLACK {
            mono += 1;
        }
        if i < n && next[i + 1] > next[i] + INVARIANT_SLACK {
            mono += 1;
        }
        if next[i] < sub[i] - INVARIANT_SLACK || next[i] > uc + INVARIANT_SLACK {
            order += 1;
        }
        if next[i] < 0.0 || (i < n && next[i] <= 0.0) {
            order += 1;
        }
    }
    (mono, order)
}

/// Runs the descending iteration from the step until successive iterates
/// agree to `tol` in the sup norm. Every step is checked against the
/// monotonicity, ordering and positivity invariants.
pub fn solve_wave(
    kernel: &Kernel,
    params: &WaveParams,
    opts: &SolveOptions,
) -> Result<(WaveProfile, IterationTrace)> {
    let report = validate_kernel(kernel, 256);
    if !report.all_passed() {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Error::InvalidKernel(format!("failed checks: {}", failed.join(", "))));
    }
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::Config("tol must be positive and max_iter at least 1".into()));
    }
    let length = opts.length.unwrap_or_else(|| default_length(kernel, params));
    let tail_mass = kernel.tail_mass(0.5 * length);
    if tail_mass > GRID_TAIL_LIMIT {
        return Err(Error::KernelTailTooHeavy {
            tail_mass,
            radius: 0.5 * length,
            limit: GRID_TAIL_LIMIT,
        });
    }
    let grid = HalfLineGrid::new(length, opts.cells)?;
    let uc = params.half_amplitude();
    let sub = subsolution(params, kernel, &grid)?;
    let sub_samples = sub.sample(&grid);
    let scheme = MonotoneScheme::new(kernel, *params, grid)?;

    let mut current = supersolution(params, grid);
    let mut trace = IterationTrace::default();
    let mut status = SolveStatus::MaxIterations;
    let mut sup_diff = f64::INFINITY;
    for n in 1..=opts.max_iter {
        let next = scheme.step(&current)?;
        let (mono, order) = count_violations(current.values(), next.values(), &sub_samples, uc);
        sup_diff = current
            .values()
            .iter()
            .zip(next.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        trace.records.push(IterationRecord {
            n,
            sup_diff,
            origin_value: next.values()[grid.cells()],
            monotonicity_violations: mono,
            ordering_violations: order,
        });
        if mono + order > 0 {
            return Err(Error::InvariantViolation {
                iteration: n,
                detail: format!("{mono} monotonicity and {order} ordering violations"),
            });
        }
        current = next;
        if sup_diff <= opts.tol {
            status = SolveStatus::Converged;
            break;
        }
    }
    let profile = WaveProfile {
        params: *params,
        kernel_label: kernel.label(),
        field: current,
        subsolution: sub,
        iterations: trace.records.len(),
        final_sup_diff: sup_diff,
        status,
    };
    Ok((profile, trace))
}
