//! Super- and subsolutions and one step of the descending iteration
//! u_{n+1} + u_n u_{n+1}' = K*u_n with u_{n+1}(−∞) = u_c.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::WaveParams;
use crate::convolve::{HalfLineField, HalfLineGrid, OddConvolver};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::quadrature;

/// Smallest value an iterate may take left of the origin.
pub const FLOOR: f64 = 1e-12;

const MAX_HALVINGS: usize = 40;
const MIN_PROBES: usize = 512;

/// The step u_0 ≡ u_c on the half-line.
pub fn supersolution(params: &WaveParams, grid: HalfLineGrid) -> HalfLineField {
    HalfLineField::constant(grid, params.half_amplitude())
}

/// s_sub(x) = −(2u_c/π) atan(εx) together with the ε search record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsolutionSpec {
    pub epsilon: f64,
    pub half_amplitude: f64,
    /// Largest g(x, ε) over the probes, including the limit at 0.
    pub sup_g: f64,
    pub halvings: usize,
    pub probes: usize,
}

impl SubsolutionSpec {
    pub fn value(&self, x: f64) -> f64 {
        -(2.0 * self.half_amplitude / PI) * (self.epsilon * x).atan()
    }

    pub fn sample(&self, grid: &HalfLineGrid) -> Vec<f64> {
        (0..=grid.cells()).map(|i| self.value(grid.node(i))).collect()
    }
}

/// Ratio of the convolution increment of s_sub to its derivative term; the
/// subsolution inequality holds where this is at most one.
fn g_ratio(kernel: &Kernel, breaks: &[f64], uc: f64, eps: f64, x: f64) -> f64 {
    if x == 0.0 {
        let f = |y: f64| y * y * kernel.density(y) / (1.0 + eps * eps * y * y);
        return PI * eps / (2.0 * uc) * quadrature::adaptive_pieces(&f, breaks, 1e-14);
    }
    let ex = (eps * x).atan();
    // symmetric pairing keeps the O(x) numerator free of cancellation
    let pos: Vec<f64> = breaks.iter().copied().filter(|&y| y > 0.0).collect();
    let mut half = vec![0.0];
    half.extend(pos);
    let f = |y: f64| {
        kernel.density(y) * ((eps * (x - y)).atan() + (eps * (x + y)).atan() - 2.0 * ex)
    };
    let numerator = -quadrature::adaptive_pieces(&f, &half, 1e-15);
    let denominator = (2.0 * uc / PI) * ex * eps / (1.0 + eps * eps * x * x);
    numerator / denominator
}

/// Finds ε by halving from u_c/(π M2) until g(x, ε) ≤ 1 on at least 512
/// probes of [−L, 0) and at the origin.
pub fn subsolution(params: &WaveParams, kernel: &Kernel, grid: &HalfLineGrid) -> Result<SubsolutionSpec> {
    let uc = params.half_amplitude();
    let m2 = kernel.moments().m2;
    if !(m2.is_finite() && m2 > 0.0) {
        return Err(Error::DivergentMoment(format!("second moment {m2}")));
    }
    let breaks = kernel.support_breaks(1e-16);
    let probes = MIN_PROBES.max(grid.cells().min(2048));
    let length = grid.length();
    let xs: Vec<f64> = (0..probes)
        .map(|k| -length + length * k as f64 / probes as f64)
        .chain(std::iter::once(0.0))
        .collect();
    let mut eps = uc / (PI * m2);
    let mut sup_g = f64::INFINITY;
    for halvings in 0..=MAX_HALVINGS {
        sup_g = xs
            .iter()
            .map(|&x| g_ratio(kernel, &breaks, uc, eps, x))
            .fold(f64::NEG_INFINITY, f64::max);
        if sup_g <= 1.0 {
            return Ok(SubsolutionSpec {
                epsilon: eps,
                half_amplitude: uc,
                sup_g,
                halvings,
                probes: xs.len(),
            });
        }
        eps *= 0.5;
    }
    Err(Error::SubsolutionUnderflow {
        halvings: MAX_HALVINGS,
        sup_g,
    })
}

/// ∫ dx/u across a cell of width h on which u is linear from `left` to `right`.
fn cell_decay(h: f64, left: f64, right: f64) -> f64 {
    if right <= 0.0 {
        return f64::INFINITY;
    }
    let r = left / right;
    if (r - 1.0).abs() < 1e-4 {
        // ln(1 + d)/d with d = r − 1
        let d = r - 1.0;
        h / right * (1.0 - d * (0.5 - d * (1.0 / 3.0 - 0.25 * d)))
    } else {
        h * r.ln() / (left - right)
    }
}

/// Weights of the exponential integrator over one cell with decay λ:
/// y_{i+1} = e^{−λ} y_i + w_cur g_i + w_next g_{i+1}, with g linear in the cell.
fn cell_weights(lambda: f64) -> (f64, f64, f64) {
    if lambda.is_infinite() {
        return (0.0, 0.0, 1.0);
    }
    let e = (-lambda).exp();
    if lambda < 1e-3 {
        let l2 = lambda * lambda;
        let cur = lambda * (0.5 - lambda / 3.0 + l2 / 8.0 - l2 * lambda / 30.0);
        let next = lambda * (0.5 - lambda / 6.0 + l2 / 24.0 - l2 * lambda / 120.0);
        return (e, cur, next);
    }
    let cur = (1.0 - e - lambda * e) / lambda;
    (e, cur, 1.0 - e - cur)
}

/// Reusable stepping machinery for one grid, kernel and far field.
pub struct MonotoneScheme {
    params: WaveParams,
    convolver: OddConvolver,
}

impl MonotoneScheme {
    pub fn new(kernel: &Kernel, params: WaveParams, grid: HalfLineGrid) -> Result<Self> {
        Ok(MonotoneScheme {
            params,
            convolver: OddConvolver::new(kernel, grid)?,
        })
    }

    pub fn grid(&self) -> &HalfLineGrid {
        self.convolver.grid()
    }

    pub fn params(&self) -> &WaveParams {
        &self.params
    }

    /// K*u samples for a field on this grid.
    pub fn convolve(&self, field: &HalfLineField) -> Result<Vec<f64>> {
        self.convolver.apply(field)
    }

    /// Solves u_{n+1} + u_n u_{n+1}' = K*u_n from u_{n+1}(−L) = u_c.
    ///
    /// In the variable τ = ∫ dx/u_n the equation reads dy/dτ = K*u_n − y, so
    /// each cell is integrated exactly against the linear interpolant of
    /// K*u_n in τ. Every update is a convex combination of the previous value
    /// and the two convolution samples.
    pub fn step(&self, current: &HalfLineField) -> Result<HalfLineField> {
        let grid = *self.grid();
        let n = grid.cells();
        let uc = self.params.half_amplitude();
        let a = current.values();
        if let Some(i) = a[..n].iter().position(|&v| !(v >= FLOOR)) {
            return Err(Error::FloorBreach {
                x: grid.node(i),
                value: a[i],
                floor: FLOOR,
                length: grid.length(),
                cells: n,
            });
        }
        if !(a[n] >= 0.0) {
            return Err(Error::FloorBreach {
                x: 0.0,
                value: a[n],
                floor: 0.0,
                length: grid.length(),
                cells: n,
            });
        }
        let g = self.convolver.apply(current)?;
        let h = grid.spacing();
        let mut next = Vec::with_capacity(n + 1);
        next.push(uc);
        let mut y = uc;
        for i in 0..n {
            let lambda = cell_decay(h, a[i], a[i + 1]);
            let (e, cur, nxt) = cell_weights(lambda);
            y = e * y + cur * g[i] + nxt * g[i + 1];
            if !y.is_finite() {
                return Err(Error::NonFinite(format!("iterate at node {}", i + 1)));
            }
            next.push(y);
        }
        HalfLineField::new(grid, next, uc)
    }
}

/// One iteration from an admissible iterate, building the convolution afresh.
pub fn iterate_once(kernel: &Kernel, current: &HalfLineField, params: &WaveParams) -> Result<HalfLineField> {
    current.check_admissible(1e-12)?;
    if (current.far_field() - params.half_amplitude()).abs() > 1e-12 {
        return Err(Error::NotAdmissible(format!(
            "far field {} differs from u_c = {}",
            current.far_field(),
            params.half_amplitude()
        )));
    }
    MonotoneScheme::new(kernel, *params, *current.grid())?.step(current)
}
