//! Discrete convolution with a kernel on uniform grids.
//!
//! Samples are read as the piecewise-linear interpolant through the nodes,
//! extended by constants beyond the sampled segment. Each node then carries
//! the exact integral of the kernel against its hat function, so constants are
//! reproduced to rounding and nonnegative integrands give nonnegative sums.
//! Beyond the segment the constant far fields enter through the kernel CDF.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::quadrature;

/// Tail mass the kernel may carry beyond the grid extent.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Uniform sampling of the half-line (−L, 0]: nodes x_i = −L + i h, i = 0..=N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLineGrid {
    length: f64,
    cells: usize,
}

impl HalfLineGrid {
    pub fn new(length: f64, cells: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        if cells < 64 {
            return Err(Error::InvalidGrid(format!("need at least 64 cells, got {cells}")));
        }
        Ok(HalfLineGrid { length, cells })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.cells {
            0.0
        } else {
            -self.length + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.cells).map(|i| self.node(i)).collect()
    }
}

/// Samples of the positive wave component on (−L, 0]; the far-field value
/// holds for x ≤ −L.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLineField {
    grid: HalfLineGrid,
    values: Vec<f64>,
    far_field: f64,
}

impl HalfLineField {
    pub fn new(grid: HalfLineGrid, values: Vec<f64>, far_field: f64) -> Result<Self> {
        if values.len() != grid.cells() + 1 {
            return Err(Error::InvalidGrid(format!(
                "field has {} samples, grid has {} nodes",
                values.len(),
                grid.cells() + 1
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("field sample {i} is {}", values[i])));
        }
        if !far_field.is_finite() {
            return Err(Error::NonFinite("far-field value".into()));
        }
        Ok(HalfLineField {
            grid,
            values,
            far_field,
        })
    }

    pub fn constant(grid: HalfLineGrid, value: f64) -> Self {
        HalfLineField {
            grid,
            values: vec![value; grid.cells() + 1],
            far_field: value,
        }
    }

    pub fn grid(&self) -> &HalfLineGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn far_field(&self) -> f64 {
        self.far_field
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Admissible iterates are positive left of the origin, nonnegative at it,
    /// bounded by the far field and nonincreasing.
    pub fn check_admissible(&self, tol: f64) -> Result<()> {
        let n = self.values.len() - 1;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.far_field + tol {
                return Err(Error::NotAdmissible(format!(
                    "sample {i} = {v} exceeds the far field {}",
                    self.far_field
                )));
            }
            if v < 0.0 || (v == 0.0 && i < n) {
                return Err(Error::NotAdmissible(format!("sample {i} = {v} is not positive")));
            }
        }
        if let Some(i) = self.values.windows(2).position(|w| w[1] > w[0] + tol) {
            return Err(Error::NotAdmissible(format!(
                "field increases between samples {i} and {}",
                i + 1
            )));
        }
        Ok(())
    }

    /// Piecewise-linear value, with the far field left of −L.
    pub fn interpolate(&self, x: f64) -> f64 {
        let h = self.grid.spacing();
        let pos = (x + self.grid.length()) / h;
        if pos <= 0.0 {
            return if pos == 0.0 { self.values[0] } else { self.far_field };
        }
        let n = self.grid.cells();
        if pos >= n as f64 {
            return self.values[n];
        }
        let j = (pos.floor() as usize).min(n - 1);
        let t = pos - j as f64;
        self.values[j] + t * (self.values[j + 1] - self.values[j])
    }
}

/// How Toeplitz sums are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// O(n²) reference summation.
    Direct,
    /// Zero-padded FFT products, O(n log n).
    Fft,
}

/// Right half-hat integrals R(d) = ∫_0^h K(d h + s)(1 − s/h) ds for |d| ≤ reach.
#[derive(Clone, Debug)]
struct HatTable {
    reach: i64,
    right: Vec<f64>,
}

impl HatTable {
    fn new(kernel: &Kernel, h: f64, reach: i64) -> Self {
        let right = (-reach..=reach)
            .map(|d| {
                let lo = d as f64 * h;
                let hi = lo + h;
                let f = |y: f64| kernel.density(y) * (1.0 - (y - lo) / h);
                let mut breaks = vec![lo];
                breaks.extend(kernel.breaks_in(lo, hi));
                breaks.push(hi);
                quadrature::composite(&f, &breaks, 0)
            })
            .collect();
        HatTable { reach, right }
    }

    #[inline]
    fn right(&self, d: i64) -> f64 {
        let idx = d + self.reach;
        if idx < 0 || idx as usize >= self.right.len() {
            0.0
        } else {
            self.right[idx as usize]
        }
    }

    /// Full-hat integral.
    #[inline]
    fn full(&self, d: i64) -> f64 {
        self.right(d) + self.right(-d)
    }
}

/// Evaluates r_i = ∫ K(t_i − y) v(y) dy over one sampled segment, where v is
/// the piecewise-linear interpolant of `n + 1` nodes z_j = z_0 + j h and the
/// targets are t_i = z_0 + (i + shift) h, i = 0..targets.
struct SegmentSum {
    sources: usize,
    targets: usize,
    shift: i64,
    method: Method,
    fft: Option<SpectralProduct>,
}

struct SpectralProduct {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    spectrum: Vec<Complex<f64>>,
}

impl SegmentSum {
    fn new(
        table: &HatTable,
        planner: &mut FftPlanner<f64>,
        sources: usize,
        targets: usize,
        shift: i64,
        method: Method,
    ) -> Self {
        let fft = (method == Method::Fft).then(|| {
            // offsets d = i + shift − j run over [shift − (sources−1), targets − 1 + shift]
            let d_min = shift - (sources as i64 - 1);
            let len = sources + targets - 1;
            let size = (sources + len - 1).next_power_of_two();
            let forward = planner.plan_fft_forward(size);
            let inverse = planner.plan_fft_inverse(size);
            let mut spectrum = vec![Complex::new(0.0, 0.0); size];
            for (k, slot) in spectrum.iter_mut().take(len).enumerate() {
                *slot = Complex::new(table.full(d_min + k as i64), 0.0);
            }
            forward.process(&mut spectrum);
            SpectralProduct {
                size,
                forward,
                inverse,
                spectrum,
            }
        });
        SegmentSum {
            sources,
            targets,
            shift,
            method,
            fft,
        }
    }

    fn apply(&self, table: &HatTable, values: &[f64], out: &mut [f64]) {
        debug_assert_eq!(values.len(), self.sources);
        debug_assert_eq!(out.len(), self.targets);
        let n = self.sources - 1;
        match (self.method, &self.fft) {
            (Method::Fft, Some(spec)) => {
                let mut buf = vec![Complex::new(0.0, 0.0); spec.size];
                for (slot, &v) in buf.iter_mut().zip(values) {
                    *slot = Complex::new(v, 0.0);
                }
                spec.forward.process(&mut buf);
                for (b, s) in buf.iter_mut().zip(&spec.spectrum) {
                    *b *= *s;
                }
                spec.inverse.process(&mut buf);
                let scale = 1.0 / spec.size as f64;
                for (i, o) in out.iter_mut().enumerate() {
                    *o = buf[i + n].re * scale;
                }
            }
            _ => {
                for (i, o) in out.iter_mut().enumerate() {
                    let base = i as i64 + self.shift;
                    *o = values
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| v * table.full(base - j as i64))
                        .sum();
                }
            }
        }
        // end nodes carry half hats only
        let (first, last) = (values[0], values[n]);
        for (i, o) in out.iter_mut().enumerate() {
            let d0 = i as i64 + self.shift;
            let dn = d0 - n as i64;
            *o -= first * table.right(d0) + last * table.right(-dn);
        }
    }
}

/// Reusable odd-reflection convolution on a half-line grid:
/// (K*u)(x) = ∫_{−∞}^0 [K(x − y) − K(x + y)] u(y) dy for odd u.
pub struct OddConvolver {
    grid: HalfLineGrid,
    kernel: Kernel,
    table: HatTable,
    direct: SegmentSum,
    reflected: SegmentSum,
}

impl OddConvolver {
    pub fn new(kernel: &Kernel, grid: HalfLineGrid) -> Result<Self> {
        Self::with_method(kernel, grid, default_method(grid.cells()))
    }

    pub fn with_method(kernel: &Kernel, grid: HalfLineGrid, method: Method) -> Result<Self> {
        check_tail(kernel, grid.length())?;
        let n = grid.cells();
        let table = HatTable::new(kernel, grid.spacing(), 2 * n as i64 + 2);
        let mut planner = FftPlanner::new();
        let direct = SegmentSum::new(&table, &mut planner, n + 1, n + 1, 0, method);
        let reflected = SegmentSum::new(&table, &mut planner, n + 1, n + 1, -(n as i64), method);
        Ok(OddConvolver {
            grid,
            kernel: kernel.clone(),
            table,
            direct,
            reflected,
        })
    }

    pub fn grid(&self) -> &HalfLineGrid {
        &self.grid
    }

    /// Convolution samples at every node; the origin is exactly zero.
    pub fn apply(&self, field: &HalfLineField) -> Result<Vec<f64>> {
        if field.grid() != &self.grid {
            return Err(Error::InvalidGrid("field grid differs from convolver grid".into()));
        }
        let n = self.grid.cells();
        let values = field.values();
        let mut out = vec![0.0; n + 1];
        self.direct.apply(&self.table, values, &mut out);
        let mirrored: Vec<f64> = values.iter().rev().copied().collect();
        let mut reflected = vec![0.0; n + 1];
        self.reflected.apply(&self.table, &mirrored, &mut reflected);
        let length = self.grid.length();
        let far = field.far_field();
        for (i, (o, r)) in out.iter_mut().zip(&reflected).enumerate() {
            let x = self.grid.node(i);
            let tail = far * (1.0 - self.kernel.cdf(x + length) - self.kernel.cdf(x - length));
            *o = *o - r + tail;
        }
        out[n] = 0.0;
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("convolution at node {i}")));
        }
        Ok(out)
    }
}

fn default_method(cells: usize) -> Method {
    if cells >= 256 {
        Method::Fft
    } else {
        Method::Direct
    }
}

fn check_tail(kernel: &Kernel, radius: f64) -> Result<()> {
    let tail_mass = kernel.tail_mass(radius);
    if tail_mass > TAIL_LIMIT {
        return Err(Error::KernelTailTooHeavy {
            tail_mass,
            radius,
            limit: TAIL_LIMIT,
        });
    }
    Ok(())
}

/// One-shot odd convolution of an admissible field.
pub fn odd_convolve(kernel: &Kernel, field: &HalfLineField) -> Result<HalfLineField> {
    field.check_admissible(1e-12)?;
    let conv = OddConvolver::new(kernel, *field.grid())?;
    let values = conv.apply(field)?;
    HalfLineField::new(*field.grid(), values, field.far_field())
}

/// Reusable full-line convolution for cell-centred samples on [a, b] with
/// constant far fields. Ghost nodes half a cell outside the interval carry the
/// far-field values, so every row of weights sums to one.
pub struct FullLineConvolver {
    start: f64,
    end: f64,
    cells: usize,
    kernel: Kernel,
    table: HatTable,
    sum: SegmentSum,
}

impl FullLineConvolver {
    pub fn new(kernel: &Kernel, start: f64, end: f64, cells: usize) -> Result<Self> {
        Self::with_method(kernel, start, end, cells, default_method(cells))
    }

    pub fn with_method(
        kernel: &Kernel,
        start: f64,
        end: f64,
        cells: usize,
        method: Method,
    ) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && end > start) || cells < 2 {
            return Err(Error::InvalidGrid(format!(
                "need a < b and at least 2 cells, got [{start}, {end}] with {cells}"
            )));
        }
        let radius = kernel.tail_radius(TAIL_LIMIT);
        if end - start < 2.0 * radius {
            return Err(Error::KernelTailTooHeavy {
                tail_mass: kernel.tail_mass(0.5 * (end - start)),
                radius: 0.5 * (end - start),
                limit: TAIL_LIMIT,
            });
        }
        let dx = (end - start) / cells as f64;
        let table = HatTable::new(kernel, dx, cells as i64 + 3);
        let mut planner = FftPlanner::new();
        let sum = SegmentSum::new(&table, &mut planner, cells + 2, cells, 1, method);
        Ok(FullLineConvolver {
            start,
            end,
            cells,
            kernel: kernel.clone(),
            table,
            sum,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / self.cells as f64
    }

    pub fn center(&self, j: usize) -> f64 {
        self.start + (j as f64 + 0.5) * self.spacing()
    }

    pub fn apply(&self, values: &[f64], left: f64, right: f64, out: &mut [f64]) {
        assert_eq!(values.len(), self.cells);
        assert_eq!(out.len(), self.cells);
        let mut extended = Vec::with_capacity(self.cells + 2);
        extended.push(left);
        extended.extend_from_slice(values);
        extended.push(right);
        self.sum.apply(&self.table, &extended, out);
        let dx = self.spacing();
        let lo = self.start - 0.5 * dx;
        let hi = self.end + 0.5 * dx;
        for (j, o) in out.iter_mut().enumerate() {
            let x = self.center(j);
            *o += left * (1.0 - self.kernel.cdf(x - lo)) + right * self.kernel.cdf(x - hi);
        }
    }
}

/// One-shot full-line convolution of cell-centred samples on [a, b].
pub fn full_line_convolve(
    kernel: &Kernel,
    start: f64,
    end: f64,
    values: &[f64],
    left: f64,
    right: f64,
) -> Result<Vec<f64>> {
    let conv = FullLineConvolver::new(kernel, start, end, values.len())?;
    let mut out = vec![0.0; values.len()];
    conv.apply(values, left, right, &mut out);
    Ok(out)
}

/// Independent oracle: integrates [K(x − y) − K(x + y)] u(y) over y ≤ 0 by
/// repeated halving of every smooth piece until successive levels agree to 1e−11.
pub fn brute_force_convolve(kernel: &Kernel, field: &HalfLineField, x: f64) -> Result<f64> {
    let grid = field.grid();
    let length = grid.length();
    let reach = kernel
        .support_radius()
        .unwrap_or_else(|| kernel.tail_radius(1e-16));
    let lower = -length - reach - x.abs();
    let mut breaks: Vec<f64> = vec![lower];
    breaks.extend(grid.nodes());
    for b in kernel.breaks_in(f64::NEG_INFINITY, f64::INFINITY) {
        breaks.push(x - b);
        breaks.push(b - x);
    }
    if let Some(r) = kernel.support_radius() {
        breaks.extend([x - r, x + r, -r - x, r - x]);
    }
    breaks.retain(|&y| y >= lower && y <= 0.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * length);
    let f = |y: f64| (kernel.density(x - y) - kernel.density(x + y)) * field.interpolate(y);
    quadrature::refine_until(&f, &breaks, 1e-11, 24)
}
