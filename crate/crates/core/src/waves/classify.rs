use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::solve::{default_length, solve_wave, SolveOptions, WaveProfile};
use super::WaveParams;
use crate::error::Result;
use crate::kernels::Kernel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShockClass {
    Continuous,
    Discontinuous,
    Indeterminate,
}

impl ShockClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ShockClass::Continuous => "continuous",
            ShockClass::Discontinuous => "discontinuous",
            ShockClass::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyOptions {
    pub length: Option<f64>,
    /// Coarsest grid N; the test also solves on 2N and 4N.
    pub base_cells: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            length: None,
            base_cells: 1024,
            tol: 1e-8,
            max_iter: 5000,
        }
    }
}

/// Jumps at or below this size are read as zero: the iteration stops once
/// successive iterates differ by `tol`, so smaller values are not resolved.
pub fn jump_floor(tol: f64) -> f64 {
    (100.0 * tol).max(1e-10)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShockClassification {
    pub predicted_by_theorem: bool,
    /// 4·M1, the amplitude above which a jump is guaranteed.
    pub threshold: f64,
    pub measured: ShockClass,
    pub cells: [usize; 3],
    pub length: f64,
    pub jumps: [f64; 3],
    /// J(2N)/J(N) and J(4N)/J(2N); `None` when only the denominator vanishes.
    pub ratios: [Option<f64>; 2],
    pub iterations: [usize; 3],
    pub converged: bool,
}

impl ShockClassification {
    /// A guaranteed jump must never be measured as continuous.
    pub fn consistent(&self) -> bool {
        !(self.predicted_by_theorem && self.measured == ShockClass::Continuous)
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    match (num == 0.0, den == 0.0) {
        (true, _) => Some(0.0),
        (false, true) => None,
        _ => Some(num / den),
    }
}

/// Refinement test on J = 2u(0⁻) over N, 2N, 4N at fixed L. The jump of a
/// continuous wave shrinks with h; a true jump settles at a grid-independent
/// size.
pub fn measure(jumps: [f64; 3], finest_spacing: f64, floor: f64) -> (ShockClass, [Option<f64>; 2]) {
    let j = jumps.map(|v| if v <= floor { 0.0 } else { v });
    let ratios = [ratio(j[1], j[0]), ratio(j[2], j[1])];
    let all = |pred: &dyn Fn(f64) -> bool| ratios.iter().all(|r| r.is_some_and(pred));
    let class = if all(&|r| r <= 0.6) {
        ShockClass::Continuous
    } else if all(&|r| r >= 0.9) && j[2] > finest_spacing {
        ShockClass::Discontinuous
    } else {
        ShockClass::Indeterminate
    };
    (class, ratios)
}

/// Solves on the three grids concurrently and classifies the jump.
pub fn classify_shock(
    kernel: &Kernel,
    params: &WaveParams,
    opts: &ClassifyOptions,
) -> Result<(ShockClassification, Vec<WaveProfile>)> {
    let length = opts.length.unwrap_or_else(|| default_length(kernel, params));
    let cells = [opts.base_cells, 2 * opts.base_cells, 4 * opts.base_cells];
    let solved: Vec<Result<WaveProfile>> = cells
        .par_iter()
        .map(|&n| {
            let o = SolveOptions {
                length: Some(length),
                cells: n,
                tol: opts.tol,
                max_iter: opts.max_iter,
            };
            solve_wave(kernel, params, &o).map(|(p, _)| p)
        })
        .collect();
    let profiles = solved.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((classify_profiles(kernel, params, &profiles, opts.tol), profiles))
}

/// Classification from already solved profiles on N, 2N, 4N.
pub fn classify_profiles(
    kernel: &Kernel,
    params: &WaveParams,
    profiles: &[WaveProfile],
    tol: f64,
) -> ShockClassification {
    let threshold = 4.0 * kernel.moments().m1;
    let jumps = [profiles[0].jump(), profiles[1].jump(), profiles[2].jump()];
    let converged = profiles.iter().all(|p| p.converged());
    let finest = profiles[2].grid().spacing();
    let (mut measured, ratios) = measure(jumps, finest, jump_floor(tol));
    if !converged {
        measured = ShockClass::Indeterminate;
    }
    ShockClassification {
        predicted_by_theorem: params.amplitude() > threshold,
        threshold,
        measured,
        cells: [
            profiles[0].grid().cells(),
            profiles[1].grid().cells(),
            profiles[2].grid().cells(),
        ],
        length: profiles[0].grid().length(),
        jumps,
        ratios,
        iterations: [profiles[0].iterations, profiles[1].iterations, profiles[2].iterations],
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_rules() {
        let floor = 1e-6;
        let (c, r) = measure([1e-2, 4e-3, 1e-3], 0.01, floor);
        assert_eq!(c, ShockClass::Continuous);
        assert!((r[0].unwrap() - 0.4).abs() < 1e-12);
        let (c, _) = measure([0.0, 0.0, 0.0], 0.01, floor);
        assert_eq!(c, ShockClass::Continuous);
        let (c, _) = measure([3.01, 3.015, 3.017], 0.01, floor);
        assert_eq!(c, ShockClass::Discontinuous);
        // a steady jump smaller than the finest cell is not trusted
        let (c, _) = measure([0.005, 0.005, 0.005], 0.01, floor);
        assert_eq!(c, ShockClass::Indeterminate);
        // a jump appearing only under refinement has no ratio
        let (c, r) = measure([1e-9, 0.016, 0.018], 0.01, floor);
        assert_eq!(r[0], None);
        assert_eq!(c, ShockClass::Indeterminate);
        let (c, _) = measure([0.1, 0.08, 0.07], 0.01, floor);
        assert_eq!(c, ShockClass::Indeterminate);
    }

    #[test]
    fn theorem_prediction_uses_four_first_moments() {
        let k = Kernel::exponential(1.0).unwrap();
        let p = WaveParams::centered(2.5).unwrap();
        let (c, profiles) = classify_shock(
            &k,
            &p,
            &ClassifyOptions {
                base_cells: 256,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(c.predicted_by_theorem);
        assert_eq!(c.threshold, 4.0);
        assert_eq!(c.measured, ShockClass::Discontinuous);
        assert!(c.consistent());
        assert_eq!(profiles.len(), 3);
        assert_eq!(c.cells, [256, 512, 1024]);
    }
}
