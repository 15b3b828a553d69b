//! Checks of a computed profile against the fixed-point equation, its weak
//! form and the integral identities it implies.

use serde::{Deserialize, Serialize};

use super::classify::ShockClass;
use super::solve::WaveProfile;
use crate::convolve::OddConvolver;
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::quadrature;

const COLLAR: usize = 5;

fn convolution(profile: &WaveProfile, kernel: &Kernel) -> Result<Vec<f64>> {
    OddConvolver::new(kernel, *profile.grid())?.apply(profile.field())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseResidual {
    /// max |u u' − (K*u − u)| away from the origin
    pub sup: f64,
    pub spacing: f64,
    pub slope_min: f64,
    pub slope_max: f64,
    /// Nodes left out because their stencil crosses a kink from a density jump.
    pub skipped: usize,
}

/// Residual of u u' = K*u − u with centred differences, one-sided at −L,
/// skipping the five nodes nearest the origin.
pub fn pointwise_residual(profile: &WaveProfile, kernel: &Kernel) -> Result<PointwiseResidual> {
    let g = convolution(profile, kernel)?;
    let u = profile.half_line();
    let n = profile.grid().cells();
    let h = profile.grid().spacing();
    let slope = |i: usize| {
        if i == 0 {
            (u[1] - u[0]) / h
        } else {
            (u[i + 1] - u[i - 1]) / (2.0 * h)
        }
    };
    // a density jump at ±a puts a kink in u at −a; differences across it are not consistent
    let kinks: Vec<f64> = kernel.density_jumps().iter().map(|a| -a).collect();
    let grid = profile.grid();
    let straddles = |i: usize| {
        let lo = grid.node(i.saturating_sub(1));
        let hi = grid.node(i + 1);
        kinks.iter().any(|&k| k > lo && k < hi)
    };
    let mut sup: f64 = 0.0;
    let mut skipped = 0;
    for i in 0..=n - COLLAR {
        if straddles(i) {
            skipped += 1;
            continue;
        }
        sup = sup.max((u[i] * slope(i) - (g[i] - u[i])).abs());
    }
    let (mut slope_min, mut slope_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 1..n {
        let d = slope(i);
        slope_min = slope_min.min(d);
        slope_max = slope_max.max(d);
    }
    Ok(PointwiseResidual {
        sup,
        spacing: h,
        slope_min,
        slope_max,
        skipped,
    })
}

/// Normalized bump e^{−1/(1−r²)}, r = (x − center)/width, with unit integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

fn bump_mass() -> f64 {
    let f = |r: f64| if r.abs() < 1.0 { (-1.0 / (1.0 - r * r)).exp() } else { 0.0 };
    quadrature::adaptive(&f, -1.0, 1.0, 1e-15, 40)
}

impl Bump {
    pub fn new(center: f64, width: f64) -> Self {
        Bump { center, width }
    }

    /// Three bumps, the middle one straddling the origin.
    pub fn default_suite() -> Vec<Bump> {
        vec![Bump::new(-5.0, 3.0), Bump::new(0.0, 2.0), Bump::new(4.0, 3.0)]
    }

    fn value_and_slope(&self, x: f64, scale: f64) -> (f64, f64) {
        let r = (x - self.center) / self.width;
        if r.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let q = 1.0 - r * r;
        let v = scale * (-1.0 / q).exp();
        (v, v * (-2.0 * r / (q * q)) / self.width)
    }
}

/// Largest |∫ (½U² − sU) φ' + (K*U − U) φ dx| over the bumps, by the
/// trapezoid rule on the full-line nodes.
pub fn weak_residual(profile: &WaveProfile, kernel: &Kernel, bumps: &[Bump]) -> Result<f64> {
    let length = profile.grid().length();
    for b in bumps {
        if !(b.width > 0.0) || b.center - b.width <= -length || b.center + b.width >= length {
            return Err(Error::Contract(format!(
                "bump at {} of width {} leaves (−{length}, {length})",
                b.center, b.width
            )));
        }
    }
    let g = convolution(profile, kernel)?;
    let u = profile.half_line();
    let n = profile.grid().cells();
    let s = profile.params().speed();
    let xs = profile.full_nodes();
    let big_u = profile.full_line();
    // K*U − U = ±(K*u − u) by oddness
    let source: Vec<f64> = (0..=2 * n)
        .map(|k| match k.cmp(&n) {
            std::cmp::Ordering::Less => g[k] - u[k],
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => -(g[2 * n - k] - u[2 * n - k]),
        })
        .collect();
    let mass = bump_mass();
    let h = profile.grid().spacing();
    let mut worst: f64 = 0.0;
    for b in bumps {
        let scale = 1.0 / (b.width * mass);
        let samples: Vec<f64> = (0..=2 * n)
            .map(|k| {
                let (phi, dphi) = b.value_and_slope(xs[k], scale);
                let flux = 0.5 * big_u[k] * big_u[k] - s * big_u[k];
                flux * dphi + source[k] * phi
            })
            .collect();
        worst = worst.max(quadrature::trapezoid(&samples, h).abs());
    }
    Ok(worst)
}

/// |∫_{−L}^0 (K*u − u) dx − ½(u(0⁻)² − u_c²)|
pub fn flux_balance(profile: &WaveProfile, kernel: &Kernel) -> Result<f64> {
    let g = convolution(profile, kernel)?;
    let u = profile.half_line();
    let diff: Vec<f64> = g.iter().zip(u).map(|(a, b)| a - b).collect();
    let integral = quadrature::trapezoid(&diff, profile.grid().spacing());
    let uc = profile.params().half_amplitude();
    let edge = u[profile.grid().cells()];
    Ok((integral - 0.5 * (edge * edge - uc * uc)).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpIdentity {
    /// ∫ yK(y) ∫₀¹ u(yt) dt dy for the odd extension u
    pub integral: f64,
    /// |integral + ½u_c²|
    pub defect: f64,
    /// u_c·M1, an a priori bound on |integral|
    pub bound: f64,
}

const T_INTERVALS: usize = 256;

/// The identity −½u_c² = ∫ yK(y) ∫₀¹ u(yt) dt dy, which needs u continuous
/// across the origin. `class` is the refinement verdict for the profile;
/// anything but continuous is refused.
pub fn jump_identity(profile: &WaveProfile, kernel: &Kernel, class: ShockClass) -> Result<JumpIdentity> {
    if class != ShockClass::Continuous {
        return Err(Error::Contract(format!(
            "profile classified {}; the identity holds for continuous waves only",
            class.as_str()
        )));
    }
    let h = profile.grid().spacing();
    let reach = kernel
        .support_radius()
        .unwrap_or_else(|| kernel.tail_radius(1e-14))
        .min(profile.grid().length());
    let steps = (reach / h).ceil() as usize;
    let field = profile.field();
    let dt = 1.0 / T_INTERVALS as f64;
    // the integrand is even in y, so integrate over y > 0 and double;
    // there the odd extension is −u(−yt)
    let outer: Vec<f64> = (0..=steps)
        .map(|k| {
            let y = k as f64 * h;
            let inner: Vec<f64> = (0..=T_INTERVALS)
                .map(|j| -field.interpolate(-y * j as f64 * dt))
                .collect();
            y * kernel.density(y) * quadrature::trapezoid(&inner, dt)
        })
        .collect();
    let integral = 2.0 * quadrature::trapezoid(&outer, h);
    let uc = profile.params().half_amplitude();
    Ok(JumpIdentity {
        integral,
        defect: (integral + 0.5 * uc * uc).abs(),
        bound: uc * kernel.moments().m1,
    })
}
