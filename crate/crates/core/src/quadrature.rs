//! Gauss–Legendre building blocks shared by the kernel tables, the
//! subsolution search and the brute-force convolution oracle.

use crate::error::{Error, Result};

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss–Legendre rule on `[a, b]`; exact for polynomials of degree 15.
#[inline]
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (&t, &w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        acc += w * (f(mid - half * t) + f(mid + half * t));
    }
    acc * half
}

/// Integrates over consecutive pieces `breaks[k]..breaks[k+1]`, each split into
/// `2^level` Gauss–Legendre panels.
pub fn composite<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], level: u32) -> f64 {
    let panels = 1usize << level;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let step = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * step;
            let hi = if p + 1 == panels { b } else { lo + step };
            total += gauss_legendre(f, lo, hi);
        }
    }
    total
}

/// Repeated interval halving of every piece until two successive refinements
/// agree to `tol` (absolute). Fails after `max_levels` halvings.
pub fn refine_until<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    tol: f64,
    max_levels: u32,
) -> Result<f64> {
    let mut prev = composite(f, breaks, 0);
    for level in 1..=max_levels {
        let next = composite(f, breaks, level);
        if (next - prev).abs() <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureDiverged {
        levels: max_levels as usize,
    })
}

/// Recursive bisection comparing the rule on an interval with the sum over its halves.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gauss_legendre(f, a, mid);
        let right = gauss_legendre(f, mid, b);
        let both = left + right;
        if depth == 0 || (both - whole).abs() <= tol.max(8.0 * f64::EPSILON * both.abs()) {
            return both;
        }
        recurse(f, a, mid, left, 0.5 * tol, depth - 1) + recurse(f, mid, b, right, 0.5 * tol, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let whole = gauss_legendre(f, a, b);
    recurse(f, a, b, whole, tol, max_depth)
}

/// Adaptive integration over a sorted list of breakpoints.
pub fn adaptive_pieces<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: f64) -> f64 {
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    breaks
        .windows(2)
        .map(|w| adaptive(f, w[0], w[1], tol / pieces, 40))
        .sum()
}

/// Composite trapezoid rule for uniformly spaced samples.
pub fn trapezoid(samples: &[f64], h: f64) -> f64 {
    match samples.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = samples[1..n - 1].iter().sum();
            h * (inner + 0.5 * (samples[0] + samples[n - 1]))
        }
    }
}
