//! Fast odd convolution against adaptive quadrature on random monotone fields.

use nlburgers::convolve::{brute_force_convolve, odd_convolve, Method, OddConvolver};
use nlburgers::{HalfLineField, HalfLineGrid, Kernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Piecewise-linear nonincreasing field from uc at −L down to a value in [0, uc].
fn random_field(rng: &mut ChaCha8Rng, grid: HalfLineGrid, uc: f64) -> HalfLineField {
    let n = grid.cells();
    let mut steps: Vec<f64> = (0..n).map(|_| rng.gen::<f64>().powi(3)).collect();
    let total: f64 = steps.iter().sum();
    let drop = uc * rng.gen_range(0.0..1.0);
    for s in &mut steps {
        *s *= drop / total;
    }
    let mut values = Vec::with_capacity(n + 1);
    let mut v = uc;
    values.push(v);
    for s in steps {
        v = (v - s).max(0.0);
        values.push(v);
    }
    HalfLineField::new(grid, values, uc).unwrap()
}

#[test]
fn fifty_random_fields_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let grid = HalfLineGrid::new(30.0, 4096).unwrap();
    let kernels = [
        Kernel::exponential(1.0).unwrap(),
        Kernel::gaussian(1.0).unwrap(),
        Kernel::uniform(1.0).unwrap(),
        Kernel::triangular(1.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let kernel = &kernels[trial % kernels.len()];
        let uc = rng.gen_range(0.2..3.0);
        let field = random_field(&mut rng, grid, uc);
        let fast = odd_convolve(kernel, &field).unwrap();
        for _ in 0..3 {
            let i = rng.gen_range(0..=grid.cells());
            let b = brute_force_convolve(kernel, &field, grid.node(i)).unwrap();
            worst = worst.max((b - fast.values()[i]).abs());
        }
    }
    assert!(worst <= 1e-6, "worst disagreement {worst:.3e}");
}

#[test]
fn direct_and_fft_sums_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grid = HalfLineGrid::new(20.0, 512).unwrap();
    let kernel = Kernel::gaussian(0.7).unwrap();
    let field = random_field(&mut rng, grid, 1.3);
    let fft = OddConvolver::with_method(&kernel, grid, Method::Fft).unwrap().apply(&field).unwrap();
    let direct = OddConvolver::with_method(&kernel, grid, Method::Direct).unwrap().apply(&field).unwrap();
    for (a, b) in fft.iter().zip(&direct) {
        assert!((a - b).abs() < 1e-12);
    }
}
