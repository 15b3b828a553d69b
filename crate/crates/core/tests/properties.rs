use nlburgers::convolve::odd_convolve;
use nlburgers::waves::{iterate_once, supersolution};
use nlburgers::{HalfLineField, HalfLineGrid, Kernel, WaveParams};
use proptest::prelude::*;

fn kernel(family: u8, scale: f64) -> Kernel {
    match family % 4 {
        0 => Kernel::exponential(scale).unwrap(),
        1 => Kernel::gaussian(scale).unwrap(),
        2 => Kernel::uniform(scale).unwrap(),
        _ => Kernel::triangular(scale).unwrap(),
    }
}

/// Nonincreasing field from uc to `end·uc` with a profile shaped by `bend`.
fn field(grid: HalfLineGrid, uc: f64, end: f64, bend: f64) -> HalfLineField {
    let l = grid.length();
    let values = grid
        .nodes()
        .iter()
        .map(|x| uc * (end + (1.0 - end) * (-x / l).powf(bend)))
        .collect();
    HalfLineField::new(grid, values, uc).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cdf_is_symmetric(family in 0u8..4, scale in 0.3f64..3.0, x in -10.0f64..10.0) {
        let k = kernel(family, scale);
        prop_assert!((k.cdf(x) + k.cdf(-x) - 1.0).abs() < 1e-12);
        prop_assert!((k.density(x) - k.density(-x)).abs() < 1e-14);
    }

    #[test]
    fn convolution_preserves_order(
        family in 0u8..4,
        scale in 0.5f64..2.0,
        uc in 0.2f64..3.0,
        lo in 0.0f64..0.5,
        gap in 0.0f64..0.5,
        bend in 0.2f64..3.0,
    ) {
        let k = kernel(family, scale);
        let grid = HalfLineGrid::new(60.0, 512).unwrap();
        let below = odd_convolve(&k, &field(grid, uc, lo, bend)).unwrap();
        let above = odd_convolve(&k, &field(grid, uc, lo + gap, bend)).unwrap();
        for (a, b) in below.values().iter().zip(above.values()) {
            prop_assert!(*a <= b + 1e-12);
        }
    }

    #[test]
    fn first_iterate_ignores_the_centre(
        family in 0u8..4,
        uc in 0.1f64..3.0,
        shift in -5.0f64..5.0,
    ) {
        let k = kernel(family, 1.0);
        let grid = HalfLineGrid::new(25.0, 256).unwrap();
        let p0 = WaveParams::new(uc, -uc).unwrap();
        let p1 = WaveParams::new(uc + shift, -uc + shift).unwrap();
        prop_assume!((p1.half_amplitude() - uc).abs() == 0.0);
        let a = iterate_once(&k, &supersolution(&p0, grid), &p0).unwrap();
        let b = iterate_once(&k, &supersolution(&p1, grid), &p1).unwrap();
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn params_reject_nonincreasing_states(a in -5.0f64..5.0, d in 0.0f64..5.0) {
        prop_assert!(WaveParams::new(a, a + d).is_err());
    }
}
