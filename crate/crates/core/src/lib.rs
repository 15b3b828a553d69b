pub mod app;
pub mod cauchy;
pub mod convolve;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod waves;

pub use convolve::{HalfLineField, HalfLineGrid};
pub use error::{Error, Result};
pub use kernels::{validate_kernel, Kernel, KernelSpec, Moments, ValidationReport};
pub use waves::{solve_wave, SolveOptions, WaveParams, WaveProfile};
