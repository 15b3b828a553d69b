//! Traveling waves of u_t + u u_x + u − K*u = 0.
//!
//! A wave U(x − st) joining u_− > u_+ moves at s = (u_− + u_+)/2 and its
//! centred part u = U − s is odd, decreasing, and solves u u' = K*u − u with
//! u(−∞) = u_c = (u_− − u_+)/2. The profile is built on the negative half-line
//! by a descending monotone iteration started from the step supersolution and
//! bounded below by an arctangent subsolution.

mod classify;
mod residuals;
mod scheme;
mod solve;

pub use classify::{
    classify_profiles, classify_shock, jump_floor, measure, ClassifyOptions, ShockClass,
    ShockClassification,
};
pub use residuals::{
    flux_balance, jump_identity, pointwise_residual, weak_residual, Bump, JumpIdentity,
    PointwiseResidual,
};
pub use scheme::{iterate_once, subsolution, supersolution, MonotoneScheme, SubsolutionSpec, FLOOR};
pub use solve::{
    default_length, solve_wave, IterationRecord, IterationTrace, SolveOptions, SolveStatus,
    WaveProfile,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Far-field states of a wave. Construction enforces u_− > u_+.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    u_minus: f64,
    u_plus: f64,
}

impl WaveParams {
    pub fn new(u_minus: f64, u_plus: f64) -> Result<Self> {
        if !(u_minus.is_finite() && u_plus.is_finite()) {
            return Err(Error::InvalidParams("far-field states must be finite".into()));
        }
        if u_minus <= u_plus {
            return Err(Error::InvalidParams("u_minus must exceed u_plus".into()));
        }
        Ok(WaveParams { u_minus, u_plus })
    }

    /// Symmetric states (a, −a) around zero speed.
    pub fn centered(half_amplitude: f64) -> Result<Self> {
        Self::new(half_amplitude, -half_amplitude)
    }

    pub fn u_minus(&self) -> f64 {
        self.u_minus
    }

    pub fn u_plus(&self) -> f64 {
        self.u_plus
    }

    /// Rankine–Hugoniot speed s = (u_− + u_+)/2.
    pub fn speed(&self) -> f64 {
        0.5 * (self.u_minus + self.u_plus)
    }

    /// u_c = (u_− − u_+)/2
    pub fn half_amplitude(&self) -> f64 {
        0.5 * (self.u_minus - self.u_plus)
    }

    pub fn amplitude(&self) -> f64 {
        self.u_minus - self.u_plus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speed_and_half_amplitude() {
        let p = WaveParams::new(2.0, 0.0).unwrap();
        assert_eq!(p.speed(), 1.0);
        assert_eq!(p.half_amplitude(), 1.0);
        let q = WaveParams::new(2.5, -0.5).unwrap();
        assert_eq!(q.speed() + q.half_amplitude(), q.u_minus());
        assert_eq!(q.speed() - q.half_amplitude(), q.u_plus());
    }

    #[test]
    fn degenerate_and_reversed_states_are_rejected() {
        assert!(WaveParams::new(1.0, 1.0).is_err());
        assert!(WaveParams::new(-1.0, 1.0).is_err());
        assert!(WaveParams::new(f64::NAN, 0.0).is_err());
        let err = WaveParams::new(1.0, 1.0).unwrap_err().to_string();
        assert!(err.contains("u_minus must exceed u_plus"));
    }
}
