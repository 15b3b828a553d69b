use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("kernel moment diverges: {0}")]
    DivergentMoment(String),

    #[error("invalid wave parameters: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("kernel tail mass {tail_mass:.3e} beyond radius {radius} exceeds {limit:.0e}")]
    KernelTailTooHeavy {
        tail_mass: f64,
        radius: f64,
        limit: f64,
    },

    #[error("field is not an admissible iterate: {0}")]
    NotAdmissible(String),

    #[error("iterate fell below the floor {floor:.0e} at x = {x} (value {value:.3e}, L = {length}, N = {cells})")]
    FloorBreach {
        x: f64,
        value: f64,
        floor: f64,
        length: f64,
        cells: usize,
    },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("monotone scheme invariant violated at iteration {iteration}: {detail}")]
    InvariantViolation { iteration: usize, detail: String },

    #[error("subsolution scale underflow after {halvings} halvings (sup g = {sup_g:.3e})")]
    SubsolutionUnderflow { halvings: usize, sup_g: f64 },

    #[error("quadrature did not converge after {levels} refinement levels")]
    QuadratureDiverged { levels: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    #[error("simulation blew up at t = {time}: {detail}")]
    BlowUp { time: f64, detail: String },

    #[error("level {level} not crossed in snapshot at t = {time}")]
    LevelNotCrossed { level: f64, time: f64 },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in error JSON and sweep rows.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidKernel(_) => "invalid_kernel",
            Error::DivergentMoment(_) => "divergent_moment",
            Error::InvalidParams(_) => "invalid_params",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::KernelTailTooHeavy { .. } => "kernel_tail_too_heavy",
            Error::NotAdmissible(_) => "not_admissible",
            Error::FloorBreach { .. } => "floor_breach",
            Error::NonFinite(_) => "non_finite",
            Error::InvariantViolation { .. } => "invariant_violation",
            Error::SubsolutionUnderflow { .. } => "subsolution_underflow",
            Error::QuadratureDiverged { .. } => "quadrature_diverged",
            Error::Contract(_) => "contract",
            Error::InvalidSimConfig(_) => "invalid_sim_config",
            Error::BlowUp { .. } => "blow_up",
            Error::LevelNotCrossed { .. } => "level_not_crossed",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
