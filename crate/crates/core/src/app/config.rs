use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{Kernel, KernelSpec};
use crate::waves::WaveParams;

/// Everything a run needs. Files fill it first, flags override single fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub kernel: String,
    pub u_minus: Option<f64>,
    pub u_plus: Option<f64>,
    pub length: Option<f64>,
    pub cells: usize,
    pub base_cells: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub probes: usize,
    pub sweep: SweepConfig,
    pub sim: SimSection,
    pub output: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kernel: "exp:k=1".into(),
            u_minus: None,
            u_plus: None,
            length: None,
            cells: 4096,
            base_cells: 1024,
            tol: 1e-8,
            max_iter: 5000,
            probes: 256,
            sweep: SweepConfig::default(),
            sim: SimSection::default(),
            output: PathBuf::from("out"),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub kernels: Vec<String>,
    pub amplitudes: Vec<f64>,
    /// Log-spaced amplitudes appended after `amplitudes`.
    pub log_amplitudes: Option<AmplitudeGrid>,
    /// Wave speed shared by every row; u_± = center ± amplitude/2.
    pub center: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kernels: vec!["exp:k=0.5".into(), "exp:k=1".into(), "exp:k=2".into()],
            amplitudes: Vec::new(),
            log_amplitudes: Some(AmplitudeGrid {
                min: 0.2,
                max: 10.0,
                count: 20,
            }),
            center: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepConfig {
    pub fn amplitude_list(&self) -> Result<Vec<f64>> {
        let mut out = self.amplitudes.clone();
        if let Some(g) = self.log_amplitudes {
            if !(g.min > 0.0 && g.max >= g.min) || g.count == 0 {
                return Err(Error::Config(format!(
                    "log amplitude grid needs 0 < min ≤ max and count ≥ 1, got {g:?}"
                )));
            }
            let (lo, hi) = (g.min.ln(), g.max.ln());
            for i in 0..g.count {
                let t = if g.count == 1 { 0.0 } else { i as f64 / (g.count - 1) as f64 };
                out.push(if i + 1 == g.count { g.max } else { (lo + t * (hi - lo)).exp() });
            }
        }
        if out.is_empty() {
            return Err(Error::Config("amplitude list is empty".into()));
        }
        if let Some(a) = out.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::Config(format!("amplitude {a} must be positive")));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub start: f64,
    pub end: f64,
    pub cells: usize,
    pub cfl: f64,
    pub end_time: f64,
    pub snapshot_interval: f64,
    /// `tanh:a=2,k=3` for u = −a·tanh(kx), or `constant:c=1`.
    pub init: String,
    /// Wave profile CSV ("x,U") used as initial data instead of `init`.
    pub init_from: Option<PathBuf>,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            start: -40.0,
            end: 40.0,
            cells: 2000,
            cfl: 0.4,
            end_time: 5.0,
            snapshot_interval: 0.5,
            init: "tanh:a=2,k=3".into(),
            init_from: None,
        }
    }
}

/// Analytic initial data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitShape {
    Tanh { amplitude: f64, steepness: f64 },
    Constant(f64),
}

impl InitShape {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse initial data {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let mut a = None;
        let mut k = None;
        let mut c = None;
        for part in rest.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let value: f64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "a" => a = Some(value),
                "k" => k = Some(value),
                "c" => c = Some(value),
                _ => return Err(bad()),
            }
        }
        match kind {
            "tanh" => Ok(InitShape::Tanh {
                amplitude: a.ok_or_else(bad)?,
                steepness: k.ok_or_else(bad)?,
            }),
            "constant" => Ok(InitShape::Constant(c.ok_or_else(bad)?)),
            _ => Err(bad()),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            InitShape::Tanh {
                amplitude,
                steepness,
            } => -amplitude * (steepness * x).tanh(),
            InitShape::Constant(c) => c,
        }
    }

    pub fn far_fields(&self) -> (f64, f64) {
        match *self {
            InitShape::Tanh { amplitude, .. } => (amplitude, -amplitude),
            InitShape::Constant(c) => (c, c),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn kernel(&self) -> Result<Kernel> {
        Kernel::from_spec(&self.kernel.parse::<KernelSpec>()?)
    }

    pub fn params(&self) -> Result<WaveParams> {
        match (self.u_minus, self.u_plus) {
            (Some(a), Some(b)) => WaveParams::new(a, b),
            _ => Err(Error::Config("u_minus and u_plus are required".into())),
        }
    }

    /// Range checks shared by every subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.cells < 64 {
            return Err(Error::Config(format!("cells must be at least 64, got {}", self.cells)));
        }
        if self.base_cells < 64 || 4 * self.base_cells > 10_000 {
            return Err(Error::Config(format!(
                "base_cells must lie in [64, 2500] so that 4·base_cells ≤ 10000, got {}",
                self.base_cells
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if self.probes < 16 {
            return Err(Error::Config(format!("probes must be at least 16, got {}", self.probes)));
        }
        if let Some(l) = self.length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Config(format!("length must be positive, got {l}")));
            }
        }
        Ok(())
    }
}
