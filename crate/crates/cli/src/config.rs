//! Run configuration: JSON file, flag overrides, resolved defaults.
//!
//! Precedence is defaults < config file < explicit flags. Every resolved
//! configuration is echoed verbatim into the emitted files, so a run can be
//! reproduced from any of its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use windisc_core::model::PhysicalParams;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Which winding constant enters the closed-form density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantChoice {
    /// 1 / (2 pi R^2), the strip-collapse value.
    Leading,
    /// The root of the first-order self-consistency equation.
    SelfConsistent,
}

/// Which computed law a command feeds on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Closed-form density with the self-consistent constant.
    Asymptotic,
    /// Converged eigenproblem solution.
    Solve,
}

/// On-disk configuration. Unknown keys anywhere are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub params: Option<ParamsBlock>,
    pub output: Option<OutputBlock>,
    pub seed: Option<u64>,
    pub grid: Option<GridBlock>,
    pub constant: Option<ConstantChoice>,
    pub source: Option<Source>,
    pub solver: Option<SolverBlock>,
    pub simulation: Option<SimulationBlock>,
    pub minimality: Option<MinimalityBlock>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsBlock {
    pub radius: Option<f64>,
    pub speed: Option<f64>,
    pub diffusion: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub nodes: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
    pub sweep_radii: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationBlock {
    pub dt: Option<f64>,
    pub steps: Option<u64>,
    pub paths: Option<u64>,
    pub burn_in: Option<u64>,
    pub bins: Option<usize>,
    pub window_widths: Option<f64>,
    pub drift_cap: Option<f64>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimalityBlock {
    pub perturbations: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|err| CliError::Config(format!("{}: {err}", path.display())))
    }

    fn params(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        match &self.params {
            Some(p) => (p.radius, p.speed, p.diffusion),
            None => (None, None, None),
        }
    }
}

pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Settings shared by every command, resolved and serializable.
#[derive(Clone, Debug, Serialize)]
pub struct Common {
    pub radius: f64,
    pub speed: f64,
    pub diffusion: f64,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub format: Format,
}

impl Common {
    pub fn resolve(
        flags: &crate::CommonArgs,
        file: &FileConfig,
    ) -> Result<(Self, PhysicalParams), CliError> {
        let (f_r, f_v, f_d) = file.params();
        let radius = pick(flags.radius, f_r, 100.0);
        let speed = pick(flags.speed, f_v, 1.0);
        let diffusion = pick(flags.diffusion, f_d, 1.0);
        let params = PhysicalParams::new(radius, speed, diffusion)?;

        let (file_dir, file_format) = match &file.output {
            Some(o) => (o.dir.clone(), o.format),
            None => (None, None),
        };
        let common = Common {
            radius,
            speed,
            diffusion,
            seed: pick(flags.seed, file.seed, 1),
            out: pick(flags.out.clone(), file_dir, PathBuf::from(".")),
            format: pick(flags.format, file_format, Format::Csv),
        };
        Ok((common, params))
    }
}
