//! Run configuration: a flat JSON object whose keys mirror the CLI flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::NumericalFlux;
use crate::problems::{get_benchmark, BenchmarkProblem, InitialData};
use crate::sensor::{SensorConfig, SensorVariant};
use crate::stabilization::Stabilization;
use crate::time::{SspScheme, TimeStepConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Dg,
    Lo,
    Weno,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::Dg => "DG",
            Scheme::Lo => "LO",
            Scheme::Weno => "WENO",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dg" => Ok(Scheme::Dg),
            "lo" => Ok(Scheme::Lo),
            "weno" => Ok(Scheme::Weno),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorKind {
    Relative,
    Zhao,
}

fn default_scheme() -> Scheme {
    Scheme::Weno
}
fn default_p() -> usize {
    2
}
fn default_q() -> f64 {
    1.0
}
fn default_theta() -> f64 {
    1.0
}
fn default_sensor() -> SensorKind {
    SensorKind::Relative
}
fn default_epsilon() -> f64 {
    1e-12
}
fn default_neighbor_weight() -> f64 {
    0.001
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default = "default_p")]
    pub p: usize,
    /// Cells per axis; the benchmark default when absent.
    #[serde(default)]
    pub mesh: Option<Vec<usize>>,
    #[serde(default)]
    pub flux: Option<NumericalFlux>,
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default = "default_sensor")]
    pub sensor: SensorKind,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_neighbor_weight")]
    pub neighbor_weight: f64,
    #[serde(default)]
    pub cfl: Option<f64>,
    #[serde(default)]
    pub t_final: Option<f64>,
    #[serde(default)]
    pub integrator: Option<SspScheme>,
    #[serde(default)]
    pub dt: Option<f64>,
    /// "interpolate" or "project"; the benchmark default when absent.
    #[serde(default)]
    pub initial: Option<InitialData>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub dump_sensor: bool,
}

impl RunConfig {
    pub fn new(problem: &str) -> Self {
        RunConfig {
            problem: problem.to_string(),
            scheme: default_scheme(),
            p: default_p(),
            mesh: None,
            flux: None,
            q: default_q(),
            b: 0.0,
            sensor: default_sensor(),
            theta: default_theta(),
            epsilon: default_epsilon(),
            neighbor_weight: default_neighbor_weight(),
            cfl: None,
            t_final: None,
            integrator: None,
            dt: None,
            initial: None,
            out: None,
            dump_sensor: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn sensor_config(&self) -> SensorConfig {
        SensorConfig {
            q: self.q,
            b: self.b,
            variant: match self.sensor {
                SensorKind::Relative => SensorVariant::Relative,
                SensorKind::Zhao => SensorVariant::Zhao { theta: self.theta },
            },
            epsilon: self.epsilon,
            neighbor_weight: self.neighbor_weight,
        }
    }

    pub fn stabilization(&self) -> Stabilization {
        match self.scheme {
            Scheme::Dg => Stabilization::None,
            Scheme::Lo => Stabilization::LowOrder,
            Scheme::Weno => Stabilization::Adaptive(self.sensor_config()),
        }
    }

    /// Checks the configuration against the benchmark and fills in defaults.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let problem = get_benchmark(&self.problem).map_err(|e| Error::Config(e.to_string()))?;
        if !(1..=3).contains(&self.p) && !(self.p == 0 && self.scheme == Scheme::Dg) {
            return Err(Error::Config(format!(
                "degree p = {} is not supported (1..=3, or 0 with the DG scheme)",
                self.p
            )));
        }
        let counts = self.mesh.clone().unwrap_or_else(|| problem.counts.clone());
        if counts.len() != problem.dim() {
            return Err(Error::Config(format!(
                "{} is {}D but the mesh has {} counts",
                problem.name,
                problem.dim(),
                counts.len()
            )));
        }
        if counts.contains(&0) {
            return Err(Error::Config("mesh counts must be positive".into()));
        }
        let flux = self.flux.unwrap_or_else(|| problem.law.default_flux());
        if flux == NumericalFlux::Hll && problem.law.gamma().is_none() {
            return Err(Error::Config(format!("HLL flux is not available for {}", problem.name)));
        }
        self.sensor_config().validate()?;
        let timestep = TimeStepConfig {
            cfl: self.cfl.unwrap_or_else(|| default_cfl(problem.dim(), self.p, self.scheme)),
            t_final: self.t_final.unwrap_or(problem.t_final),
            scheme: self.integrator.unwrap_or(SspScheme::Ssprk33),
            fixed_dt: self.dt,
        };
        timestep.validate()?;
        Ok(ResolvedRun {
            initial_data: self.initial.unwrap_or(problem.initial_data),
            problem,
            counts,
            p: self.p,
            flux,
            stabilization: self.stabilization(),
            timestep,
        })
    }
}

/// Default CFL number. In 2D the viscous term, measured with the cell
/// diagonal, limits the stable step more than the advective part. Its step
/// number dt ν/h² is cfl/(2p(2p+1)) whatever the problem, and LO at p=2 needs
/// 0.1 (KPP blows up at 0.15).
pub fn default_cfl(dim: usize, p: usize, scheme: Scheme) -> f64 {
    match (dim, p, scheme) {
        (1, _, _) => 0.3,
        (_, 0..=1, _) => 0.15,
        (_, 2, Scheme::Dg | Scheme::Weno) => 0.15,
        _ => 0.1,
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub problem: BenchmarkProblem,
    pub counts: Vec<usize>,
    pub p: usize,
    pub flux: NumericalFlux,
    pub stabilization: Stabilization,
    pub timestep: TimeStepConfig,
    pub initial_data: InitialData,
}
