//! Experiment configuration: JSON on disk, command-line overrides on top.

use std::path::{Path, PathBuf};

use dirac_lindblad::coarse_grain::{GammaForm, ModelParams};
use dirac_lindblad::lindblad::MonitorLimits;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub model: ModelSection,
    /// `[N_S, N_B]`.
    pub fock_dims: [usize; 2],
    #[serde(default)]
    pub time_grid: Option<TimeGrid>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_exclude")]
    pub interior_exclude: usize,
    #[serde(default)]
    pub constraints: Option<ConstraintSection>,
    #[serde(default)]
    pub correspond: CorrespondSection,
    #[serde(default)]
    pub evolve: EvolveSection,
}

fn default_exclude() -> usize {
    dirac_lindblad::correspondence::DEFAULT_INTERIOR_EXCLUDE
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub k1: f64,
    pub k2: f64,
    pub kprime: f64,
    pub tau: f64,
    pub inv_temp: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_final: f64,
    pub dt: f64,
    #[serde(default = "one")]
    pub sample_every: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub name: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    K1,
    K2,
    Kprime,
    Tau,
    InvTemp,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            Self::K1 => "k1",
            Self::K2 => "k2",
            Self::Kprime => "kprime",
            Self::Tau => "tau",
            Self::InvTemp => "inv_temp",
        }
    }

    fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "k1" => Self::K1,
            "k2" => Self::K2,
            "kprime" => Self::Kprime,
            "tau" => Self::Tau,
            "inv_temp" => Self::InvTemp,
            other => {
                return Err(CliError::config(format!(
                    "unknown sweep axis '{other}' (expected k1, k2, kprime, tau or inv_temp)"
                )))
            }
        })
    }

    pub fn apply(&self, m: &mut ModelSection, v: f64) {
        match self {
            Self::K1 => m.k1 = v,
            Self::K2 => m.k2 = v,
            Self::Kprime => m.kprime = v,
            Self::Tau => m.tau = v,
            Self::InvTemp => m.inv_temp = v,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

/// Overrides for the master-equation monitors.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub trace_drift: Option<f64>,
    pub hermiticity: Option<f64>,
    pub min_eigenvalue: Option<f64>,
}

impl Tolerances {
    pub fn limits(&self) -> MonitorLimits {
        let d = MonitorLimits::default();
        MonitorLimits {
            trace_drift: self.trace_drift.unwrap_or(d.trace_drift),
            hermiticity: self.hermiticity.unwrap_or(d.hermiticity),
            min_eigenvalue: self.min_eigenvalue.unwrap_or(d.min_eigenvalue),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    pub coeff: f64,
}

/// A primary constraint: explicit affine coefficients, or `φ₁` of the
/// oscillator model for a given `α`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimarySpec {
    #[serde(default)]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default)]
    pub constant: Option<f64>,
    #[serde(default)]
    pub model_alpha: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSection {
    /// Defaults to the two-oscillator model.
    #[serde(default)]
    pub n_dof: Option<usize>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
    /// Defaults to the model Hamiltonian.
    #[serde(default)]
    pub hamiltonian: Option<Vec<PolyTerm>>,
    #[serde(default)]
    pub primaries: Vec<PrimarySpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrespondMode {
    #[default]
    Physical,
    Synthetic,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondSection {
    #[serde(default)]
    pub mode: CorrespondMode,
    /// Required in synthetic mode.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Candidate index in physical mode; the best real candidate otherwise.
    #[serde(default)]
    pub candidate: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormChoice {
    #[default]
    Model,
    Limit,
    FirstOrder,
}

impl FormChoice {
    pub fn form(&self) -> GammaForm {
        match self {
            Self::Model => GammaForm::Model,
            Self::Limit => GammaForm::Limit,
            Self::FirstOrder => GammaForm::FirstOrder,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Fock { n: usize },
    Coherent { re: f64, im: f64 },
    /// Unnormalized amplitudes `[re, im]` over the lowest levels.
    Superposition { amplitudes: Vec<[f64; 2]> },
}

impl Default for InitialState {
    fn default() -> Self {
        Self::Fock { n: 1 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSection {
    #[serde(default)]
    pub gamma_form: FormChoice,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default = "yes")]
    pub lindblad: bool,
    #[serde(default = "yes")]
    pub exact: bool,
}

fn yes() -> bool {
    true
}

impl Default for EvolveSection {
    fn default() -> Self {
        Self {
            gamma_form: FormChoice::default(),
            initial_state: InitialState::default(),
            lindblad: true,
            exact: true,
        }
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub fock_dim: Option<String>,
    pub tau: Option<f64>,
    pub sweep: Option<String>,
    pub interior_exclude: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "schema_version {} not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> CliResult<()> {
        if let Some(out) = &o.out {
            self.output.dir = Some(out.clone());
        }
        if let Some(spec) = &o.fock_dim {
            self.fock_dims = parse_fock_dim(spec)?;
        }
        if let Some(t) = o.tau {
            self.model.tau = t;
        }
        if let Some(s) = &o.sweep {
            self.sweep = Some(parse_sweep(s)?);
        }
        if let Some(k) = o.interior_exclude {
            self.interior_exclude = k;
        }
        self.validate()
    }

    /// Checks every sweep point, not only the base point.
    pub fn validate(&self) -> CliResult<()> {
        self.sweep_points()?;
        if self.interior_exclude >= self.fock_dims[0] {
            return Err(CliError::config(format!(
                "interior_exclude {} leaves no interior block for N_S = {}",
                self.interior_exclude, self.fock_dims[0]
            )));
        }
        if let Some(tg) = &self.time_grid {
            if !(tg.dt > 0.0 && tg.dt.is_finite() && tg.t_final >= 0.0 && tg.t_final.is_finite()) {
                return Err(CliError::config("time_grid needs dt > 0 and t_final ≥ 0"));
            }
            if tg.sample_every == 0 {
                return Err(CliError::config("time_grid.sample_every must be at least 1"));
            }
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(CliError::config("sweep.values is empty"));
            }
        }
        if self.correspond.mode == CorrespondMode::Synthetic && self.correspond.alpha.is_none() {
            return Err(CliError::config("synthetic mode needs correspond.alpha"));
        }
        Ok(())
    }

    pub fn params(&self) -> CliResult<ModelParams> {
        self.params_with(self.model)
    }

    fn params_with(&self, m: ModelSection) -> CliResult<ModelParams> {
        ModelParams::new(
            m.k1,
            m.k2,
            m.kprime,
            m.tau,
            m.inv_temp,
            (self.fock_dims[0], self.fock_dims[1]),
        )
        .map_err(|e| CliError::config(e.to_string()))
    }

    /// `(sweep value, params)` per point; a single point without a sweep.
    pub fn sweep_points(&self) -> CliResult<Vec<(Option<f64>, ModelParams)>> {
        match &self.sweep {
            None => Ok(vec![(None, self.params()?)]),
            Some(s) => s
                .values
                .iter()
                .map(|&v| {
                    let mut m = self.model;
                    s.name.apply(&mut m, v);
                    Ok((Some(v), self.params_with(m)?))
                })
                .collect(),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.output
            .dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("dlcorr-out"))
    }
}

/// `N` (both modes) or `N_S,N_B`.
fn parse_fock_dim(s: &str) -> CliResult<[usize; 2]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| {
        x.parse::<usize>()
            .map_err(|_| CliError::config(format!("bad --fock-dim value '{s}'")))
    };
    match parts.as_slice() {
        [n] => {
            let n = num(n)?;
            Ok([n, n])
        }
        [a, b] => Ok([num(a)?, num(b)?]),
        _ => Err(CliError::config(format!("bad --fock-dim value '{s}'"))),
    }
}

/// `NAME=v1,v2,...`.
fn parse_sweep(s: &str) -> CliResult<Sweep> {
    let (name, vals) = s
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("--sweep expects NAME=v1,v2,..., got '{s}'")))?;
    let values = vals
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("bad sweep value '{v}'")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Sweep {
        name: SweepAxis::parse(name.trim())?,
        values,
    })
}
