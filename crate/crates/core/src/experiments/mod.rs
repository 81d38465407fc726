//! Experiment configuration, orchestration and report emission.
//!
//! A run is described by one JSON document ([`ExperimentConfig`]); unknown
//! keys are rejected and every referenced parameter is validated before any
//! work starts. Each command returns an [`Outcome`] and writes its reports
//! under `output_dir`.

mod converge;
mod profiles;
mod scaling;
mod simulate;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::kernels::KernelId;
use crate::estimates::probe::DEFAULT_BOXES;
use crate::grid::{Grid2D, DEFAULT_PERIOD};
use crate::propagator::check_alpha;
use crate::sampling::DEFAULT_SEED;

pub use converge::{
    cmd_converge, converge_report, decays_superalgebraically, picard_study, spatial_study,
    temporal_order, ConvergeReport, ConvergeSettings, OrderRow, PicardLog, SpatialRow,
};
pub use profiles::{initial_data, profile_data, InitialData, Profile};
pub use scaling::{
    check_representable, cmd_scaling_check, compare_trajectories, norm_scaling_exponent,
    predicted_exponent, scaled_grid, scaled_initial_data, scaling_report, ScalingCase,
    ScalingReport, ScalingRow, ScalingSettings, TrajectoryComparison,
};
pub use simulate::{cmd_simulate, run_simulation, PicardSummary, SimulationOutcome, BLOWUP_FACTOR};
pub use verify::{
    cmd_probe, cmd_verify, verify_report, CampaignEntry, Falsification, ProbeSummary,
    StrichartzSummary, VerifyCase, VerifyReport, VerifySettings, FALSIFICATION_B_PRIME,
    STRICHARTZ_STABILITY,
};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_INSTABILITY: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Scaling,
    Verify,
    Converge,
    Probe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Scaling => "scaling",
            Command::Verify => "verify",
            Command::Converge => "converge",
            Command::Probe => "probe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Etdrk4,
    Picard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub alpha: f64,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub picard_iters: usize,
    pub picard_quadrature_nodes: usize,
    pub cutoff_width: f64,
    pub initial: InitialData,
    /// Steps between diagnostics records.
    pub diagnostics_stride: usize,
    /// Steps between checkpoint files; `0` disables checkpoints.
    pub checkpoint_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            nx: 64,
            ny: 64,
            lx: DEFAULT_PERIOD,
            ly: DEFAULT_PERIOD,
            dt: 1e-2,
            t_end: 1.0,
            scheme: Scheme::Etdrk4,
            picard_iters: 40,
            picard_quadrature_nodes: 65,
            cutoff_width: 1.0,
            initial: InitialData::default(),
            diagnostics_stride: 1,
            checkpoint_stride: 0,
        }
    }
}

impl SimConfig {
    pub fn grid(&self) -> Result<Grid2D> {
        Grid2D::new(self.nx, self.ny, self.lx, self.ly).map_err(|e| Error::Config(e.to_string()))
    }

    /// Number of steps covering `[0, t_end]`; `t_end` must be a multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        let n = (self.t_end / self.dt).round();
        if !(n >= 1.0) || (n * self.dt - self.t_end).abs() > 1e-9 * self.t_end {
            return Err(Error::Config(format!(
                "t_end = {} is not a positive multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha).map_err(|e| Error::Config(e.to_string()))?;
        if !(self.dt > 0.0 && self.dt.is_finite()) || !(self.t_end > 0.0 && self.t_end.is_finite())
        {
            return Err(Error::Config(
                "dt and t_end must be positive and finite".into(),
            ));
        }
        if !(self.cutoff_width > 0.0) {
            return Err(Error::Config("cutoff_width must be positive".into()));
        }
        if self.diagnostics_stride == 0 {
            return Err(Error::Config(
                "diagnostics_stride must be at least 1".into(),
            ));
        }
        let g = self.grid()?;
        match self.scheme {
            Scheme::Etdrk4 => {
                self.steps()?;
                let max_omega = (1..g.nx())
                    .flat_map(|i| (0..g.ny()).map(move |k| (i, k)))
                    .map(|(i, k)| crate::propagator::omega(g.xi(i), g.eta(k), self.alpha).abs())
                    .fold(0.0, f64::max);
                if !(max_omega * self.dt).is_finite() {
                    return Err(Error::Config("dt·max|ω| is not finite on this grid".into()));
                }
            }
            Scheme::Picard => {
                if self.t_end > 1.0 {
                    return Err(Error::Config(format!(
                        "Picard needs t_end ≤ 1, got {}",
                        self.t_end
                    )));
                }
                if self.picard_iters == 0 || self.picard_quadrature_nodes < 3 {
                    return Err(Error::Config(
                        "picard_iters must be ≥ 1 and picard_quadrature_nodes ≥ 3".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormSettings {
    pub s1: f64,
    pub s2: f64,
    pub b: f64,
    pub sigma: f64,
}

impl Default for NormSettings {
    fn default() -> Self {
        Self {
            s1: 0.0,
            s2: 0.0,
            b: 0.5,
            sigma: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeSettings {
    pub alpha: f64,
    pub s: f64,
    /// Kernel names (`k00`, `k10`, …); empty means all.
    pub kernels: Vec<String>,
    pub boxes: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    /// Trials of the linear and bilinear Strichartz probes; `0` skips them.
    pub strichartz_trials: usize,
    pub strichartz_n: usize,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            s: -0.4,
            kernels: Vec::new(),
            boxes: DEFAULT_BOXES.to_vec(),
            n_samples: 1_000_000,
            seed: DEFAULT_SEED,
            strichartz_trials: 0,
            strichartz_n: 32,
        }
    }
}

impl ProbeSettings {
    pub fn kernel_ids(&self) -> Result<Vec<KernelId>> {
        if self.kernels.is_empty() {
            return Ok(KernelId::ALL.to_vec());
        }
        self.kernels
            .iter()
            .map(|k| KernelId::parse(k).map_err(|e| Error::Config(e.to_string())))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel_ids()?;
        if self.boxes.is_empty() || self.boxes.iter().any(|&k| !(k > 1.0 && k.is_finite())) {
            return Err(Error::Config(format!(
                "box half-widths must exceed 1, got {:?}",
                self.boxes
            )));
        }
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; when present it must agree with the command being run.
    pub command: Option<Command>,
    pub sim: SimConfig,
    pub norms: NormSettings,
    pub probe: ProbeSettings,
    pub scaling: ScalingSettings,
    pub verify: VerifySettings,
    pub converge: ConvergeSettings,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: None,
            sim: SimConfig::default(),
            norms: NormSettings::default(),
            probe: ProbeSettings::default(),
            scaling: ScalingSettings::default(),
            verify: VerifySettings::default(),
            converge: ConvergeSettings::default(),
            output_dir: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks the parameters `command` will use.
    pub fn validate(&self, command: Command) -> Result<()> {
        if let Some(c) = self.command {
            if c != command {
                return Err(Error::Config(format!(
                    "config is for `{}` but `{}` was requested",
                    c.name(),
                    command.name()
                )));
            }
        }
        match command {
            Command::Simulate => self.sim.validate(),
            Command::Scaling => self.scaling.validate(),
            Command::Verify => self.verify.validate(),
            Command::Converge => self.converge.validate(),
            Command::Probe => self.probe.validate(),
        }
    }
}

/// Result of a command: overall verdict plus one line per check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub command: Command,
    pub passed: bool,
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Instability(_) | Error::ContractionFailure { .. } => EXIT_INSTABILITY,
        Error::Region { .. } => EXIT_VERIFICATION,
        _ => EXIT_CONFIG,
    }
}

/// Validates `cfg` for `command` and runs it.
pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate(command)?;
    match command {
        Command::Simulate => cmd_simulate(cfg),
        Command::Scaling => cmd_scaling_check(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Converge => cmd_converge(cfg),
        Command::Probe => cmd_probe(cfg),
    }
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

pub(crate) fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

/// Writes `rows` as CSV (`header` then one line per row) or as a JSON array.
pub(crate) fn write_table<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: Format,
    header: &str,
    rows: &[T],
    line: impl Fn(&T) -> String,
) -> Result<PathBuf> {
    match format {
        Format::Json => write_json(dir, &format!("{stem}.json"), &rows),
        Format::Csv => {
            ensure_dir(dir)?;
            let path = dir.join(format!("{stem}.csv"));
            let mut text = String::from(header);
            text.push('\n');
            for r in rows {
                text.push_str(&line(r));
                text.push('\n');
            }
            fs::write(&path, text)?;
            Ok(path)
        }
    }
}
