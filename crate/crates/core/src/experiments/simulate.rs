//! Forward simulation with either scheme, diagnostics and checkpoints.

use serde::{Deserialize, Serialize};

use super::profiles::initial_data;
use super::{
    write_json, write_table, Command, ExperimentConfig, NormSettings, Outcome, Scheme, SimConfig,
};
use crate::checkpoint::{self, Checkpoint};
use crate::error::{Error, Result};
use crate::etdrk4::Etdrk4;
use crate::grid::SpectralField;
use crate::picard::{picard_solve, PicardConfig};
use crate::trajectory::{Diagnostics, Trajectory, CSV_HEADER};

/// Abort when `‖u(t)‖_{L²}` exceeds this multiple of `‖u(0)‖_{L²}`.
pub const BLOWUP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardSummary {
    pub iterations: usize,
    pub diffs: Vec<f64>,
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    /// Initial and final states, diagnostics at every recorded step.
    pub trajectory: Trajectory,
    pub final_state: SpectralField,
    pub steps: usize,
    pub picard: Option<PicardSummary>,
}

impl SimulationOutcome {
    pub fn relative_l2_drift(&self) -> f64 {
        self.trajectory.relative_l2_drift()
    }
}

fn guard(step: usize, t: f64, u: &SpectralField, l2_0: f64) -> Result<()> {
    let l2 = u.l2_norm();
    if !l2.is_finite() || (l2_0 > 0.0 && l2 > BLOWUP_FACTOR * l2_0) {
        return Err(Error::Instability(format!(
            "L² norm {l2:.6e} at step {step} (t = {t}) exceeds {BLOWUP_FACTOR}× the initial {l2_0:.6e}"
        )));
    }
    Ok(())
}

/// Runs `sim` from `u0`, calling `observe(step, t, state)` on every state.
pub fn run_simulation<F>(
    u0: &SpectralField,
    sim: &SimConfig,
    norms: &NormSettings,
    mut observe: F,
) -> Result<SimulationOutcome>
where
    F: FnMut(usize, f64, &SpectralField) -> Result<()>,
{
    sim.validate()?;
    let l2_0 = u0.l2_norm();
    let mut trajectory = Trajectory::new(norms.s1, norms.s2);
    trajectory.push(0.0, u0.clone());
    observe(0, 0.0, u0)?;
    match sim.scheme {
        Scheme::Etdrk4 => {
            let steps = sim.steps()?;
            let stepper = Etdrk4::new(*u0.grid(), sim.alpha, sim.dt);
            let mut u = u0.clone();
            for n in 1..=steps {
                u = stepper.step(&u);
                let t = n as f64 * sim.dt;
                guard(n, t, &u, l2_0)?;
                observe(n, t, &u)?;
                if n == steps {
                    trajectory.push(t, u.clone());
                } else if n % sim.diagnostics_stride == 0 {
                    trajectory.push_diagnostics(t, &u);
                }
            }
            Ok(SimulationOutcome {
                trajectory,
                final_state: u,
                steps,
                picard: None,
            })
        }
        Scheme::Picard => {
            let cfg = PicardConfig {
                alpha: sim.alpha,
                nodes: sim.picard_quadrature_nodes,
                max_iters: sim.picard_iters,
                cutoff_width: sim.cutoff_width,
                ..PicardConfig::new(sim.alpha)
            };
            let sol = picard_solve(u0, sim.t_end, &cfg)?;
            let centre = cfg.nodes - 1;
            let states = &sol.trajectory.states()[centre..];
            let times = &sol.trajectory.times()[centre..];
            let last = states.len() - 1;
            for (n, (t, u)) in times.iter().zip(states).enumerate().skip(1) {
                guard(n, *t, u, l2_0)?;
                observe(n, *t, u)?;
                if n == last {
                    trajectory.push(*t, u.clone());
                } else if n % sim.diagnostics_stride == 0 {
                    trajectory.push_diagnostics(*t, u);
                }
            }
            Ok(SimulationOutcome {
                trajectory,
                final_state: states[last].clone(),
                steps: last,
                picard: Some(PicardSummary {
                    iterations: sol.iterations,
                    ratios: sol.ratios(),
                    diffs: sol.diffs,
                }),
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct SimulateSummary<'a> {
    alpha: f64,
    scheme: Scheme,
    steps: usize,
    relative_l2_drift: f64,
    initial: Diagnostics,
    last: Diagnostics,
    picard: &'a Option<PicardSummary>,
}

pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let sim = &cfg.sim;
    sim.validate()?;
    let u0 = initial_data(sim.grid()?, &sim.initial)?;
    let out = &cfg.output_dir;
    let ckpt_dir = out.join("checkpoints");
    let mut files = Vec::new();
    let stride = sim.checkpoint_stride;
    let outcome = run_simulation(&u0, sim, &cfg.norms, |n, _, u| {
        if stride > 0 && n % stride == 0 {
            super::ensure_dir(&ckpt_dir)?;
            let path = ckpt_dir.join(format!("state_{n:06}.kp2f"));
            checkpoint::save(&path, &Checkpoint::Spectral(u.clone()))?;
            files.push(path);
        }
        Ok(())
    })?;
    let diags = outcome.trajectory.diagnostics();
    files.push(write_table(
        out,
        "trajectory",
        cfg.format,
        CSV_HEADER,
        diags,
        |d| {
            format!(
                "{:.17e},{:.17e},{:.17e},{:.17e}",
                d.t, d.l2_norm, d.h_s_norm, d.max_abs
            )
        },
    )?);
    let first = diags[0];
    let last = *diags.last().expect("final record");
    let summary = SimulateSummary {
        alpha: sim.alpha,
        scheme: sim.scheme,
        steps: outcome.steps,
        relative_l2_drift: outcome.relative_l2_drift(),
        initial: first,
        last,
        picard: &outcome.picard,
    };
    files.push(write_json(out, "simulate.json", &summary)?);
    let mut lines = vec![
        format!("steps {}  t = {}", outcome.steps, last.t),
        format!(
            "l2 {:.12e}  h_s {:.12e}  max|u| {:.6e}",
            last.l2_norm, last.h_s_norm, last.max_abs
        ),
        format!("relative L2 drift {:.3e}", summary.relative_l2_drift),
    ];
    if let Some(p) = &outcome.picard {
        lines.push(format!(
            "picard iterations {}  ratios {:?}",
            p.iterations, p.ratios
        ));
    }
    Ok(Outcome {
        command: Command::Simulate,
        passed: true,
        lines,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::profiles::{InitialData, Profile};

    fn small(scheme: Scheme) -> SimConfig {
        SimConfig {
            nx: 32,
            ny: 32,
            dt: 0.01,
            t_end: 0.1,
            scheme,
            picard_quadrature_nodes: 11,
            initial: InitialData::Profile {
                profile: Profile::GaussianDx,
                amplitude: 0.1,
                width: 3.0,
            },
            ..SimConfig::default()
        }
    }

    #[test]
    fn zero_data_gives_a_zero_trajectory() {
        for scheme in [Scheme::Etdrk4, Scheme::Picard] {
            let sim = small(scheme);
            let u0 = SpectralField::zeros(sim.grid().unwrap());
            let out =
                run_simulation(&u0, &sim, &NormSettings::default(), |_, _, _| Ok(())).unwrap();
            assert_eq!(out.final_state.l2_norm(), 0.0);
            assert!(out
                .trajectory
                .diagnostics()
                .iter()
                .all(|d| d.l2_norm == 0.0));
        }
    }

    #[test]
    fn blowup_guard_aborts() {
        let sim = SimConfig {
            dt: 0.5,
            t_end: 5.0,
            initial: InitialData::Profile {
                profile: Profile::GaussianDx,
                amplitude: 200.0,
                width: 1.0,
            },
            ..small(Scheme::Etdrk4)
        };
        let u0 = initial_data(sim.grid().unwrap(), &sim.initial).unwrap();
        let r = run_simulation(&u0, &sim, &NormSettings::default(), |_, _, _| Ok(()));
        assert!(
            matches!(r, Err(Error::Instability(_))),
            "{:?}",
            r.map(|o| o.relative_l2_drift())
        );
    }

    #[test]
    fn command_writes_trajectory_and_checkpoints() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            sim: SimConfig {
                checkpoint_stride: 5,
                ..small(Scheme::Etdrk4)
            },
            output_dir: dir.path().to_path_buf(),
            ..ExperimentConfig::default()
        };
        let o = cmd_simulate(&cfg).unwrap();
        assert!(o.passed);
        let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 1 + 11);
        for n in [0, 5, 10] {
            let p = dir.path().join(format!("checkpoints/state_{n:06}.kp2f"));
            assert!(matches!(
                checkpoint::load(&p).unwrap(),
                Checkpoint::Spectral(_)
            ));
        }
    }
}
