//! Picard iteration for the windowed Duhamel equation
//!
//! ```text
//! u(t) = ψ(t) U_α(t) u0 + ψ_T(t) ∫_0^t U_α(t − t′) N(u(t′)) dt′,   N(u) = −∂_x(u²)
//! ```
//!
//! on a uniform mesh of `[−T, T]` with `m` nodes on each side of `t = 0`.
//! The integral is evaluated in the interaction picture,
//! `U(t) ∫_0^t U(−t′) N(u(t′)) dt′`, with fourth-order cumulative quadrature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SpectralField;
use crate::propagator::{apply_linear, cutoff_psi, Nonlinearity};
use crate::quadrature::cumulative;
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub alpha: f64,
    /// Nodes per half-window, including `t = 0`.
    pub nodes: usize,
    pub max_iters: usize,
    /// Width of `ψ`; `ψ_T` uses `T·cutoff_width`.
    pub cutoff_width: f64,
    /// Relative stopping threshold on `d_n / sup_t ‖u(t)‖`.
    pub tol: f64,
}

impl PicardConfig {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            nodes: 65,
            max_iters: 40,
            cutoff_width: 1.0,
            tol: 1e-13,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PicardSolution {
    pub t_max: f64,
    pub trajectory: Trajectory,
    /// `d_n = sup_t ‖u^{(n)}(t) − u^{(n−1)}(t)‖_{L²}`, `n = 1, 2, …`.
    pub diffs: Vec<f64>,
    pub iterations: usize,
}

impl PicardSolution {
    /// `d_{n+1} / d_n` for consecutive recorded differences.
    pub fn ratios(&self) -> Vec<f64> {
        contraction_ratios(&self.diffs)
    }

    pub fn at_end(&self) -> &SpectralField {
        self.trajectory.last().expect("non-empty mesh")
    }

    pub fn at_start(&self) -> &SpectralField {
        &self.trajectory.states()[0]
    }
}

pub fn contraction_ratios(diffs: &[f64]) -> Vec<f64> {
    diffs
        .windows(2)
        .map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] })
        .collect()
}

fn sup_distance(a: &[SpectralField], b: &[SpectralField]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.sub(y).expect("shared grid").l2_norm())
        .fold(0.0, f64::max)
}

pub fn picard_solve(u0: &SpectralField, t_max: f64, cfg: &PicardConfig) -> Result<PicardSolution> {
    if !(t_max > 0.0 && t_max <= 1.0) {
        return Err(Error::Domain(format!(
            "Picard window T = {t_max} outside (0, 1]"
        )));
    }
    if cfg.nodes < 3 {
        return Err(Error::Config(
            "Picard needs at least 3 nodes per half-window".into(),
        ));
    }
    let m = cfg.nodes;
    let centre = m - 1;
    let h = t_max / (m - 1) as f64;
    let times: Vec<f64> = (0..2 * m - 1)
        .map(|j| (j as f64 - centre as f64) * h)
        .collect();
    let psi: Vec<f64> = times
        .iter()
        .map(|&t| cutoff_psi(t, cfg.cutoff_width))
        .collect();
    let psi_t: Vec<f64> = times
        .iter()
        .map(|&t| cutoff_psi(t, t_max * cfg.cutoff_width))
        .collect();
    let free: Vec<SpectralField> = times
        .iter()
        .zip(&psi)
        .map(|(&t, &p)| apply_linear(u0, t, cfg.alpha).scale(p.into()))
        .collect();
    let nl = Nonlinearity::new(*u0.grid());
    let grid = *u0.grid();

    let map = |u: &[SpectralField]| -> Vec<SpectralField> {
        let g: Vec<Vec<Complex64>> = u
            .iter()
            .zip(&times)
            .map(|(ui, &t)| apply_linear(&nl.eval(ui), -t, cfg.alpha).into_coeffs())
            .collect();
        let fwd = cumulative(&g[centre..], h);
        let back_samples: Vec<Vec<Complex64>> = g[..=centre].iter().rev().cloned().collect();
        let back = cumulative(&back_samples, -h);
        (0..times.len())
            .map(|j| {
                let integral = if j >= centre {
                    fwd[j - centre].clone()
                } else {
                    back[centre - j].clone()
                };
                let duhamel = apply_linear(
                    &SpectralField::new(grid, integral).expect("grid length"),
                    times[j],
                    cfg.alpha,
                );
                free[j]
                    .add_scaled(&duhamel, psi_t[j].into())
                    .expect("shared grid")
            })
            .collect()
    };

    let mut current = free.clone();
    let mut diffs = Vec::new();
    let mut increases = 0;
    let mut iterations = 0;
    for _ in 0..cfg.max_iters {
        let next = map(&current);
        iterations += 1;
        let d = sup_distance(&next, &current);
        let scale = next.iter().map(|s| s.l2_norm()).fold(0.0, f64::max);
        if !d.is_finite() {
            diffs.push(d);
            return Err(Error::ContractionFailure {
                ratios: contraction_ratios(&diffs),
            });
        }
        if let Some(&prev) = diffs.last() {
            increases = if d > prev { increases + 1 } else { 0 };
        }
        diffs.push(d);
        current = next;
        if increases >= 3 {
            return Err(Error::ContractionFailure {
                ratios: contraction_ratios(&diffs),
            });
        }
        if d == 0.0 || d <= cfg.tol * scale {
            break;
        }
    }

    let mut trajectory = Trajectory::new(0.0, 0.0);
    for (t, s) in times.iter().zip(current) {
        trajectory.push(*t, s);
    }
    Ok(PicardSolution {
        t_max,
        trajectory,
        diffs,
        iterations,
    })
}

/// Halves `T` (starting from `t_start ≤ 1`) until the iteration converges
/// with `d_3/d_2 < 1/2`, or converges before a third difference exists.
pub fn auto_select_time(
    u0: &SpectralField,
    t_start: f64,
    cfg: &PicardConfig,
    max_halvings: usize,
) -> Result<PicardSolution> {
    let mut t = t_start.min(1.0);
    let mut last_err = None;
    for _ in 0..=max_halvings {
        match picard_solve(u0, t, cfg) {
            Ok(sol) => {
                let good = sol.diffs.len() < 3 || sol.diffs[2] < 0.5 * sol.diffs[1];
                if good {
                    return Ok(sol);
                }
                last_err = Some(Error::ContractionFailure {
                    ratios: sol.ratios(),
                });
            }
            Err(e @ Error::ContractionFailure { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        t *= 0.5;
    }
    Err(last_err.expect("at least one attempt"))
}
