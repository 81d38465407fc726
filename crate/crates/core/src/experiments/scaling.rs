//! Scaling symmetry `u_λ(t, x, y) = λ^α u(λ^{α+1} t, λx, λ^{α/2+1} y)`.
//!
//! Two checks: the homogeneous-norm exponent on initial data, and agreement
//! of an independent simulation of `u_λ(0)` on the shrunken torus with the
//! rescaled original trajectory.

use serde::{Deserialize, Serialize};

use super::profiles::{initial_data, InitialData};
use super::{write_json, write_table, Command, ExperimentConfig, Outcome};
use crate::error::{Error, Result};
use crate::etdrk4::Etdrk4;
use crate::grid::{
    forward_transform, inverse_transform, Grid2D, PhysicalField, SpectralField, DEFAULT_PERIOD,
};
use crate::norms::homogeneous_norm;
use crate::propagator::check_alpha;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingCase {
    pub alpha: f64,
    pub s1: f64,
    pub s2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingSettings {
    pub lambda: f64,
    pub cases: Vec<ScalingCase>,
    pub trajectory_alphas: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dt: f64,
    pub t_end: f64,
    pub initial: InitialData,
    pub exponent_tol: f64,
    pub trajectory_tol: f64,
}

impl Default for ScalingSettings {
    fn default() -> Self {
        let case = |alpha, s1, s2| ScalingCase { alpha, s1, s2 };
        Self {
            lambda: 2.0,
            cases: vec![
                case(2.0, 0.0, 0.0),
                case(2.0, -0.5, 0.0),
                case(4.0, 0.0, 0.0),
                case(4.0, -1.2, 0.5),
                case(3.0, 0.25, 0.5),
                case(1.5, -0.2, 1.0),
            ],
            trajectory_alphas: vec![2.0, 4.0],
            nx: 64,
            ny: 64,
            lx: DEFAULT_PERIOD,
            ly: DEFAULT_PERIOD,
            dt: 0.01,
            t_end: 0.2,
            initial: InitialData::default(),
            exponent_tol: 1e-9,
            trajectory_tol: 1e-5,
        }
    }
}

impl ScalingSettings {
    pub fn grid(&self) -> Result<Grid2D> {
        Grid2D::new(self.nx, self.ny, self.lx, self.ly).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn steps(&self) -> Result<usize> {
        let n = (self.t_end / self.dt).round();
        if !(n >= 1.0) || (n * self.dt - self.t_end).abs() > 1e-9 * self.t_end {
            return Err(Error::Config(format!(
                "t_end = {} is not a multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        check_representable(self.lambda)?;
        for a in self
            .cases
            .iter()
            .map(|c| c.alpha)
            .chain(self.trajectory_alphas.iter().copied())
        {
            check_alpha(a).map_err(|e| Error::Config(e.to_string()))?;
        }
        self.grid()?;
        self.steps()?;
        Ok(())
    }
}

/// `λ` must be `2^k` for a nonzero integer `k`, so the scaled torus lengths
/// and time steps stay exact in binary floating point.
pub fn check_representable(lambda: f64) -> Result<()> {
    let k = lambda.log2();
    if lambda > 0.0 && lambda.is_finite() && k != 0.0 && k.fract() == 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "scaling factor λ = {lambda} is not a nonzero integer power of two"
        )))
    }
}

/// `3α/4 − 1 + s1 + (1 + α/2) s2`.
pub fn predicted_exponent(alpha: f64, s1: f64, s2: f64) -> f64 {
    0.75 * alpha - 1.0 + s1 + (1.0 + 0.5 * alpha) * s2
}

/// Torus `(lx/λ, ly/λ^{α/2+1})` at the same resolution.
pub fn scaled_grid(g: &Grid2D, lambda: f64, alpha: f64) -> Result<Grid2D> {
    Grid2D::new(
        g.nx(),
        g.ny(),
        g.lx() / lambda,
        g.ly() / lambda.powf(0.5 * alpha + 1.0),
    )
}

/// `λ^α u(λx, λ^{α/2+1}y)` on the scaled torus.
pub fn scaled_initial_data(u: &SpectralField, lambda: f64, alpha: f64) -> Result<SpectralField> {
    let g = scaled_grid(u.grid(), lambda, alpha)?;
    let factor = lambda.powf(alpha);
    let values = inverse_transform(u)
        .into_values()
        .into_iter()
        .map(|v| v * factor)
        .collect();
    let mut f = forward_transform(&PhysicalField::new(g, values)?);
    f.symmetrize_real();
    Ok(f)
}

/// `log(‖u_λ‖ / ‖u‖) / log λ` in the homogeneous `Ḣ^{s1,s2}` norm.
pub fn norm_scaling_exponent(
    u: &SpectralField,
    lambda: f64,
    alpha: f64,
    s1: f64,
    s2: f64,
) -> Result<f64> {
    let ul = scaled_initial_data(u, lambda, alpha)?;
    let a = homogeneous_norm(u, s1, s2)?;
    let b = homogeneous_norm(&ul, s1, s2)?;
    if a == 0.0 {
        return Err(Error::Domain("scaling exponent of a zero norm".into()));
    }
    Ok((b / a).ln() / lambda.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub alpha: f64,
    pub s1: f64,
    pub s2: f64,
    pub predicted: f64,
    pub measured: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryComparison {
    pub alpha: f64,
    pub lambda: f64,
    pub steps: usize,
    /// Largest relative L² mismatch over all matched times.
    pub max_relative_l2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub lambda: f64,
    pub rows: Vec<ScalingRow>,
    pub trajectories: Vec<TrajectoryComparison>,
    pub passed: bool,
}

/// Simulates `u` on `g` and `u_λ` on the scaled torus with `dt/λ^{α+1}`,
/// comparing `scaled(u(t))` with `u_λ(t/λ^{α+1})` after every step.
pub fn compare_trajectories(
    u0: &SpectralField,
    lambda: f64,
    alpha: f64,
    dt: f64,
    steps: usize,
) -> Result<TrajectoryComparison> {
    let time_factor = lambda.powf(alpha + 1.0);
    let ul0 = scaled_initial_data(u0, lambda, alpha)?;
    let a = Etdrk4::new(*u0.grid(), alpha, dt);
    let b = Etdrk4::new(*ul0.grid(), alpha, dt / time_factor);
    let (mut u, mut v) = (u0.clone(), ul0);
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        u = a.step(&u);
        v = b.step(&v);
        let mapped = scaled_initial_data(&u, lambda, alpha)?;
        let denom = mapped.l2_norm();
        if denom > 0.0 {
            worst = worst.max(mapped.sub(&v)?.l2_norm() / denom);
        }
    }
    Ok(TrajectoryComparison {
        alpha,
        lambda,
        steps,
        max_relative_l2: worst,
    })
}

pub fn scaling_report(s: &ScalingSettings) -> Result<ScalingReport> {
    s.validate()?;
    let g = s.grid()?;
    let u0 = initial_data(g, &s.initial)?;
    let mut rows = Vec::with_capacity(s.cases.len());
    for c in &s.cases {
        let measured = norm_scaling_exponent(&u0, s.lambda, c.alpha, c.s1, c.s2)?;
        let predicted = predicted_exponent(c.alpha, c.s1, c.s2);
        rows.push(ScalingRow {
            alpha: c.alpha,
            s1: c.s1,
            s2: c.s2,
            predicted,
            measured,
            error: (measured - predicted).abs(),
        });
    }
    let steps = s.steps()?;
    let trajectories = s
        .trajectory_alphas
        .iter()
        .map(|&a| compare_trajectories(&u0, s.lambda, a, s.dt, steps))
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.error <= s.exponent_tol)
        && trajectories
            .iter()
            .all(|t| t.max_relative_l2 <= s.trajectory_tol);
    Ok(ScalingReport {
        lambda: s.lambda,
        rows,
        trajectories,
        passed,
    })
}

pub fn cmd_scaling_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let report = scaling_report(&cfg.scaling)?;
    let out = &cfg.output_dir;
    let files = vec![
        write_table(
            out,
            "scaling",
            cfg.format,
            "alpha,s1,s2,predicted,measured,error",
            &report.rows,
            |r| {
                format!(
                    "{},{},{},{:.17e},{:.17e},{:.3e}",
                    r.alpha, r.s1, r.s2, r.predicted, r.measured, r.error
                )
            },
        )?,
        write_json(out, "scaling.json", &report)?,
    ];
    let mut lines: Vec<String> = report
        .rows
        .iter()
        .map(|r| {
            format!(
                "alpha {} s1 {} s2 {}: exponent {:.12} (predicted {:.12}, error {:.1e})",
                r.alpha, r.s1, r.s2, r.measured, r.predicted, r.error
            )
        })
        .collect();
    lines.extend(report.trajectories.iter().map(|t| {
        format!(
            "alpha {} rescaled trajectory mismatch {:.3e} over {} steps",
            t.alpha, t.max_relative_l2, t.steps
        )
    }));
    Ok(Outcome {
        command: Command::Scaling,
        passed: report.passed,
        lines,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representability_rule() {
        assert!(check_representable(2.0).is_ok());
        assert!(check_representable(0.25).is_ok());
        assert!(check_representable(3.0).is_err());
        assert!(check_representable(1.0).is_err());
        assert!(check_representable(-2.0).is_err());
    }

    #[test]
    fn predicted_exponents() {
        assert_eq!(predicted_exponent(2.0, 0.0, 0.0), 0.5);
        assert_eq!(predicted_exponent(2.0, -0.5, 0.0), 0.0);
    }

    #[test]
    fn measured_exponent_matches_on_small_grid() {
        let g = Grid2D::square(32).unwrap();
        let u = initial_data(g, &InitialData::default()).unwrap();
        for (a, s1, s2) in [(2.0, 0.0, 0.0), (4.0, -1.2, 0.5)] {
            let m = norm_scaling_exponent(&u, 2.0, a, s1, s2).unwrap();
            assert!((m - predicted_exponent(a, s1, s2)).abs() < 1e-12, "{m}");
        }
    }
}
