//! Temporal order, spatial spectral decay, and the Picard iteration log.

use serde::{Deserialize, Serialize};

use super::profiles::{initial_data, InitialData, Profile};
use super::{write_json, write_table, Command, ExperimentConfig, Outcome};
use crate::error::{Error, Result};
use crate::etdrk4::Etdrk4;
use crate::grid::{Grid2D, SpectralField, DEFAULT_PERIOD};
use crate::picard::{picard_solve, PicardConfig};
use crate::propagator::check_alpha;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeSettings {
    pub alpha: f64,
    /// Temporal study: runs at `dt`, `dt/2`, `dt/4` on an `n × n` grid.
    pub temporal_n: usize,
    pub temporal_dt: f64,
    pub temporal_t_end: f64,
    pub temporal_initial: InitialData,
    pub min_order: f64,
    /// Spatial study: `nx ∈ spatial_sizes` against `nx = spatial_reference`.
    pub spatial_sizes: Vec<usize>,
    pub spatial_reference: usize,
    pub spatial_ny: usize,
    pub spatial_lx: f64,
    pub spatial_ly: f64,
    pub spatial_dt: f64,
    pub spatial_t_end: f64,
    pub spatial_initial: InitialData,
    /// Picard study on an `n × n` grid over `[−T, T]`.
    pub picard_n: usize,
    pub picard_t: f64,
    pub picard_nodes: usize,
    pub picard_initial: InitialData,
}

impl Default for ConvergeSettings {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            temporal_n: 64,
            temporal_dt: 0.1,
            temporal_t_end: 1.0,
            temporal_initial: InitialData::Profile {
                profile: Profile::GaussianDx,
                amplitude: 4.0,
                width: 2.0,
            },
            min_order: 3.7,
            spatial_sizes: vec![64, 128, 256],
            spatial_reference: 512,
            spatial_ny: 64,
            spatial_lx: DEFAULT_PERIOD / 2.0,
            spatial_ly: DEFAULT_PERIOD / 4.0,
            spatial_dt: 0.01,
            spatial_t_end: 0.1,
            spatial_initial: InitialData::Profile {
                profile: Profile::SechDx,
                amplitude: 0.5,
                width: 0.75,
            },
            picard_n: 64,
            picard_t: 0.05,
            picard_nodes: 65,
            picard_initial: InitialData::Profile {
                profile: Profile::GaussianDx,
                amplitude: 1e-2,
                width: 2.0,
            },
        }
    }
}

fn whole_steps(t_end: f64, dt: f64) -> Result<usize> {
    let n = (t_end / dt).round();
    if !(n >= 1.0) || (n * dt - t_end).abs() > 1e-9 * t_end {
        return Err(Error::Config(format!(
            "t_end = {t_end} is not a multiple of dt = {dt}"
        )));
    }
    Ok(n as usize)
}

impl ConvergeSettings {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha).map_err(|e| Error::Config(e.to_string()))?;
        whole_steps(self.temporal_t_end, self.temporal_dt)?;
        whole_steps(self.spatial_t_end, self.spatial_dt)?;
        if self.spatial_sizes.len() < 3
            || self
                .spatial_sizes
                .iter()
                .any(|&n| n >= self.spatial_reference)
        {
            return Err(Error::Config(
                "need ≥ 3 spatial sizes, all below the reference".into(),
            ));
        }
        if !(self.picard_t > 0.0 && self.picard_t <= 1.0) || self.picard_nodes < 3 {
            return Err(Error::Config(
                "picard_t must lie in (0, 1] and picard_nodes ≥ 3".into(),
            ));
        }
        let sq = |n: usize| Grid2D::new(n, n, DEFAULT_PERIOD, DEFAULT_PERIOD);
        sq(self.temporal_n)
            .and(sq(self.picard_n))
            .map_err(|e| Error::Config(e.to_string()))?;
        for &n in self.spatial_sizes.iter().chain([&self.spatial_reference]) {
            Grid2D::new(n, self.spatial_ny, self.spatial_lx, self.spatial_ly)
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub dt: f64,
    /// `‖u_dt − u_{dt/2}‖ / ‖u_{dt/2}‖`.
    pub difference: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialRow {
    pub nx: usize,
    /// Relative L² distance to the reference resolution.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardLog {
    pub t_max: f64,
    pub diffs: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Ratios `d_{n+1}/d_n`, `n ≥ 2`, taken while `d_n` is above round-off.
    pub asymptotic_ratio: f64,
    /// Relative L² distance between the fixed point and ETDRK4 at `t = T`.
    pub etdrk4_mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub order_table: Vec<OrderRow>,
    pub observed_order: f64,
    pub spatial: Vec<SpatialRow>,
    pub spatial_superalgebraic: bool,
    pub picard: PicardLog,
    pub passed: bool,
}

fn relative(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).expect("shared grid").l2_norm() / b.l2_norm()
}

/// Runs at `dt`, `dt/2`, `dt/4` and returns the two successive differences
/// and the observed order `log2(e1/e2)`.
pub fn temporal_order(
    u0: &SpectralField,
    alpha: f64,
    dt: f64,
    t_end: f64,
) -> Result<(Vec<OrderRow>, f64)> {
    let steps = whole_steps(t_end, dt)?;
    let runs: Vec<SpectralField> = (0..3)
        .map(|j| {
            let f = 1usize << j;
            Etdrk4::new(*u0.grid(), alpha, dt / f as f64).advance(u0, steps * f)
        })
        .collect();
    let rows = vec![
        OrderRow {
            dt,
            difference: relative(&runs[0], &runs[1]),
        },
        OrderRow {
            dt: dt / 2.0,
            difference: relative(&runs[1], &runs[2]),
        },
    ];
    let order = (rows[0].difference / rows[1].difference).log2();
    Ok((rows, order))
}

/// Error of each `nx` against the reference, with `ny`, `dt` and the torus fixed.
pub fn spatial_study(s: &ConvergeSettings) -> Result<Vec<SpatialRow>> {
    let steps = whole_steps(s.spatial_t_end, s.spatial_dt)?;
    let run = |nx: usize| -> Result<SpectralField> {
        let g = Grid2D::new(nx, s.spatial_ny, s.spatial_lx, s.spatial_ly)?;
        let u0 = initial_data(g, &s.spatial_initial)?;
        Ok(Etdrk4::new(g, s.alpha, s.spatial_dt).advance(&u0, steps))
    };
    let reference = run(s.spatial_reference)?;
    s.spatial_sizes
        .iter()
        .map(|&nx| {
            let u = run(nx)?.resample(*reference.grid())?;
            Ok(SpatialRow {
                nx,
                error: relative(&u, &reference),
            })
        })
        .collect()
}

/// Successive error ratios shrink: `e(n_{j+2})/e(n_{j+1}) < e(n_{j+1})/e(n_j)`.
pub fn decays_superalgebraically(rows: &[SpatialRow]) -> bool {
    rows.windows(3)
        .all(|w| w[2].error / w[1].error < w[1].error / w[0].error)
}

/// Relative round-off floor below which contraction ratios are not recorded.
const PICARD_NOISE_FLOOR: f64 = 1e-11;

pub fn picard_study(s: &ConvergeSettings) -> Result<PicardLog> {
    let g = Grid2D::square(s.picard_n)?;
    let u0 = initial_data(g, &s.picard_initial)?;
    let cfg = PicardConfig {
        nodes: s.picard_nodes,
        ..PicardConfig::new(s.alpha)
    };
    let sol = picard_solve(&u0, s.picard_t, &cfg)?;
    let scale = sol
        .trajectory
        .states()
        .iter()
        .map(|u| u.l2_norm())
        .fold(0.0, f64::max);
    let ratios = sol.ratios();
    let asymptotic_ratio = ratios
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(j, _)| sol.diffs[*j] > PICARD_NOISE_FLOOR * scale)
        .map(|(_, r)| *r)
        .fold(0.0, f64::max);
    let steps = cfg.nodes - 1;
    let e = Etdrk4::new(g, s.alpha, s.picard_t / steps as f64).advance(&u0, steps);
    Ok(PicardLog {
        t_max: s.picard_t,
        etdrk4_mismatch: relative(sol.at_end(), &e),
        ratios,
        asymptotic_ratio,
        diffs: sol.diffs,
    })
}

pub fn converge_report(s: &ConvergeSettings) -> Result<ConvergeReport> {
    s.validate()?;
    let g = Grid2D::square(s.temporal_n)?;
    let u0 = initial_data(g, &s.temporal_initial)?;
    let (order_table, observed_order) =
        temporal_order(&u0, s.alpha, s.temporal_dt, s.temporal_t_end)?;
    let spatial = spatial_study(s)?;
    let spatial_superalgebraic = decays_superalgebraically(&spatial);
    let picard = picard_study(s)?;
    let passed =
        observed_order >= s.min_order && spatial_superalgebraic && picard.asymptotic_ratio < 0.5;
    Ok(ConvergeReport {
        order_table,
        observed_order,
        spatial,
        spatial_superalgebraic,
        picard,
        passed,
    })
}

pub fn cmd_converge(cfg: &ExperimentConfig) -> Result<Outcome> {
    let r = converge_report(&cfg.converge)?;
    let out = &cfg.output_dir;
    let files = vec![
        write_table(
            out,
            "order",
            cfg.format,
            "dt,difference",
            &r.order_table,
            |o| format!("{:.17e},{:.17e}", o.dt, o.difference),
        )?,
        write_table(out, "spatial", cfg.format, "nx,error", &r.spatial, |o| {
            format!("{},{:.17e}", o.nx, o.error)
        })?,
        write_json(out, "converge.json", &r)?,
    ];
    let mut lines = vec![format!(
        "observed temporal order {:.4} (min {})",
        r.observed_order, cfg.converge.min_order
    )];
    lines.extend(
        r.spatial
            .iter()
            .map(|s| format!("nx {:4}: error {:.3e}", s.nx, s.error)),
    );
    lines.push(format!(
        "spatial decay faster than any power: {}",
        r.spatial_superalgebraic
    ));
    lines.push(format!(
        "picard: {} iterations, worst ratio {:.3e}, etdrk4 mismatch {:.3e}",
        r.picard.diffs.len(),
        r.picard.asymptotic_ratio,
        r.picard.etdrk4_mismatch
    ));
    Ok(Outcome {
        command: Command::Converge,
        passed: r.passed,
        lines,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_test() {
        let rows = |e: [f64; 3]| {
            e.iter()
                .zip([64, 128, 256])
                .map(|(&error, nx)| SpatialRow { nx, error })
                .collect::<Vec<_>>()
        };
        assert!(decays_superalgebraically(&rows([1e-2, 1e-4, 1e-8])));
        assert!(!decays_superalgebraically(&rows([1e-2, 1e-3, 1e-4])));
    }

    #[test]
    fn bad_settings_are_rejected() {
        let s = ConvergeSettings {
            spatial_sizes: vec![64, 128, 512],
            ..ConvergeSettings::default()
        };
        assert!(s.validate().is_err());
        let s = ConvergeSettings {
            picard_t: 2.0,
            ..ConvergeSettings::default()
        };
        assert!(s.validate().is_err());
    }
}
