//! Empirical Strichartz-type ratio probes.
//!
//! * Linear: `‖|D_x|^{−γ} U_α(t) u0‖_{L^q_t L^r_xy} / ‖u0‖_{L²}` over
//!   `t ∈ [−2, 2]`, with `1/r + 1/q = 1/2` and `γ = (1 − 2/r)(1/2 − α/4)`.
//! * Bilinear: `‖P_{1/3}(u1, u2)‖_{L²} / (‖|D_x|^{1/2} u1‖_{X^{0,0,b}}
//!   ‖|D_x|^{−α/4} u2‖_{X^{0,0,b}})` for free evolutions `u_i = ψ U_α u_{0i}`.
//!
//! Each trial draws random-phase band-limited data; the probe reports the
//! ratio table together with the same table recomputed after zero-padding
//! the same data to a grid of twice the resolution.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::paraproduct::paraproduct_space_time;
use crate::error::{Error, Result};
use crate::grid::{
    apply_real_weight, inverse_transform, project_zero_x_mean, Grid2D, SpectralField,
};
use crate::norms::{bourgain_norm, BourgainWeights, SpaceTimeField};
use crate::propagator::apply_linear;
use crate::sampling::shard_rng;
use crate::sum::pairwise_sum;

/// Time nodes of the linear probe on `[−2, 2]` (Simpson, even intervals).
pub const LINEAR_TIME_INTERVALS: usize = 64;

/// Temporal window and mesh of the bilinear probe.
pub const BILINEAR_WINDOW: f64 = 4.0;
pub const BILINEAR_NT: usize = 128;

pub fn strichartz_gamma(alpha: f64, q: f64, r: f64) -> Result<f64> {
    if !(q > 2.0) || !(r >= 2.0) {
        return Err(Error::Domain(format!(
            "need q > 2 and r ≥ 2, got q = {q}, r = {r}"
        )));
    }
    let inv_q = if q.is_infinite() { 0.0 } else { 1.0 / q };
    if ((1.0 / r + inv_q) - 0.5).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "exponents violate 1/r + 1/q = 1/2: q = {q}, r = {r}"
        )));
    }
    Ok((1.0 - 2.0 / r) * (0.5 - alpha / 4.0))
}

/// Random real field with unit-modulus, uniformly random-phase coefficients
/// on `x_lo ≤ |j| ≤ x_hi`, `|k| ≤ y_band`, zero x-mean.
pub fn random_phase_shell<G: Rng>(
    rng: &mut G,
    grid: Grid2D,
    x_lo: i64,
    x_hi: i64,
    y_band: i64,
) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    for i in 0..grid.nx() {
        let j = grid.mode_x(i).abs();
        for k in 0..grid.ny() {
            if j >= x_lo && j <= x_hi && grid.mode_y(k).abs() <= y_band {
                f.coeffs_mut()[grid.index(i, k)] =
                    Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
            }
        }
    }
    f.symmetrize_real();
    project_zero_x_mean(&f)
}

fn dx_power(f: &SpectralField, p: f64) -> SpectralField {
    apply_real_weight(f, |xi, _| xi.abs().powf(p))
}

/// `‖|D_x|^{−γ} U_α(t) u0‖_{L^q_t L^r_xy} / ‖u0‖_{L²}`; zero for zero data.
pub fn linear_ratio(u0: &SpectralField, alpha: f64, q: f64, r: f64) -> Result<f64> {
    let gamma = strichartz_gamma(alpha, q, r)?;
    let base = u0.l2_norm();
    if base == 0.0 {
        return Ok(0.0);
    }
    let v0 = dx_power(u0, -gamma);
    let n = LINEAR_TIME_INTERVALS;
    let h = 4.0 / n as f64;
    let norms: Vec<f64> = (0..=n)
        .map(|j| inverse_transform(&apply_linear(&v0, -2.0 + j as f64 * h, alpha)).lp_norm(r))
        .collect();
    let mixed = if q.is_infinite() {
        norms.iter().copied().fold(0.0, f64::max)
    } else {
        let terms: Vec<f64> = norms
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let w = if j == 0 || j == n {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * v.powf(q)
            })
            .collect();
        (pairwise_sum(&terms) * h / 3.0).powf(1.0 / q)
    };
    Ok(mixed / base)
}

/// `‖P_{1/3}(u1, u2)‖_{L²} / (‖|D_x|^{1/2}u1‖_{X^{0,0,b}} ‖|D_x|^{−α/4}u2‖_{X^{0,0,b}})`.
pub fn bilinear_ratio(u01: &SpectralField, u02: &SpectralField, alpha: f64, b: f64) -> Result<f64> {
    let u1 = SpaceTimeField::free_evolution(u01, alpha, BILINEAR_WINDOW, BILINEAR_NT)?;
    let u2 = SpaceTimeField::free_evolution(u02, alpha, BILINEAR_WINDOW, BILINEAR_NT)?;
    let p = paraproduct_space_time(&u1, &u2, 1.0 / 3.0)?;
    let sq: Vec<f64> = p.iter().map(|s| s.l2_norm().powi(2)).collect();
    let num = (pairwise_sum(&sq) * u1.dt()).sqrt();
    let w = BourgainWeights {
        s1: 0.0,
        s2: 0.0,
        b,
        sigma: 0.0,
    };
    let d1 = bourgain_norm(&u1.map_slices(|_, s| dx_power(s, 0.5)), alpha, w);
    let d2 = bourgain_norm(&u2.map_slices(|_, s| dx_power(s, -alpha / 4.0)), alpha, w);
    if d1 == 0.0 || d2 == 0.0 {
        return Ok(0.0);
    }
    Ok(num / (d1 * d2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub nx: usize,
    pub ny: usize,
    pub ratios: Vec<f64>,
    pub max: f64,
    pub median: f64,
}

impl RatioTable {
    fn new(grid: &Grid2D, ratios: Vec<f64>) -> Self {
        let mut sorted = ratios.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n == 0 {
            0.0
        } else if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            max: sorted.last().copied().unwrap_or(0.0),
            median,
            ratios,
        }
    }

    pub fn max_over_median(&self) -> f64 {
        if self.median == 0.0 {
            0.0
        } else {
            self.max / self.median
        }
    }
}

/// Ratio tables on the base grid and on the doubled grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub base: RatioTable,
    pub doubled: RatioTable,
}

impl DoublingReport {
    /// `max(2N) / max(N)`.
    pub fn max_drift(&self) -> f64 {
        self.doubled.max / self.base.max
    }

    /// Both tables have max ≤ `factor × median` and the maxima agree to
    /// within `factor`.
    pub fn stable(&self, factor: f64) -> bool {
        let d = self.max_drift();
        self.base.max_over_median() <= factor
            && self.doubled.max_over_median() <= factor
            && d <= factor
            && d >= 1.0 / factor
    }
}

fn doubled(grid: &Grid2D) -> Result<Grid2D> {
    grid.with_resolution(2 * grid.nx(), 2 * grid.ny())
}

/// Linear probe with data on `|j|, |k| ≤ n/8`.
pub fn strichartz_ratio_probe(
    alpha: f64,
    q: f64,
    r: f64,
    n_trials: usize,
    grid: Grid2D,
    seed: u64,
) -> Result<DoublingReport> {
    strichartz_gamma(alpha, q, r)?;
    let fine = doubled(&grid)?;
    let band = (grid.nx().min(grid.ny()) / 8) as i64;
    let mut base = Vec::with_capacity(n_trials);
    let mut dbl = Vec::with_capacity(n_trials);
    for trial in 0..n_trials {
        let mut rng = shard_rng(seed, trial as u64);
        let u0 = random_phase_shell(&mut rng, grid, 1, band, band);
        base.push(linear_ratio(&u0, alpha, q, r)?);
        dbl.push(linear_ratio(&u0.resample(fine)?, alpha, q, r)?);
    }
    Ok(DoublingReport {
        base: RatioTable::new(&grid, base),
        doubled: RatioTable::new(&fine, dbl),
    })
}

/// Bilinear probe: `u01` on the x-shell `1 ≤ |j| ≤ n/16` and `u02` on
/// `3n/16 ≤ |j| ≤ n/4`, both with `|k| ≤ n/8`. Every interacting pair lies
/// inside the paraproduct cut and products are alias-free on both grids.
pub fn bilinear_ratio_probe(
    alpha: f64,
    b: f64,
    n_trials: usize,
    grid: Grid2D,
    seed: u64,
) -> Result<DoublingReport> {
    let fine = doubled(&grid)?;
    let n = grid.nx().min(grid.ny()) as i64;
    let mut base = Vec::with_capacity(n_trials);
    let mut dbl = Vec::with_capacity(n_trials);
    for trial in 0..n_trials {
        let mut rng = shard_rng(seed, trial as u64);
        let lo = (n / 16).max(1);
        let u1 = random_phase_shell(&mut rng, grid, 1, lo, n / 8);
        let u2 = random_phase_shell(&mut rng, grid, 3 * lo, 4 * lo, n / 8);
        base.push(bilinear_ratio(&u1, &u2, alpha, b)?);
        dbl.push(bilinear_ratio(
            &u1.resample(fine)?,
            &u2.resample(fine)?,
            alpha,
            b,
        )?);
    }
    Ok(DoublingReport {
        base: RatioTable::new(&grid, base),
        doubled: RatioTable::new(&fine, dbl),
    })
}
