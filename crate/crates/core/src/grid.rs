//! Periodic grids, continuum-normalised Fourier transforms and multipliers.
//!
//! Fields live on the torus `[0, lx) × [0, ly)` sampled at `nx × ny` points.
//! Arrays are row-major with the x index outermost: entry `(i, k)` sits at
//! `i * ny + k`. Spectral arrays use the native FFT ordering, so index `i`
//! carries the signed mode number `i` for `i < nx/2` and `i - nx` otherwise.
//!
//! The transform pair is the unitary continuum convention
//!
//! ```text
//! û(ξ, η) = (2π)^{-1} Σ u(x, y) e^{-i(ξx + ηy)} dμ_x
//! u(x, y) = (2π)^{-1} Σ û(ξ, η) e^{+i(ξx + ηy)} dμ_ξ
//! ```
//!
//! with `dμ_x = lx·ly/(nx·ny)` and `dμ_ξ = (2π/lx)(2π/ly)`, so that
//! `Σ|u|² dμ_x = Σ|û|² dμ_ξ` and norms of resampled fields scale exactly as
//! their continuum counterparts.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::pairwise_sum_by;

/// Default torus period in both directions.
pub const DEFAULT_PERIOD: f64 = 32.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be even and at least 4"
                )));
            }
        }
        for (name, l) in [("lx", lx), ("ly", ly)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} = {l} must be positive")));
            }
        }
        Ok(Self { nx, ny, lx, ly })
    }

    /// Square grid on the default `32π × 32π` torus.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, DEFAULT_PERIOD, DEFAULT_PERIOD)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i: usize, k: usize) -> usize {
        i * self.ny + k
    }

    /// Signed mode number of FFT index `i` along x, in `[-nx/2, nx/2)`.
    #[inline]
    pub fn mode_x(&self, i: usize) -> i64 {
        signed_mode(i, self.nx)
    }

    #[inline]
    pub fn mode_y(&self, k: usize) -> i64 {
        signed_mode(k, self.ny)
    }

    /// Wavenumber `ξ_i = 2π j / lx`.
    #[inline]
    pub fn xi(&self, i: usize) -> f64 {
        2.0 * PI * self.mode_x(i) as f64 / self.lx
    }

    /// Wavenumber `η_k = 2π k / ly`.
    #[inline]
    pub fn eta(&self, k: usize) -> f64 {
        2.0 * PI * self.mode_y(k) as f64 / self.ly
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.lx / self.nx as f64
    }

    #[inline]
    pub fn y(&self, k: usize) -> f64 {
        k as f64 * self.ly / self.ny as f64
    }

    /// Physical cell measure `lx·ly/(nx·ny)`.
    pub fn physical_measure(&self) -> f64 {
        self.lx * self.ly / (self.nx * self.ny) as f64
    }

    /// Frequency cell measure `(2π/lx)(2π/ly)`.
    pub fn spectral_measure(&self) -> f64 {
        (2.0 * PI / self.lx) * (2.0 * PI / self.ly)
    }

    /// FFT index of the signed x mode `j`, if it exists on this grid.
    pub fn index_of_mode_x(&self, j: i64) -> Option<usize> {
        index_of_mode(j, self.nx)
    }

    pub fn index_of_mode_y(&self, k: i64) -> Option<usize> {
        index_of_mode(k, self.ny)
    }

    /// Index of the mode `(-ξ, -η)` paired with `(i, k)` under conjugation.
    #[inline]
    pub fn conjugate_index(&self, i: usize, k: usize) -> usize {
        self.index((self.nx - i) % self.nx, (self.ny - k) % self.ny)
    }

    /// Same torus with a different resolution.
    pub fn with_resolution(&self, nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, self.lx, self.ly)
    }
}

fn signed_mode(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn index_of_mode(j: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if j < -half || j >= half {
        return None;
    }
    Some(if j >= 0 {
        j as usize
    } else {
        (j + n as i64) as usize
    })
}

/// Samples of a (possibly complex) field on the physical grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: Grid2D,
    values: Vec<Complex64>,
}

impl PhysicalField {
    pub fn new(grid: Grid2D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_real(grid: Grid2D, values: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Samples `f(x, y)` at the grid points.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: Grid2D, f: F) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            for k in 0..grid.ny() {
                values.push(Complex64::new(f(grid.x(i), grid.y(k)), 0.0));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `(Σ |u|² dμ_x)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let v = &self.values;
        (pairwise_sum_by(v.len(), &|i| v[i].norm_sqr()) * self.grid.physical_measure()).sqrt()
    }

    /// `(Σ |u|^p dμ_x)^{1/p}` for finite `p ≥ 1`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let v = &self.values;
        let s = pairwise_sum_by(v.len(), &|i| v[i].norm().powf(p));
        (s * self.grid.physical_measure()).powf(1.0 / p)
    }
}

/// Fourier coefficients indexed by `(ξ_i, η_k)` in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid2D,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid2D, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// A single Fourier mode with signed mode numbers `(j, k)`.
    pub fn single_mode(grid: Grid2D, j: i64, k: i64, value: Complex64) -> Result<Self> {
        let (i, kk) = match (grid.index_of_mode_x(j), grid.index_of_mode_y(k)) {
            (Some(i), Some(kk)) => (i, kk),
            _ => return Err(Error::Domain(format!("mode ({j}, {k}) not on grid"))),
        };
        let mut f = Self::zeros(grid);
        f.coeffs[grid.index(i, kk)] = value;
        Ok(f)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    pub fn at(&self, i: usize, k: usize) -> Complex64 {
        self.coeffs[self.grid.index(i, k)]
    }

    /// Spectral `L²` norm `(Σ |û|² dμ_ξ)^{1/2}` over all modes.
    pub fn l2_norm(&self) -> f64 {
        let c = &self.coeffs;
        (pairwise_sum_by(c.len(), &|i| c[i].norm_sqr()) * self.grid.spectral_measure()).sqrt()
    }

    /// Largest coefficient magnitude on the `ξ = 0` column.
    pub fn zero_mode_content(&self) -> f64 {
        (0..self.grid.ny()).fold(0.0, |m, k| m.max(self.at(0, k).norm()))
    }

    /// Largest violation of `û(-ξ,-η) = conj(û(ξ,η))`.
    pub fn hermitian_defect(&self) -> f64 {
        let g = self.grid;
        let mut worst: f64 = 0.0;
        for i in 0..g.nx() {
            for k in 0..g.ny() {
                let a = self.coeffs[g.index(i, k)];
                let b = self.coeffs[g.conjugate_index(i, k)];
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: Complex64) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + factor * b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    pub fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Averages every coefficient with the conjugate of its reflection, so
    /// the field represents real data exactly.
    pub fn symmetrize_real(&mut self) {
        let g = self.grid;
        let old = self.coeffs.clone();
        for i in 0..g.nx() {
            for k in 0..g.ny() {
                let a = old[g.index(i, k)];
                let b = old[g.conjugate_index(i, k)];
                self.coeffs[g.index(i, k)] = 0.5 * (a + b.conj());
            }
        }
    }

    /// Spectral interpolation / truncation onto another resolution of the
    /// same torus. Modes present on both grids are copied; the rest are zero.
    pub fn resample(&self, target: Grid2D) -> Result<Self> {
        if target.lx() != self.grid.lx() || target.ly() != self.grid.ly() {
            return Err(Error::GridMismatch);
        }
        let mut out = Self::zeros(target);
        for i in 0..self.grid.nx() {
            let Some(ti) = target.index_of_mode_x(self.grid.mode_x(i)) else {
                continue;
            };
            for k in 0..self.grid.ny() {
                if let Some(tk) = target.index_of_mode_y(self.grid.mode_y(k)) {
                    out.coeffs[target.index(ti, tk)] = self.at(i, k);
                }
            }
        }
        Ok(out)
    }

    /// Reinterprets the coefficient array on a different torus with the same
    /// resolution.
    pub fn with_grid(self, grid: Grid2D) -> Result<Self> {
        Self::new(grid, self.coeffs)
    }
}

fn fft_plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    type Cache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, direction == FftDirection::Forward);
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

/// 1D FFT plan shared across calls, exposed for the temporal transforms.
pub(crate) fn plan_1d(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    fft_plan(n, direction)
}

/// Unnormalised in-place 2D DFT of a row-major `nx × ny` buffer.
fn fft2_in_place(data: &mut [Complex64], nx: usize, ny: usize, direction: FftDirection) {
    fft_plan(ny, direction).process(data);
    let mut transposed = vec![Complex64::new(0.0, 0.0); nx * ny];
    for i in 0..nx {
        for k in 0..ny {
            transposed[k * nx + i] = data[i * ny + k];
        }
    }
    fft_plan(nx, direction).process(&mut transposed);
    for k in 0..ny {
        for i in 0..nx {
            data[i * ny + k] = transposed[k * nx + i];
        }
    }
}

/// Continuum-normalised forward transform. The `ξ = 0` column is kept;
/// use [`project_zero_x_mean`] to remove it.
pub fn forward_transform(f: &PhysicalField) -> SpectralField {
    let g = f.grid;
    let mut data = f.values.clone();
    fft2_in_place(&mut data, g.nx(), g.ny(), FftDirection::Forward);
    let scale = g.physical_measure() / (2.0 * PI);
    for v in &mut data {
        *v *= scale;
    }
    SpectralField {
        grid: g,
        coeffs: data,
    }
}

/// Checked variant of [`forward_transform`] for raw arrays.
pub fn forward_transform_values(grid: Grid2D, values: Vec<Complex64>) -> Result<SpectralField> {
    Ok(forward_transform(&PhysicalField::new(grid, values)?))
}

/// Exact inverse of [`forward_transform`] up to round-off.
pub fn inverse_transform(f: &SpectralField) -> PhysicalField {
    let g = f.grid;
    let mut data = f.coeffs.clone();
    fft2_in_place(&mut data, g.nx(), g.ny(), FftDirection::Inverse);
    let scale = g.spectral_measure() / (2.0 * PI);
    for v in &mut data {
        *v *= scale;
    }
    PhysicalField {
        grid: g,
        values: data,
    }
}

/// Zeroes every `(0, η_k)` coefficient; all other coefficients are untouched.
pub fn project_zero_x_mean(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    project_zero_x_mean_in_place(&mut out);
    out
}

pub fn project_zero_x_mean_in_place(f: &mut SpectralField) {
    let ny = f.grid.ny();
    for v in &mut f.coeffs[..ny] {
        *v = Complex64::new(0.0, 0.0);
    }
}

/// Multiplies each `ξ ≠ 0` coefficient by `m(ξ, η)`. The `ξ = 0` column is
/// not visited and is returned as zero.
pub fn apply_multiplier<M>(f: &SpectralField, m: M) -> Result<SpectralField>
where
    M: Fn(f64, f64) -> Complex64,
{
    let g = f.grid;
    let mut out = SpectralField::zeros(g);
    for i in 1..g.nx() {
        let xi = g.xi(i);
        for k in 0..g.ny() {
            let eta = g.eta(k);
            let factor = m(xi, eta);
            if !(factor.re.is_finite() && factor.im.is_finite()) {
                return Err(Error::Domain(format!(
                    "multiplier not finite at mode (ξ = {xi}, η = {eta})"
                )));
            }
            let idx = g.index(i, k);
            out.coeffs[idx] = factor * f.coeffs[idx];
        }
    }
    Ok(out)
}

/// Real-valued multiplier variant that cannot fail for finite symbols.
pub(crate) fn apply_real_weight<M>(f: &SpectralField, m: M) -> SpectralField
where
    M: Fn(f64, f64) -> f64,
{
    let g = f.grid;
    let mut out = SpectralField::zeros(g);
    for i in 1..g.nx() {
        let xi = g.xi(i);
        for k in 0..g.ny() {
            let idx = g.index(i, k);
            out.coeffs[idx] = f.coeffs[idx] * m(xi, g.eta(k));
        }
    }
    out
}

/// Mask of modes kept by the two-thirds rule: `|j| ≤ nx/3` and `|k| ≤ ny/3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DealiasMask {
    grid_nx: usize,
    grid_ny: usize,
    keep: Vec<bool>,
}

impl DealiasMask {
    pub fn keeps(&self, i: usize, k: usize) -> bool {
        self.keep[i * self.grid_ny + k]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.keep
    }

    pub fn apply(&self, f: &mut SpectralField) {
        debug_assert_eq!(f.grid.nx(), self.grid_nx);
        for (c, &k) in f.coeffs.iter_mut().zip(&self.keep) {
            if !k {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
}

pub fn dealias_mask(grid: &Grid2D) -> DealiasMask {
    let jmax = (grid.nx() / 3) as i64;
    let kmax = (grid.ny() / 3) as i64;
    let mut keep = Vec::with_capacity(grid.len());
    for i in 0..grid.nx() {
        for k in 0..grid.ny() {
            keep.push(grid.mode_x(i).abs() <= jmax && grid.mode_y(k).abs() <= kmax);
        }
    }
    DealiasMask {
        grid_nx: grid.nx(),
        grid_ny: grid.ny(),
        keep,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_physical(grid: Grid2D, seed: u64) -> PhysicalField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        PhysicalField::new(grid, values).unwrap()
    }

    #[test]
    fn rejects_odd_or_small_grids() {
        assert!(Grid2D::new(5, 8, 1.0, 1.0).is_err());
        assert!(Grid2D::new(2, 8, 1.0, 1.0).is_err());
        assert!(Grid2D::new(8, 8, 0.0, 1.0).is_err());
        assert!(Grid2D::new(8, 8, 1.0, 1.0).is_ok());
    }

    #[test]
    fn wavenumbers_symmetric_except_nyquist() {
        let g = Grid2D::new(8, 6, 2.0 * PI, 4.0 * PI).unwrap();
        let modes: Vec<i64> = (0..8).map(|i| g.mode_x(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.eta(1), 0.5);
        assert_eq!(g.xi(7), -1.0);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let g = Grid2D::new(4, 4, 1.0, 1.0).unwrap();
        let err = forward_transform_values(g, vec![Complex64::new(0.0, 0.0); 15]);
        assert!(matches!(
            err,
            Err(Error::Shape {
                expected: 16,
                actual: 15
            })
        ));
    }

    #[test]
    fn zero_field_transforms_to_zero() {
        let g = Grid2D::square(16).unwrap();
        let f = forward_transform(&PhysicalField::zeros(g));
        assert!(f.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn cosine_has_two_equal_modes() {
        let g = Grid2D::new(16, 8, 3.0, 5.0).unwrap();
        let lx = g.lx();
        let f = forward_transform(&PhysicalField::from_fn(g, |x, _| (2.0 * PI * x / lx).cos()));
        let big: Vec<(i64, i64)> = (0..g.nx())
            .flat_map(|i| (0..g.ny()).map(move |k| (i, k)))
            .filter(|&(i, k)| f.at(i, k).norm() > 1e-12)
            .map(|(i, k)| (g.mode_x(i), g.mode_y(k)))
            .collect();
        assert_eq!(big, vec![(1, 0), (-1, 0)]);
        let a = f.at(1, 0).norm();
        let b = f.at(g.nx() - 1, 0).norm();
        assert!((a - b).abs() < 1e-14);
        // Half the integral of a unit amplitude over the torus, unitary normalisation.
        assert!((a - 0.5 * lx * g.ly() / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn round_trip_and_parseval_on_all_sizes() {
        for n in [16usize, 32, 64, 128, 256] {
            let g = Grid2D::square(n).unwrap();
            let f = random_physical(g, n as u64);
            let spec = forward_transform(&f);
            let back = inverse_transform(&spec);
            let err = back
                .values()
                .iter()
                .zip(f.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            assert!(err / f.max_abs() <= 1e-12, "n = {n}: round trip {err}");
            let rel = (spec.l2_norm() - f.l2_norm()).abs() / f.l2_norm();
            assert!(rel <= 1e-12, "n = {n}: Parseval {rel}");
        }
    }

    #[test]
    fn single_mode_inverts_to_exponential() {
        let g = Grid2D::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let f = SpectralField::single_mode(g, 2, -1, Complex64::new(1.0, 0.0)).unwrap();
        let u = inverse_transform(&f);
        let scale = g.spectral_measure() / (2.0 * PI);
        for i in 0..8 {
            for k in 0..8 {
                let phase = 2.0 * g.x(i) - g.y(k);
                let expected = Complex64::from_polar(scale, phase);
                assert!((u.values()[g.index(i, k)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hermitian_input_gives_real_output() {
        let g = Grid2D::square(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let coeffs = (0..g.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut f = SpectralField::new(g, coeffs).unwrap();
        f.symmetrize_real();
        assert!(f.hermitian_defect() < 1e-15);
        assert!(inverse_transform(&f).max_imag() <= 1e-12);
    }

    #[test]
    fn projection_properties() {
        let g = Grid2D::square(16).unwrap();
        let f = forward_transform(&random_physical(g, 9));
        let p = project_zero_x_mean(&f);
        assert_eq!(p.zero_mode_content(), 0.0);
        assert_eq!(project_zero_x_mean(&p), p);
        assert!(p.l2_norm() <= f.l2_norm());
        // ξ = 0 content only -> zero
        let mut only_zero = SpectralField::zeros(g);
        only_zero.coeffs_mut()[3] = Complex64::new(1.0, 2.0);
        assert!(project_zero_x_mean(&only_zero)
            .coeffs()
            .iter()
            .all(|c| c.norm() == 0.0));
        // nothing on ξ = 0 -> bit-for-bit unchanged
        assert_eq!(project_zero_x_mean(&p), p);
    }

    #[test]
    fn derivative_multiplier_on_cosine() {
        let g = Grid2D::new(32, 8, 4.0, 2.0).unwrap();
        let kx = 2.0 * PI / g.lx();
        let f = forward_transform(&PhysicalField::from_fn(g, |x, _| (kx * x).cos()));
        let d = apply_multiplier(&f, |xi, _| Complex64::new(0.0, xi)).unwrap();
        let u = inverse_transform(&d);
        for i in 0..g.nx() {
            for k in 0..g.ny() {
                let expected = -kx * (kx * g.x(i)).sin();
                assert!((u.values()[g.index(i, k)].re - expected).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn identity_and_unimodular_multipliers() {
        let g = Grid2D::square(32).unwrap();
        let f = project_zero_x_mean(&forward_transform(&random_physical(g, 4)));
        let id = apply_multiplier(&f, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(id, f);
        let rot =
            apply_multiplier(&f, |xi, eta| Complex64::from_polar(1.0, 3.0 * xi - eta)).unwrap();
        assert!((rot.l2_norm() - f.l2_norm()).abs() / f.l2_norm() <= 1e-12);
    }

    #[test]
    fn non_finite_multiplier_names_the_mode() {
        let g = Grid2D::square(8).unwrap();
        let f = SpectralField::zeros(g);
        let err = apply_multiplier(&f, |xi, _| Complex64::new(1.0 / (xi - g.xi(2)), 0.0));
        match err {
            Err(Error::Domain(msg)) => assert!(msg.contains("ξ")),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn dealias_mask_two_thirds() {
        let g = Grid2D::square(12).unwrap();
        let m = dealias_mask(&g);
        let kept: Vec<i64> = (0..12)
            .filter(|&i| m.keeps(i, 0))
            .map(|i| g.mode_x(i))
            .collect();
        let mut sorted = kept.clone();
        sorted.sort();
        assert_eq!(sorted, (-4..=4).collect::<Vec<_>>());
        assert!(!m.keeps(g.index_of_mode_x(-6).unwrap(), 0));
        for i in 0..12 {
            for k in 0..12 {
                let c = g.conjugate_index(i, k);
                assert_eq!(m.keeps(i, k), m.as_slice()[c]);
            }
        }
    }

    #[test]
    fn resample_pads_and_truncates() {
        let g = Grid2D::square(16).unwrap();
        let f = project_zero_x_mean(&forward_transform(&random_physical(g, 5)));
        let fine = f.resample(g.with_resolution(32, 32).unwrap()).unwrap();
        assert!((fine.l2_norm() - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
        let back = fine.resample(g).unwrap();
        assert_eq!(back, f);
    }
}
