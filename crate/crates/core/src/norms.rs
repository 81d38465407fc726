//! Anisotropic Sobolev and homogeneous norms, the modulation symbol `λ` and
//! the space-time Bourgain norm
//!
//! ```text
//! ‖u‖_{X^{s1,s2,b}_σ} = ‖ |ξ|^{-σ} ⟨ξ⟩^{s1+σ} ⟨η⟩^{s2} ⟨λ⟩^b û(τ, ξ, η) ‖_{L²}
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{apply_real_weight, plan_1d, Grid2D, SpectralField};
use crate::parallel::map_indexed;
use crate::propagator::{apply_linear, cutoff_psi, omega};
use crate::quadrature::cumulative;
use crate::sum::{pairwise_sum, pairwise_sum_by};

/// Japanese bracket `⟨x⟩ = (1 + x²)^{1/2}`.
#[inline]
pub fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn weighted_norm<W: Fn(f64, f64) -> f64>(f: &SpectralField, w: W) -> f64 {
    let g = *f.grid();
    let c = f.coeffs();
    let ny = g.ny();
    let total = pairwise_sum_by(g.len() - ny, &|j| {
        let idx = j + ny;
        let (i, k) = (idx / ny, idx % ny);
        let weight = w(g.xi(i), g.eta(k));
        weight * weight * c[idx].norm_sqr()
    });
    (total * g.spectral_measure()).sqrt()
}

/// `‖⟨ξ⟩^{s1}⟨η⟩^{s2} û‖_{L²}` over the `ξ ≠ 0` modes.
pub fn sobolev_norm(f: &SpectralField, s1: f64, s2: f64) -> f64 {
    weighted_norm(f, |xi, eta| bracket(xi).powf(s1) * bracket(eta).powf(s2))
}

/// `‖|ξ|^{s1}|η|^{s2} û‖_{L²}`. When `s2 ≠ 0` the `η = 0` row is excluded;
/// for `s2 < 0` it must then carry no content.
pub fn homogeneous_norm(f: &SpectralField, s1: f64, s2: f64) -> Result<f64> {
    let g = *f.grid();
    if s2 < 0.0 {
        for i in 1..g.nx() {
            if f.at(i, 0) != Complex64::new(0.0, 0.0) {
                return Err(Error::Domain(format!(
                    "homogeneous weight |η|^{s2} singular at populated mode (ξ = {}, η = 0)",
                    g.xi(i)
                )));
            }
        }
    }
    Ok(weighted_norm(f, |xi, eta| {
        if s2 != 0.0 && eta == 0.0 {
            0.0
        } else {
            xi.abs().powf(s1) * eta.abs().powf(s2)
        }
    }))
}

/// `λ = τ − ξ|ξ|^α + η²/ξ`.
pub fn lambda_symbol(tau: f64, xi: f64, eta: f64, alpha: f64) -> Result<f64> {
    if xi == 0.0 {
        return Err(Error::Domain("λ symbol at ξ = 0".into()));
    }
    Ok(tau - omega(xi, eta, alpha))
}

/// Stack of spectral slices on the uniform mesh `t_n = −T_w + n·2T_w/nt`,
/// `n = 0..nt`. The temporal frequencies are `τ_m = π m / T_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: Grid2D,
    window: f64,
    slices: Vec<SpectralField>,
}

impl SpaceTimeField {
    pub fn new(window: f64, slices: Vec<SpectralField>) -> Result<Self> {
        if !(window > 0.0 && window.is_finite()) {
            return Err(Error::Domain(format!(
                "window must be positive, got {window}"
            )));
        }
        let nt = slices.len();
        if nt < 2 || !nt.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "nt must be even and ≥ 2, got {nt}"
            )));
        }
        let grid = *slices[0].grid();
        if slices.iter().any(|s| *s.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        if slices.iter().any(|s| s.zero_mode_content() != 0.0) {
            return Err(Error::Domain("slices must have zero x-mean".into()));
        }
        Ok(Self {
            grid,
            window,
            slices,
        })
    }

    /// Samples `f(t)` on the mesh.
    pub fn from_fn<F: Fn(f64) -> SpectralField>(window: f64, nt: usize, f: F) -> Result<Self> {
        let dt = 2.0 * window / nt as f64;
        Self::new(
            window,
            (0..nt).map(|n| f(-window + n as f64 * dt)).collect(),
        )
    }

    /// `ψ(t)·U_α(t)u0` with the cutoff of unit width.
    pub fn free_evolution(u0: &SpectralField, alpha: f64, window: f64, nt: usize) -> Result<Self> {
        Self::from_fn(window, nt, |t| {
            apply_linear(u0, t, alpha).scale(cutoff_psi(t, 1.0).into())
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn nt(&self) -> usize {
        self.slices.len()
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.window / self.nt() as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        -self.window + n as f64 * self.dt()
    }

    /// Signed temporal frequency of FFT bin `m`.
    pub fn tau(&self, m: usize) -> f64 {
        let nt = self.nt() as i64;
        let mm = if (m as i64) < nt / 2 {
            m as i64
        } else {
            m as i64 - nt
        };
        PI * mm as f64 / self.window
    }

    pub fn slices(&self) -> &[SpectralField] {
        &self.slices
    }

    pub fn map_slices<F: Fn(f64, &SpectralField) -> SpectralField>(&self, f: F) -> Self {
        Self {
            grid: self.grid,
            window: self.window,
            slices: self
                .slices
                .iter()
                .enumerate()
                .map(|(n, s)| f(self.time(n), s))
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_slices(|_, s| s.scale(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.nt() != other.nt() || self.window != other.window {
            return Err(Error::GridMismatch);
        }
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.add_scaled(b, Complex64::new(1.0, 0.0)))
            .collect::<Result<_>>()?;
        Ok(Self {
            grid: self.grid,
            window: self.window,
            slices,
        })
    }

    /// `(Σ_n ‖u(t_n)‖² dt)^{1/2}` with spatial weight `w(ξ, η)`.
    pub fn weighted_space_time_l2<W: Fn(f64, f64) -> f64>(&self, w: W) -> f64 {
        let per_slice: Vec<f64> = self
            .slices
            .iter()
            .map(|s| weighted_norm(s, &w).powi(2))
            .collect();
        (pairwise_sum(&per_slice) * self.dt()).sqrt()
    }

    /// Squared magnitudes `|F(τ_m)|²` of the continuum-normalised temporal
    /// transform `F(τ) = (2π)^{-1/2} Σ_n f(t_n) e^{-iτ t_n} dt` for every
    /// mode of x-row `i`; entry `k` holds the `nt` values of mode `(i, k)`.
    fn temporal_power(&self, i: usize) -> Vec<Vec<f64>> {
        let nt = self.nt();
        let ny = self.grid.ny();
        let fft = plan_1d(nt, FftDirection::Forward);
        let scale = self.dt() / (2.0 * PI).sqrt();
        let mut buf = vec![Complex64::new(0.0, 0.0); nt];
        let mut out = Vec::with_capacity(ny);
        for k in 0..ny {
            let idx = self.grid.index(i, k);
            for (b, s) in buf.iter_mut().zip(&self.slices) {
                *b = s.coeffs()[idx];
            }
            fft.process(&mut buf);
            out.push(buf.iter().map(|c| (c * scale).norm_sqr()).collect());
        }
        out
    }
}

/// Exponents of a Bourgain norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BourgainWeights {
    pub s1: f64,
    pub s2: f64,
    pub b: f64,
    pub sigma: f64,
}

/// Discrete `X^{s1,s2,b}_σ` norm on the `τ_m` grid. The caller windows the
/// slices (`ψ` or `ψ_T`) beforehand.
pub fn bourgain_norm(u: &SpaceTimeField, alpha: f64, w: BourgainWeights) -> f64 {
    let g = *u.grid();
    let nt = u.nt();
    let taus: Vec<f64> = (0..nt).map(|m| u.tau(m)).collect();
    let rows: Vec<f64> = map_indexed(g.nx() - 1, |r| {
        let i = r + 1;
        let xi = g.xi(i);
        let wx = (xi.abs().powf(-w.sigma) * bracket(xi).powf(w.s1 + w.sigma)).powi(2);
        let power = u.temporal_power(i);
        let per_k: Vec<f64> = (0..g.ny())
            .map(|k| {
                let eta = g.eta(k);
                let wy = bracket(eta).powf(2.0 * w.s2);
                let om = omega(xi, eta, alpha);
                let p = &power[k];
                wx * wy * pairwise_sum_by(nt, &|m| bracket(taus[m] - om).powf(2.0 * w.b) * p[m])
            })
            .collect();
        pairwise_sum(&per_k)
    });
    let dtau = PI / u.window();
    (pairwise_sum(&rows) * g.spectral_measure() * dtau).sqrt()
}

/// `I_σ`: multiplies by `(⟨ξ⟩/|ξ|)^σ`.
pub fn i_sigma_weight(f: &SpectralField, sigma: f64) -> SpectralField {
    if sigma == 0.0 {
        return f.clone();
    }
    apply_real_weight(f, |xi, _| (bracket(xi) / xi.abs()).powf(sigma))
}

pub fn i_sigma_space_time(u: &SpaceTimeField, sigma: f64) -> SpaceTimeField {
    u.map_slices(|_, s| i_sigma_weight(s, sigma))
}

/// One row of a Bourgain-norm probe report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BourgainRecord {
    pub s1: f64,
    pub s2: f64,
    pub b: f64,
    pub sigma: f64,
    pub value: f64,
    pub ratio: f64,
}

/// `‖⟨τ⟩^b ψ̂‖_{L²(τ)}` for the unit-width cutoff, by quadrature of `ψ̂` on
/// a fine `τ` grid. This is the exact `u0`-independent value of
/// `‖ψ U_α u0‖_{X^{s1,s2,b}} / ‖u0‖_{H^{s1,s2}}` in the continuum.
pub fn free_evolution_constant(b: f64) -> f64 {
    // ψ is even, so ψ̂(τ) = (2π)^{-1/2} ∫ ψ(t) cos(τt) dt.
    let (nt_fine, t_half) = (1usize << 12, 2.0f64);
    let dt = 2.0 * t_half / nt_fine as f64;
    let psi: Vec<(f64, f64)> = (0..=nt_fine)
        .map(|n| -t_half + n as f64 * dt)
        .map(|t| (t, cutoff_psi(t, 1.0)))
        .filter(|&(_, p)| p != 0.0)
        .collect();
    let (tau_max, n_tau) = (400.0, 8_000usize);
    let dtau = 2.0 * tau_max / n_tau as f64;
    let vals: Vec<f64> = map_indexed(n_tau + 1, |m| {
        let tau = -tau_max + m as f64 * dtau;
        let acc: f64 = psi.iter().map(|&(t, p)| p * (tau * t).cos()).sum();
        let hat = acc * dt / (2.0 * PI).sqrt();
        bracket(tau).powf(2.0 * b) * hat * hat
    });
    (pairwise_sum(&vals) * dtau).sqrt()
}

/// Ratio `‖ψ U_α u0‖_{X^{s1,s2,b}} / ‖u0‖_{H^{s1,s2}}` (zero for zero data).
pub fn free_evolution_ratio(
    u0: &SpectralField,
    alpha: f64,
    w: BourgainWeights,
    window: f64,
    nt: usize,
) -> Result<BourgainRecord> {
    let u = SpaceTimeField::free_evolution(u0, alpha, window, nt)?;
    let value = bourgain_norm(&u, alpha, w);
    let base = sobolev_norm(u0, w.s1, w.s2);
    Ok(BourgainRecord {
        s1: w.s1,
        s2: w.s2,
        b: w.b,
        sigma: w.sigma,
        value,
        ratio: if base == 0.0 { 0.0 } else { value / base },
    })
}

/// `ψ_T(t) ∫_0^t U_α(t − t′) F(t′) dt′` evaluated per mode by cumulative
/// quadrature on the field's own time mesh (which must contain `t = 0` at
/// index `nt/2`).
pub fn retarded_duhamel(f: &SpaceTimeField, alpha: f64, t_cut: f64) -> SpaceTimeField {
    let g = *f.grid();
    let nt = f.nt();
    let centre = nt / 2;
    let dt = f.dt();
    let times: Vec<f64> = (0..nt).map(|n| f.time(n)).collect();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); g.len()]; nt];
    let columns: Vec<Vec<Complex64>> = map_indexed(g.len(), |idx| {
        let (i, k) = (idx / g.ny(), idx % g.ny());
        if i == 0 {
            return vec![Complex64::new(0.0, 0.0); nt];
        }
        let om = omega(g.xi(i), g.eta(k), alpha);
        let integrand: Vec<Complex64> = (0..nt)
            .map(|n| Complex64::from_polar(1.0, -om * times[n]) * f.slices()[n].coeffs()[idx])
            .collect();
        let fwd = cumulative(&integrand[centre..], dt);
        let back_samples: Vec<Complex64> = integrand[..=centre].iter().rev().copied().collect();
        let back = cumulative(&back_samples, -dt);
        (0..nt)
            .map(|n| {
                let acc = if n >= centre {
                    fwd[n - centre]
                } else {
                    back[centre - n]
                };
                cutoff_psi(times[n], t_cut) * Complex64::from_polar(1.0, om * times[n]) * acc
            })
            .collect()
    });
    for (idx, col) in columns.into_iter().enumerate() {
        for (n, v) in col.into_iter().enumerate() {
            out[n][idx] = v;
        }
    }
    let slices = out
        .into_iter()
        .map(|c| SpectralField::new(g, c).expect("grid length"))
        .collect();
    SpaceTimeField::new(f.window(), slices).expect("valid mesh")
}

/// One row of the retraction probe: `T`, both norms and the normalised ratio
/// `‖ψ_T ∫_0^t U(t−t′)F‖_{X^{s,b}} / (T^{1−(b−b′)} ‖F‖_{X^{s,b′}})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetractionRow {
    pub t: f64,
    pub duhamel_norm: f64,
    pub source_norm: f64,
    pub ratio: f64,
}

pub fn retraction_probe(
    f: &SpaceTimeField,
    alpha: f64,
    s1: f64,
    s2: f64,
    b: f64,
    b_prime: f64,
    cut_times: &[f64],
) -> Vec<RetractionRow> {
    let source_norm = bourgain_norm(
        f,
        alpha,
        BourgainWeights {
            s1,
            s2,
            b: b_prime,
            sigma: 0.0,
        },
    );
    cut_times
        .iter()
        .map(|&t| {
            let d = retarded_duhamel(f, alpha, t);
            let duhamel_norm = bourgain_norm(
                &d,
                alpha,
                BourgainWeights {
                    s1,
                    s2,
                    b,
                    sigma: 0.0,
                },
            );
            RetractionRow {
                t,
                duhamel_norm,
                source_norm,
                ratio: duhamel_norm / (t.powf(1.0 - (b - b_prime)) * source_norm),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::project_zero_x_mean;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(g: Grid2D, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = (0..g.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        project_zero_x_mean(&SpectralField::new(g, c).unwrap())
    }

    fn unit_mode(g: Grid2D, j: i64, k: i64) -> SpectralField {
        let f = SpectralField::single_mode(g, j, k, Complex64::new(1.0, 0.0)).unwrap();
        let n = f.l2_norm();
        f.scale((1.0 / n).into())
    }

    #[test]
    fn single_mode_weights() {
        let g = Grid2D::new(16, 16, 2.0 * PI, 4.0 * PI).unwrap();
        let f = unit_mode(g, 3, -2);
        let (xi, eta) = (3.0, -1.0);
        let s = sobolev_norm(&f, 0.7, -1.3);
        assert!((s - bracket(xi).powf(0.7) * bracket(eta).powf(-1.3)).abs() < 1e-14);
        let h = homogeneous_norm(&f, -0.5, 2.0).unwrap();
        assert!((h - 3f64.powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn sobolev_zero_is_l2_and_monotone() {
        let g = Grid2D::square(32).unwrap();
        let f = random_field(g, 3);
        assert!((sobolev_norm(&f, 0.0, 0.0) - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
        assert!(sobolev_norm(&f, -0.5, 0.0) <= sobolev_norm(&f, 0.5, 0.0));
        assert!(
            (homogeneous_norm(&f, 0.0, 0.0).unwrap() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm()
        );
    }

    #[test]
    fn homogeneous_rejects_singular_content() {
        let g = Grid2D::square(16).unwrap();
        let f = unit_mode(g, 2, 0);
        assert!(matches!(
            homogeneous_norm(&f, 0.0, -0.5),
            Err(Error::Domain(_))
        ));
        assert_eq!(homogeneous_norm(&f, 0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_symbol(0.0, 1.0, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(lambda_symbol(5.0, 2.0, 0.0, 2.0).unwrap(), -3.0);
        let w = omega(1.7, -0.4, 3.0);
        assert!(lambda_symbol(w, 1.7, -0.4, 3.0).unwrap().abs() < 1e-15);
        assert!(lambda_symbol(1.0, 0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn bourgain_reduces_to_plancherel() {
        let g = Grid2D::square(16).unwrap();
        let u0 = random_field(g, 5);
        let u = SpaceTimeField::free_evolution(&u0, 2.0, 4.0, 64).unwrap();
        let w = BourgainWeights {
            s1: 0.3,
            s2: -0.2,
            b: 0.0,
            sigma: 0.0,
        };
        let a = bourgain_norm(&u, 2.0, w);
        let b = u.weighted_space_time_l2(|xi, eta| bracket(xi).powf(0.3) * bracket(eta).powf(-0.2));
        assert!((a - b).abs() <= 1e-10 * b, "{a} vs {b}");
    }

    #[test]
    fn i_sigma_conjugation() {
        let g = Grid2D::square(16).unwrap();
        let u = SpaceTimeField::free_evolution(&random_field(g, 9), 2.0, 4.0, 64).unwrap();
        let w = BourgainWeights {
            s1: -0.4,
            s2: 0.0,
            b: 0.515,
            sigma: 0.53,
        };
        let a = bourgain_norm(&u, 2.0, w);
        let b = bourgain_norm(
            &i_sigma_space_time(&u, w.sigma),
            2.0,
            BourgainWeights { sigma: 0.0, ..w },
        );
        assert!((a - b).abs() <= 1e-10 * a);
        assert_eq!(i_sigma_weight(&u.slices()[3], 0.0), u.slices()[3]);
    }

    #[test]
    fn free_evolution_ratio_matches_cutoff_constant() {
        let g = Grid2D::square(16).unwrap();
        let b = 0.515;
        let c = free_evolution_constant(b);
        let w = BourgainWeights {
            s1: -0.4,
            s2: 0.0,
            b,
            sigma: 0.0,
        };
        for seed in 0..3 {
            let r = free_evolution_ratio(&random_field(g, seed), 2.0, w, 4.0, 256).unwrap();
            assert!((r.ratio - c).abs() < 1e-4 * c, "{} vs {c}", r.ratio);
        }
    }
}
