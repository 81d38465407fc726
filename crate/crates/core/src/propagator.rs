//! The linear group `U_α(t)`, the quadratic nonlinearity and the time cutoff.

use num_complex::Complex64;
use twofloat::{consts::TAU, TwoFloat};

use crate::error::{Error, Result};
use crate::grid::{
    self, dealias_mask, forward_transform, inverse_transform, project_zero_x_mean_in_place,
    SpectralField,
};

/// Open lower end and closed upper end of the admissible dispersion range.
pub const ALPHA_MIN: f64 = 4.0 / 3.0;
pub const ALPHA_MAX: f64 = 6.0;

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > ALPHA_MIN && alpha <= ALPHA_MAX {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha = {alpha} outside (4/3, 6]")))
    }
}

/// `φ_α(ξ) = ξ|ξ|^α`.
#[inline]
pub fn phi(xi: f64, alpha: f64) -> f64 {
    xi * xi.abs().powf(alpha)
}

/// Unchecked `ω(ξ, η) = ξ|ξ|^α − η²/ξ`; callers guarantee `ξ ≠ 0`.
#[inline]
pub(crate) fn omega(xi: f64, eta: f64, alpha: f64) -> f64 {
    phi(xi, alpha) - eta * eta / xi
}

/// Dispersion relation `ω(ξ, η) = ξ|ξ|^α − η²/ξ` of `U_α`.
pub fn dispersion_symbol(xi: f64, eta: f64, alpha: f64) -> Result<f64> {
    if xi == 0.0 {
        return Err(Error::Domain("dispersion symbol at ξ = 0".into()));
    }
    Ok(omega(xi, eta, alpha))
}

/// `t·ω` reduced modulo `2π` in double-double arithmetic.
pub fn reduced_phase(t: f64, w: f64) -> f64 {
    let p = TwoFloat::new_mul(t, w);
    let k = (p.hi() / std::f64::consts::TAU).round();
    if k == 0.0 {
        return p.hi() + p.lo();
    }
    let r = p - TwoFloat::from(k) * TAU;
    r.hi() + r.lo()
}

/// `U_α(t)F`: multiplies each `ξ ≠ 0` coefficient by `exp(i t ω(ξ, η))`.
pub fn apply_linear(f: &SpectralField, t: f64, alpha: f64) -> SpectralField {
    grid::apply_multiplier(f, |xi, eta| {
        Complex64::from_polar(1.0, reduced_phase(t, omega(xi, eta, alpha)))
    })
    .expect("unimodular symbol is finite away from ξ = 0")
}

/// `N(u) = −∂_x(u²)`: dealias, square in physical space, differentiate,
/// dealias again and project out the `ξ = 0` column.
pub fn nonlinear_term(f: &SpectralField) -> SpectralField {
    Nonlinearity::new(*f.grid()).eval(f)
}

/// Reusable nonlinearity evaluator that caches the dealiasing mask.
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    mask: grid::DealiasMask,
    grid: grid::Grid2D,
}

impl Nonlinearity {
    pub fn new(grid: grid::Grid2D) -> Self {
        Self {
            mask: dealias_mask(&grid),
            grid,
        }
    }

    pub fn eval(&self, f: &SpectralField) -> SpectralField {
        debug_assert_eq!(*f.grid(), self.grid);
        let mut filtered = f.clone();
        self.mask.apply(&mut filtered);
        let mut u = inverse_transform(&filtered);
        for v in u.values_mut() {
            *v = *v * *v;
        }
        let mut out = forward_transform(&u);
        let g = self.grid;
        for i in 0..g.nx() {
            let factor = Complex64::new(0.0, -g.xi(i));
            for k in 0..g.ny() {
                let idx = g.index(i, k);
                out.coeffs_mut()[idx] *= factor;
            }
        }
        self.mask.apply(&mut out);
        project_zero_x_mean_in_place(&mut out);
        out
    }
}

fn smooth_step_piece(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Fixed smooth bump: `1` on `|t| ≤ width`, `0` on `|t| ≥ 2·width`, glued
/// on the transition by the `e^{-1/s}` smooth step. `cutoff_psi(t, T)` is
/// `ψ_T(t) = ψ(t/T)`.
pub fn cutoff_psi(t: f64, width: f64) -> f64 {
    debug_assert!(width > 0.0);
    let a = (t / width).abs();
    if a <= 1.0 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let s = 2.0 - a;
    let up = smooth_step_piece(s);
    up / (up + smooth_step_piece(1.0 - s))
}
