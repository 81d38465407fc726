//! Built-in initial data. Every profile is the x-derivative of a smooth
//! bump, taken spectrally, so the zero-x-mean constraint holds exactly.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::checkpoint::{self, Checkpoint};
use crate::error::{Error, Result};
use crate::grid::{forward_transform, project_zero_x_mean, Grid2D, PhysicalField, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// `∂x` of an isotropic Gaussian of standard deviation `width`.
    GaussianDx,
    /// `∂x` of `sech²(x/width)·sech²(y/(4 width))`, a bump elongated in y.
    LineSoliton,
    /// `∂x` of `sech(x/width)·exp(−y²/2)`: analytic with exponential
    /// spectral decay in ξ, used for the spatial convergence study.
    SechDx,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialData {
    Profile {
        profile: Profile,
        amplitude: f64,
        width: f64,
    },
    /// A checkpoint file on the same grid as the simulation.
    File { path: PathBuf },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Profile {
            profile: Profile::GaussianDx,
            amplitude: 1.0,
            width: 2.0,
        }
    }
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// Centred bump whose x-derivative is the profile.
fn antiderivative(grid: Grid2D, profile: Profile, amplitude: f64, width: f64) -> PhysicalField {
    let (cx, cy) = (grid.lx() / 2.0, grid.ly() / 2.0);
    PhysicalField::from_fn(grid, |x, y| {
        let (dx, dy) = (x - cx, y - cy);
        amplitude
            * match profile {
                Profile::GaussianDx => (-(dx * dx + dy * dy) / (2.0 * width * width)).exp(),
                Profile::LineSoliton => sech(dx / width).powi(2) * sech(dy / (4.0 * width)).powi(2),
                Profile::SechDx => sech(dx / width) * (-0.5 * dy * dy).exp(),
                Profile::Zero => 0.0,
            }
    })
}

pub fn profile_data(
    grid: Grid2D,
    profile: Profile,
    amplitude: f64,
    width: f64,
) -> Result<SpectralField> {
    if !(width > 0.0) || !amplitude.is_finite() {
        return Err(Error::Config(format!(
            "profile needs width > 0 and finite amplitude, got {width}, {amplitude}"
        )));
    }
    let mut f = forward_transform(&antiderivative(grid, profile, amplitude, width));
    for i in 0..grid.nx() {
        let d = Complex64::new(0.0, grid.xi(i));
        for k in 0..grid.ny() {
            f.coeffs_mut()[grid.index(i, k)] *= d;
        }
    }
    f.symmetrize_real();
    Ok(project_zero_x_mean(&f))
}

/// Resolves the configured initial data on `grid`.
pub fn initial_data(grid: Grid2D, init: &InitialData) -> Result<SpectralField> {
    match init {
        InitialData::Profile {
            profile,
            amplitude,
            width,
        } => profile_data(grid, *profile, *amplitude, *width),
        InitialData::File { path } => {
            let f = match checkpoint::load(path)? {
                Checkpoint::Spectral(f) => f,
                Checkpoint::Physical(p) => forward_transform(&p),
            };
            if *f.grid() != grid {
                return Err(Error::Config(format!(
                    "{} holds a {}x{} field on [{}, {}], expected {}x{} on [{}, {}]",
                    path.display(),
                    f.grid().nx(),
                    f.grid().ny(),
                    f.grid().lx(),
                    f.grid().ly(),
                    grid.nx(),
                    grid.ny(),
                    grid.lx(),
                    grid.ly()
                )));
            }
            Ok(project_zero_x_mean(&f))
        }
    }
}
