//! Pseudospectral simulation and numerical verification for the
//! dispersion-generalised KP-II equation
//!
//! ```text
//! (u_t - |D_x|^α u_x + (u²)_x)_x + u_yy = 0,   4/3 < α ≤ 6
//! ```
//!
//! on a periodic torus. The crate is organised bottom-up:
//!
//! * [`grid`] – grids, continuum-normalised transforms, multipliers and the
//!   zero-x-mean convention; [`checkpoint`] stores fields on disk.
//! * [`propagator`], [`etdrk4`], [`picard`] – the exact linear group, the
//!   quadratic nonlinearity and the two time integrators.
//! * [`norms`] – anisotropic Sobolev, homogeneous and space-time Bourgain norms.
//! * [`resonance`] – the resonance function and its exact inequalities.
//! * [`estimates`] – exponent selection, frequency regions, kernels and the
//!   sampling probes.
//! * [`experiments`] – configuration and the orchestration behind the `kp2` CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checkpoint;
pub mod error;
pub mod estimates;
pub mod etdrk4;
pub mod experiments;
pub mod grid;
pub mod norms;
pub mod parallel;
pub mod picard;
pub mod propagator;
pub mod quadrature;
pub mod resonance;
pub mod sampling;
pub mod sum;
pub mod trajectory;

pub use error::{Error, Result};
pub use grid::{Grid2D, PhysicalField, SpectralField};
pub use num_complex::Complex64;
