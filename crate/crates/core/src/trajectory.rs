//! Stored solutions and their per-time diagnostics.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{inverse_transform, SpectralField};
use crate::norms::sobolev_norm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub l2_norm: f64,
    pub h_s_norm: f64,
    pub max_abs: f64,
}

impl Diagnostics {
    pub fn of(t: f64, u: &SpectralField, s1: f64, s2: f64) -> Self {
        Self {
            t,
            l2_norm: u.l2_norm(),
            h_s_norm: sobolev_norm(u, s1, s2),
            max_abs: inverse_transform(u).max_abs(),
        }
    }
}

pub const CSV_HEADER: &str = "t,l2_norm,h_s_norm,max_abs";

pub fn write_csv<W: Write>(mut w: W, rows: &[Diagnostics]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for d in rows {
        writeln!(
            w,
            "{:.17e},{:.17e},{:.17e},{:.17e}",
            d.t, d.l2_norm, d.h_s_norm, d.max_abs
        )?;
    }
    Ok(())
}

/// Increasing times with one state and one diagnostics record each. The
/// `H^{s1,s2}` exponents used for `h_s_norm` are fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    s1: f64,
    s2: f64,
    times: Vec<f64>,
    states: Vec<SpectralField>,
    diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    pub fn new(s1: f64, s2: f64) -> Self {
        Self {
            s1,
            s2,
            times: Vec::new(),
            states: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    /// Appends a state. Times must increase strictly.
    pub fn push(&mut self, t: f64, state: SpectralField) {
        debug_assert!(self.times.last().is_none_or(|&last| t > last));
        self.diagnostics
            .push(Diagnostics::of(t, &state, self.s1, self.s2));
        self.times.push(t);
        self.states.push(state);
    }

    /// Appends only the diagnostics of a state, dropping the field itself.
    pub fn push_diagnostics(&mut self, t: f64, state: &SpectralField) {
        self.diagnostics
            .push(Diagnostics::of(t, state, self.s1, self.s2));
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn last(&self) -> Option<&SpectralField> {
        self.states.last()
    }

    pub fn diagnostics(&self) -> &[Diagnostics] {
        &self.diagnostics
    }

    pub fn len(&self) -> usize {
        self.diagnostics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagnostics.is_empty()
    }

    /// `max_t |‖u(t)‖ − ‖u(t_0)‖| / ‖u(t_0)‖`, zero for a zero trajectory.
    pub fn relative_l2_drift(&self) -> f64 {
        let Some(first) = self.diagnostics.first() else {
            return 0.0;
        };
        if first.l2_norm == 0.0 {
            return 0.0;
        }
        self.diagnostics
            .iter()
            .map(|d| (d.l2_norm - first.l2_norm).abs() / first.l2_norm)
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_csv(w, &self.diagnostics)
    }
}
