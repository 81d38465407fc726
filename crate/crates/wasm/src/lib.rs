//! Browser bindings: an ETDRK4 simulation stepper, a frequency-region map
//! and the exponent selector.

use kp2_core::estimates::exponents::{
    admissibility_report, regularity_threshold, select_exponents,
};
use kp2_core::estimates::regions::{classify_region, RegionTag};
use kp2_core::etdrk4::Etdrk4;
use kp2_core::experiments::{profile_data, Profile};
use kp2_core::grid::{inverse_transform, DEFAULT_PERIOD};
use kp2_core::propagator::{check_alpha, dispersion_symbol};
use kp2_core::resonance::Mu;
use kp2_core::{Grid2D, SpectralField};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js_err(e: kp2_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

struct State {
    stepper: Etdrk4,
    field: SpectralField,
    t: f64,
    l2_initial: f64,
}

impl State {
    fn new(
        alpha: f64,
        n: usize,
        profile: &str,
        amplitude: f64,
        width: f64,
        dt: f64,
    ) -> kp2_core::Result<Self> {
        check_alpha(alpha)?;
        let profile: Profile = serde_json::from_value(json!(profile))
            .map_err(|e| kp2_core::Error::Config(format!("profile {profile:?}: {e}")))?;
        let grid = Grid2D::new(n, n, DEFAULT_PERIOD / 2.0, DEFAULT_PERIOD / 2.0)?;
        let field = profile_data(grid, profile, amplitude, width)?;
        Ok(Self {
            stepper: Etdrk4::new(grid, alpha, dt),
            l2_initial: field.l2_norm(),
            field,
            t: 0.0,
        })
    }

    fn advance(&mut self, steps: usize) {
        self.field = self.stepper.advance(&self.field, steps);
        self.t += steps as f64 * self.stepper.dt();
    }

    fn values(&self) -> Vec<f64> {
        inverse_transform(&self.field).real_parts()
    }

    fn drift(&self) -> f64 {
        if self.l2_initial == 0.0 {
            0.0
        } else {
            (self.field.l2_norm() - self.l2_initial).abs() / self.l2_initial
        }
    }
}

/// ETDRK4 run on an `n × n` torus of side `16π`.
#[wasm_bindgen]
pub struct Simulation(State);

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(
        alpha: f64,
        n: usize,
        profile: &str,
        amplitude: f64,
        width: f64,
        dt: f64,
    ) -> Result<Simulation, JsError> {
        State::new(alpha, n, profile, amplitude, width, dt)
            .map(Simulation)
            .map_err(js_err)
    }

    pub fn step(&mut self, steps: usize) {
        self.0.advance(steps);
    }

    /// Physical values, `x` outer, `y` inner.
    pub fn values(&self) -> Vec<f64> {
        self.0.values()
    }

    pub fn time(&self) -> f64 {
        self.0.t
    }

    pub fn l2_norm(&self) -> f64 {
        self.0.field.l2_norm()
    }

    pub fn l2_drift(&self) -> f64 {
        self.0.drift()
    }

    pub fn size(&self) -> usize {
        self.0.field.grid().nx()
    }
}

#[allow(clippy::too_many_arguments)]
fn region_indices(
    alpha: f64,
    n: usize,
    k: f64,
    eta: f64,
    eta1: f64,
    lambda: f64,
    lambda1: f64,
) -> kp2_core::Result<Vec<u8>> {
    check_alpha(alpha)?;
    let mut out = Vec::with_capacity(n * n);
    let coord = |i: usize| -k + 2.0 * k * (i as f64 + 0.5) / n as f64;
    for row in 0..n {
        let xi2 = coord(n - 1 - row);
        for col in 0..n {
            let xi1 = coord(col);
            let xi = xi1 + xi2;
            if xi == 0.0 {
                out.push(RegionTag::ALL.len() as u8);
                continue;
            }
            let mu = Mu::new(lambda + dispersion_symbol(xi, eta, alpha)?, xi, eta);
            let mu1 = Mu::new(lambda1 + dispersion_symbol(xi1, eta1, alpha)?, xi1, eta1);
            let tag = classify_region(&mu1, &mu, alpha)?;
            out.push(RegionTag::ALL.iter().position(|&t| t == tag).unwrap() as u8);
        }
    }
    Ok(out)
}

/// Region index per pixel of the `(ξ1, ξ − ξ1) ∈ [−k, k]²` plane, rows from
/// top (`ξ − ξ1 = k`) to bottom, in the order of [`region_names`]; the extra
/// index `8` marks `ξ = 0`.
#[wasm_bindgen]
pub fn region_map(
    alpha: f64,
    n: usize,
    k: f64,
    eta: f64,
    eta1: f64,
    lambda: f64,
    lambda1: f64,
) -> Result<Vec<u8>, JsError> {
    region_indices(alpha, n, k, eta, eta1, lambda, lambda1).map_err(js_err)
}

#[wasm_bindgen]
pub fn region_names() -> Vec<String> {
    RegionTag::ALL.iter().map(|t| format!("{t:?}")).collect()
}

fn exponent_report(alpha: f64, s: f64) -> kp2_core::Result<String> {
    let e = select_exponents(alpha, s)?;
    let conditions: Vec<_> = admissibility_report(&e)
        .into_iter()
        .map(|c| json!({ "name": c.id.name(), "satisfied": c.satisfied, "slack": c.slack }))
        .collect();
    Ok(json!({
        "threshold": regularity_threshold(alpha),
        "exponents": e,
        "conditions": conditions,
    })
    .to_string())
}

/// Selected exponents and condition slacks as a JSON string.
#[wasm_bindgen]
pub fn exponents(alpha: f64, s: f64) -> Result<String, JsError> {
    exponent_report(alpha, s).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulation_steps_conserve_l2() {
        let mut s = State::new(2.0, 32, "gaussian-dx", 1.0, 2.0, 0.01).unwrap();
        s.advance(20);
        assert!((s.t - 0.2).abs() < 1e-12);
        assert!(s.drift() < 1e-10);
        assert_eq!(s.values().len(), 32 * 32);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(State::new(1.0, 32, "gaussian-dx", 1.0, 2.0, 0.01).is_err());
        assert!(State::new(2.0, 32, "square", 1.0, 2.0, 0.01).is_err());
        assert!(exponent_report(2.0, -0.5).is_err());
    }

    #[test]
    fn region_map_covers_plane() {
        let m = region_indices(2.0, 40, 4.0, 0.3, -0.2, 1.0, 0.5).unwrap();
        assert_eq!(m.len(), 1600);
        assert!(m.iter().all(|&v| v <= 8));
        assert!(m.contains(&0) && m.contains(&7));
    }

    #[test]
    fn exponent_report_is_json() {
        let v: serde_json::Value =
            serde_json::from_str(&exponent_report(2.0, -0.4).unwrap()).unwrap();
        assert!(v["conditions"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["satisfied"] == true));
    }
}
