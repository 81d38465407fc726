//! Frequency regions `A00` and `A_ij = Ξ_i ∩ Λ_j` for a pair `(μ1, μ)`,
//! with `μ2 = μ − μ1`.
//!
//! * `A00`: `|ξ1| ≤ |ξ2| ≤ 1`.
//! * `Ξ1`: `|ξ1| ≤ |ξ2|/3`, `|ξ2| ≥ 1`; `Ξ2`: `|ξ2|/3 < |ξ1| ≤ |ξ2|`, `|ξ2| ≥ 1`.
//! * `Λ_j`: `|λ_j|` is the largest of `(|λ|, |λ1|, |λ2|)` (`λ_0 = λ`), ties
//!   going to the lowest index.
//! * `Outside`: `|ξ1| > |ξ2|`, the mirrored half of the product.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resonance::Mu;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    A00,
    Xi1Lam0,
    Xi1Lam1,
    Xi1Lam2,
    Xi2Lam0,
    Xi2Lam1,
    Xi2Lam2,
    Outside,
}

impl RegionTag {
    pub const ALL: [RegionTag; 8] = [
        RegionTag::A00,
        RegionTag::Xi1Lam0,
        RegionTag::Xi1Lam1,
        RegionTag::Xi1Lam2,
        RegionTag::Xi2Lam0,
        RegionTag::Xi2Lam1,
        RegionTag::Xi2Lam2,
        RegionTag::Outside,
    ];

    pub fn from_parts(xi_region: u8, lambda_index: u8) -> Self {
        match (xi_region, lambda_index) {
            (1, 0) => RegionTag::Xi1Lam0,
            (1, 1) => RegionTag::Xi1Lam1,
            (1, 2) => RegionTag::Xi1Lam2,
            (2, 0) => RegionTag::Xi2Lam0,
            (2, 1) => RegionTag::Xi2Lam1,
            (2, 2) => RegionTag::Xi2Lam2,
            _ => panic!("no region Ξ{xi_region} ∩ Λ{lambda_index}"),
        }
    }

    /// `1` or `2` for the `Ξ` regions.
    pub fn xi_region(self) -> Option<u8> {
        match self {
            RegionTag::Xi1Lam0 | RegionTag::Xi1Lam1 | RegionTag::Xi1Lam2 => Some(1),
            RegionTag::Xi2Lam0 | RegionTag::Xi2Lam1 | RegionTag::Xi2Lam2 => Some(2),
            _ => None,
        }
    }

    /// Index `j` of the dominant modulation for the `Ξ` regions.
    pub fn lambda_index(self) -> Option<u8> {
        match self {
            RegionTag::Xi1Lam0 | RegionTag::Xi2Lam0 => Some(0),
            RegionTag::Xi1Lam1 | RegionTag::Xi2Lam1 => Some(1),
            RegionTag::Xi1Lam2 | RegionTag::Xi2Lam2 => Some(2),
            _ => None,
        }
    }
}

/// Argmax of `(|λ|, |λ1|, |λ2|)` with ties going to the lowest index.
pub fn dominant_lambda(lambdas: [f64; 3]) -> u8 {
    let mut best = 0;
    for j in 1..3 {
        if lambdas[j].abs() > lambdas[best].abs() {
            best = j;
        }
    }
    best as u8
}

/// Classification from the x-frequencies and the three modulations.
pub fn classify_parts(xi1: f64, xi2: f64, lambdas: [f64; 3]) -> RegionTag {
    let (a1, a2) = (xi1.abs(), xi2.abs());
    if a1 > a2 {
        return RegionTag::Outside;
    }
    if a2 <= 1.0 {
        return RegionTag::A00;
    }
    let xi_region = if a1 <= a2 / 3.0 { 1 } else { 2 };
    RegionTag::from_parts(xi_region, dominant_lambda(lambdas))
}

pub fn classify_region(mu1: &Mu, mu: &Mu, alpha: f64) -> Result<RegionTag> {
    let mu2 = mu.minus(mu1);
    if mu.xi == 0.0 || mu1.xi == 0.0 || mu2.xi == 0.0 {
        return Err(Error::Domain(format!(
            "zero frequency: ξ = {}, ξ1 = {}, ξ − ξ1 = {}",
            mu.xi, mu1.xi, mu2.xi
        )));
    }
    Ok(classify_parts(
        mu1.xi,
        mu2.xi,
        [mu.lambda(alpha), mu1.lambda(alpha), mu2.lambda(alpha)],
    ))
}
