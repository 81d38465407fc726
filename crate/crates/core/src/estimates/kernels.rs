//! The kernel family `k_ij(μ1, μ)` bounding each piece of the decomposed
//! product, and the intermediate majorant used to bound each one.
//!
//! Throughout, `ξ2 = ξ − ξ1`, `λ_j` are the modulations of `μ`, `μ1`, `μ2`
//! and `⟨x⟩ = (1 + x²)^{1/2}`.

use serde::{Deserialize, Serialize};

use super::exponents::{base_conditions_hold, check_condition, ConditionId, ExponentSet};
use super::regions::{classify_region, RegionTag};
use crate::error::{Error, Result};
use crate::norms::bracket;
use crate::resonance::Mu;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelId {
    K00,
    K10,
    K12,
    K11Tilde,
    K11,
    K20,
    K21,
    K22,
}

impl KernelId {
    pub const ALL: [KernelId; 8] = [
        KernelId::K00,
        KernelId::K10,
        KernelId::K12,
        KernelId::K11Tilde,
        KernelId::K11,
        KernelId::K20,
        KernelId::K21,
        KernelId::K22,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::K00 => "k00",
            KernelId::K10 => "k10",
            KernelId::K12 => "k12",
            KernelId::K11Tilde => "k11-tilde",
            KernelId::K11 => "k11",
            KernelId::K20 => "k20",
            KernelId::K21 => "k21",
            KernelId::K22 => "k22",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown kernel id {name:?}")))
    }

    pub fn region(self) -> RegionTag {
        match self {
            KernelId::K00 => RegionTag::A00,
            KernelId::K10 => RegionTag::Xi1Lam0,
            KernelId::K12 => RegionTag::Xi1Lam2,
            KernelId::K11Tilde | KernelId::K11 => RegionTag::Xi1Lam1,
            KernelId::K20 => RegionTag::Xi2Lam0,
            KernelId::K21 => RegionTag::Xi2Lam1,
            KernelId::K22 => RegionTag::Xi2Lam2,
        }
    }

    /// Conditions the boundedness argument for this kernel relies on.
    pub fn conditions(self) -> &'static [ConditionId] {
        use ConditionId::*;
        match self {
            KernelId::K00 => &[],
            KernelId::K10 | KernelId::K12 => &[B1Range, BPrimeCeiling],
            KernelId::K11Tilde | KernelId::K11 => &[B1Range, BPrimeCeiling, B2Range, SigmaGap],
            KernelId::K20 => &[B1Range, BPrimeCeiling, B2Range, B1Ceiling, SigmaCeiling],
            KernelId::K21 | KernelId::K22 => &[BPrimeCeiling, B2Range, B1Ceiling, SigmaCeiling],
        }
    }

    /// Fails with an admissibility error naming the first violated condition.
    pub fn check_admissible(self, e: &ExponentSet) -> Result<()> {
        if self != KernelId::K00 && !base_conditions_hold(e) {
            return Err(Error::Admissibility(format!(
                "{}: need b > 1/2, b′ > −1/2, δ > 0 (b = {}, b′ = {})",
                self.name(),
                e.b,
                e.b_prime
            )));
        }
        if self == KernelId::K00 && !(e.b > 0.5 && e.alpha <= 6.0) {
            return Err(Error::Admissibility("k00: need b > 1/2 and α ≤ 6".into()));
        }
        for &c in self.conditions() {
            let r = check_condition(c, e);
            if !r.satisfied {
                return Err(Error::Admissibility(format!(
                    "{}: condition {} violated (slack {})",
                    self.name(),
                    c.name(),
                    r.slack
                )));
            }
        }
        Ok(())
    }
}

/// Frequencies and modulations of one `(μ1, μ)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub xi: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub lambda: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl KernelPoint {
    pub fn from_mu(mu1: &Mu, mu: &Mu, alpha: f64) -> Self {
        let mu2 = mu.minus(mu1);
        Self {
            xi: mu.xi,
            xi1: mu1.xi,
            xi2: mu2.xi,
            lambda: mu.lambda(alpha),
            lambda1: mu1.lambda(alpha),
            lambda2: mu2.lambda(alpha),
        }
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda
            .abs()
            .max(self.lambda1.abs())
            .max(self.lambda2.abs())
    }
}

/// Kernel value without the region check.
pub fn kernel_unchecked(id: KernelId, p: &KernelPoint, e: &ExponentSet) -> f64 {
    let (a, s, b, bp, b1, b2, sg) = (e.alpha, e.s, e.b, e.b_prime, e.b1, e.b2, e.sigma);
    let (x, x1, x2) = (p.xi.abs(), p.xi1.abs(), p.xi2.abs());
    let (bx, bx1, bx2) = (bracket(p.xi), bracket(p.xi1), bracket(p.xi2));
    let (bl, bl1, bl2) = (bracket(p.lambda), bracket(p.lambda1), bracket(p.lambda2));
    let sob = bx1.powf(-s) * bx2.powf(-s);
    match id {
        KernelId::K00 => bx.powf(s) * sob * x * x1.sqrt() * x2.powf(-a / 4.0),
        KernelId::K10 => {
            bl.powf(bp + b1)
                * bx.powf(1.0 + s - (a + 1.0) * b1)
                * sob
                * x1.sqrt()
                * x2.powf(-a / 4.0)
        }
        KernelId::K12 => {
            bl.powf(bp + b1 + b)
                * bl2.powf(-b)
                * bx.powf(1.0 + s - (a + 1.0) * b1)
                * sob
                * x1.sqrt()
                * x.powf(-a / 4.0)
        }
        KernelId::K11Tilde => bl1.powf(bp) * bx.powf(1.0 + s) * sob * x1.sqrt() * x2.powf(-a / 4.0),
        KernelId::K11 => {
            let q = 0.25 - a / 8.0;
            let num = bx.powf(1.0 + s - (a + 1.0) * b2)
                * bx1.powf(-s + (a + 1.0) * b1 - sg)
                * bx2.powf(-s)
                * x.powf(q)
                * x1.powf(sg)
                * x2.powf(q);
            num / (bl.powf(-bp - b2 - b) * bl1.powf(b + b1))
        }
        KernelId::K20 => {
            let q = 0.25 - a / 8.0;
            bl.powf(bp + b2)
                * bx.powf(s - (a + 1.0) * b2 + sg)
                * sob
                * x.powf(1.0 - sg)
                * x1.powf(q)
                * x2.powf(q)
        }
        KernelId::K21 => {
            bl1.powf(-b)
                * bl.powf(b + bp + b2)
                * bx.powf(s - (a + 1.0) * b2 + sg)
                * sob
                * x.powf(1.5 - sg)
                * x2.powf(-a / 4.0)
        }
        KernelId::K22 => {
            bl2.powf(-b)
                * bl.powf(b + bp + b2)
                * bx.powf(s - (a + 1.0) * b2 + sg)
                * sob
                * x.powf(1.5 - sg)
                * x1.powf(-a / 4.0)
        }
    }
}

/// Intermediate majorant of each kernel on its region.
pub fn majorant(id: KernelId, p: &KernelPoint, e: &ExponentSet) -> f64 {
    let (a, s, bp, b1, b2, sg) = (e.alpha, e.s, e.b_prime, e.b1, e.b2, e.sigma);
    let (x, x1, x2) = (p.xi.abs(), p.xi1.abs(), p.xi2.abs());
    match id {
        KernelId::K00 => x2.powf(1.5 - a / 4.0),
        KernelId::K10 | KernelId::K12 => {
            bracket(p.xi).powf(1.5 - a / 4.0 + (a + 1.0) * bp - s.min(0.0))
        }
        KernelId::K11Tilde => {
            x.powf(1.0 - a / 4.0 + a * bp) * bracket(p.xi1).powf(-s) * x1.powf(0.5 + bp)
        }
        KernelId::K11 => {
            x.powf(1.5 - a / 4.0 + a * (bp - b1) - b2)
                * bracket(p.xi1).powf(-s + (a + 1.0) * b1 - sg)
                * x1.powf(sg + bp - b1 + b2)
        }
        KernelId::K20 | KernelId::K21 | KernelId::K22 => {
            bracket(p.lambda_max()).powf(bp + b2)
                * bracket(p.xi).powf(s - (a + 1.0) * b2 + sg)
                * x.powf(1.0 - sg)
                * x1.powf(-2.0 * s + 0.5 - a / 4.0)
        }
    }
}

/// Kernel value at `(μ1, μ)`, which must lie in the kernel's region.
pub fn kernel_value(id: KernelId, mu1: &Mu, mu: &Mu, e: &ExponentSet) -> Result<f64> {
    let tag = classify_region(mu1, mu, e.alpha)?;
    if tag != id.region() {
        return Err(Error::Region {
            expected: format!("{:?}", id.region()),
            actual: format!("{tag:?}"),
        });
    }
    Ok(kernel_unchecked(
        id,
        &KernelPoint::from_mu(mu1, mu, e.alpha),
        e,
    ))
}
