//! Exponent selection and the admissibility system of the bilinear estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::check_alpha;

/// Safety factor applied to the admissible `ε` cap.
pub const EPS_SAFETY: f64 = 0.9;
pub const EPS_CEILING: f64 = 1.0 / 16.0;

/// A condition counts as violated when its slack is below `−SLACK_TOL`.
/// Several conditions hold with equality by construction (`b2 = b1`, the
/// clamp `b1 = 0`, the lower end of the `σ` gap).
pub const SLACK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub alpha: f64,
    pub s: f64,
    pub eps: f64,
    pub b: f64,
    pub b_prime: f64,
    pub b1: f64,
    pub b2: f64,
    pub sigma: f64,
    pub delta: f64,
}

impl ExponentSet {
    /// All exponents derived from `ε`, with `b2 = b1`.
    pub fn from_eps(alpha: f64, s: f64, eps: f64) -> Self {
        let b = 0.5 + eps / 2.0;
        let b_prime = -0.5 + eps;
        let b1 = (3.0 / (2.0 * alpha) - 0.75 + eps).max(0.0);
        Self {
            alpha,
            s,
            eps,
            b,
            b_prime,
            b1,
            b2: b1,
            sigma: 0.5 + b1,
            delta: 1.0 - (b - b_prime),
        }
    }

    pub fn with_b2(mut self, b2: f64) -> Self {
        self.b2 = b2;
        self
    }

    /// Replaces `b′` and recomputes `δ`; the other exponents are kept.
    pub fn with_b_prime(mut self, b_prime: f64) -> Self {
        self.b_prime = b_prime;
        self.delta = 1.0 - (self.b - b_prime);
        self
    }
}

/// `max(1 − 3α/4, 1/4 − 3α/8)`: `s` must lie strictly above it.
pub fn regularity_threshold(alpha: f64) -> f64 {
    (1.0 - 0.75 * alpha).max(0.25 - 0.375 * alpha)
}

/// The three `ε` constraints, by name, and the ceiling `1/16`.
pub fn eps_constraints(alpha: f64, s: f64) -> [(&'static str, f64); 4] {
    [
        (
            "(s + 3α/4 − 1)/(α + 1)",
            (s + 0.75 * alpha - 1.0) / (alpha + 1.0),
        ),
        ("(3α/4 − 1)/(α + 1)", (0.75 * alpha - 1.0) / (alpha + 1.0)),
        (
            "(2s + 3α/4 − 1/2)/α",
            (2.0 * s + 0.75 * alpha - 0.5) / alpha,
        ),
        ("1/16", EPS_CEILING),
    ]
}

pub fn eps_cap(alpha: f64, s: f64) -> f64 {
    eps_constraints(alpha, s)
        .iter()
        .map(|c| c.1)
        .fold(f64::INFINITY, f64::min)
}

pub fn select_exponents(alpha: f64, s: f64) -> Result<ExponentSet> {
    check_alpha(alpha).map_err(|e| Error::Admissibility(e.to_string()))?;
    if !s.is_finite() {
        return Err(Error::Admissibility(format!("s = {s} is not finite")));
    }
    for (name, v) in eps_constraints(alpha, s) {
        if !(v > 0.0) {
            return Err(Error::Admissibility(format!(
                "ε constraint {name} = {v} leaves no admissible ε (s = {s} must exceed {})",
                regularity_threshold(alpha)
            )));
        }
    }
    Ok(ExponentSet::from_eps(
        alpha,
        s,
        EPS_SAFETY * eps_cap(alpha, s),
    ))
}

/// Identifier of one admissibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    /// `0 ≤ b1 ≤ −b′`
    B1Range,
    /// `b′ ≤ (min(0, s) − 3/2 + α/4)/(α + 1)`
    BPrimeCeiling,
    /// `0 ≤ b2 ≤ b1`
    B2Range,
    /// `σ ≥ b1 − b′ ≥ 3/(2α) − 1/4`
    SigmaGap,
    /// `b1 ≤ −b′ + (2s − 1/2 + α/4)/α`
    B1Ceiling,
    /// `σ ≤ 1 + b′ + b1`
    SigmaCeiling,
}

impl ConditionId {
    pub const ALL: [ConditionId; 6] = [
        ConditionId::B1Range,
        ConditionId::BPrimeCeiling,
        ConditionId::B2Range,
        ConditionId::SigmaGap,
        ConditionId::B1Ceiling,
        ConditionId::SigmaCeiling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::B1Range => "b1-range",
            ConditionId::BPrimeCeiling => "b-prime-ceiling",
            ConditionId::B2Range => "b2-range",
            ConditionId::SigmaGap => "sigma-gap",
            ConditionId::B1Ceiling => "b1-ceiling",
            ConditionId::SigmaCeiling => "sigma-ceiling",
        }
    }

    /// Signed slack: the minimum over the condition's inequalities of
    /// `larger side − smaller side`.
    pub fn slack(self, e: &ExponentSet) -> f64 {
        let a = e.alpha;
        match self {
            ConditionId::B1Range => e.b1.min(-e.b_prime - e.b1),
            ConditionId::BPrimeCeiling => (e.s.min(0.0) - 1.5 + a / 4.0) / (a + 1.0) - e.b_prime,
            ConditionId::B2Range => e.b2.min(e.b1 - e.b2),
            ConditionId::SigmaGap => {
                let gap = e.b1 - e.b_prime;
                (e.sigma - gap).min(gap - (1.5 / a - 0.25))
            }
            ConditionId::B1Ceiling => -e.b_prime + (2.0 * e.s - 0.5 + a / 4.0) / a - e.b1,
            ConditionId::SigmaCeiling => 1.0 + e.b_prime + e.b1 - e.sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub id: ConditionId,
    pub satisfied: bool,
    pub slack: f64,
}

pub fn check_condition(id: ConditionId, e: &ExponentSet) -> ConditionResult {
    let slack = id.slack(e);
    ConditionResult {
        id,
        satisfied: slack >= -SLACK_TOL,
        slack,
    }
}

pub fn admissibility_report(e: &ExponentSet) -> Vec<ConditionResult> {
    ConditionId::ALL
        .iter()
        .map(|&id| check_condition(id, e))
        .collect()
}

/// `b > 1/2`, `b′ > −1/2` and `δ > 0`, required by every kernel bound.
pub fn base_conditions_hold(e: &ExponentSet) -> bool {
    e.b > 0.5 && e.b_prime > -0.5 && e.delta > 0.0
}
