//! The resonance function `r_α(ξ, ξ1) = φ(ξ) − φ(ξ1) − φ(ξ − ξ1)` with
//! `φ(ξ) = ξ|ξ|^α`, its two-sided bound
//!
//! ```text
//! α 2^{-α} |ξ_min||ξ_max|^α ≤ |r_α| ≤ (α + 1 + 2^{-α}) |ξ_min||ξ_max|^α,
//! ```
//!
//! the resonance identity
//! `λ1 + λ2 − λ = r_α(ξ, ξ1) + (ξη1 − ηξ1)² / (ξ ξ1 (ξ − ξ1))` and the
//! `|λ_max|` lower bound that follows from the sign coherence of its two terms.
//! Every check here is exact up to floating-point tolerance; a single
//! violation is a bug.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::propagator::phi;
use crate::sampling::{shard_len, shard_rng, signed_log_uniform, SHARDS};
use twofloat::TwoFloat;

/// Relative tolerance of every exact check: `tol = REL_TOL·(1 + |value|)`.
pub const REL_TOL: f64 = 1e-9;

/// At most this many violations are kept in a campaign report.
pub const MAX_REPORTED_VIOLATIONS: usize = 32;

pub fn phi_alpha(xi: f64, alpha: f64) -> f64 {
    phi(xi, alpha)
}

pub fn r_alpha(xi: f64, xi1: f64, alpha: f64) -> f64 {
    phi(xi, alpha) - phi(xi1, alpha) - phi(xi - xi1, alpha)
}

/// `|x|^α` as `exp(α ln|x|)`, zero below `1e-300`.
fn pow_abs(x: f64, alpha: f64) -> f64 {
    let a = x.abs();
    if a < 1e-300 {
        0.0
    } else {
        (alpha * a.ln()).exp()
    }
}

/// `(|ξ_min|, |ξ_med|, |ξ_max|)` of `(ξ, ξ1, ξ − ξ1)`.
pub fn ordered_magnitudes(xi: f64, xi1: f64) -> [f64; 3] {
    let mut m = [xi.abs(), xi1.abs(), (xi - xi1).abs()];
    m.sort_by(f64::total_cmp);
    m
}

pub fn lower_constant(alpha: f64) -> f64 {
    alpha / 2f64.powf(alpha)
}

pub fn upper_constant(alpha: f64) -> f64 {
    alpha + 1.0 + 2f64.powf(-alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSample {
    pub xi: f64,
    pub xi1: f64,
    pub alpha: f64,
    pub r_value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// `|r| − lower_bound`.
    pub margin_low: f64,
    /// `|r| − upper_bound`.
    pub margin_high: f64,
}

impl ResonanceSample {
    pub fn tolerance(&self) -> f64 {
        REL_TOL * (1.0 + self.r_value.abs())
    }

    pub fn holds(&self) -> bool {
        let tol = self.tolerance();
        self.margin_low >= -tol && self.margin_high <= tol
    }

    /// Largest bound excess relative to `1 + |r|`; negative when both bounds
    /// hold strictly.
    pub fn relative_excess(&self) -> f64 {
        (-self.margin_low).max(self.margin_high) / (1.0 + self.r_value.abs())
    }
}

pub fn resonance_bounds_check(xi: f64, xi1: f64, alpha: f64) -> Result<ResonanceSample> {
    resonance_bounds_check_with(xi, xi1, alpha, r_alpha)
}

/// [`resonance_bounds_check`] with a substitute resonance function.
pub fn resonance_bounds_check_with<R>(
    xi: f64,
    xi1: f64,
    alpha: f64,
    r: R,
) -> Result<ResonanceSample>
where
    R: Fn(f64, f64, f64) -> f64,
{
    let [min, _, max] = ordered_magnitudes(xi, xi1);
    if min == 0.0 {
        return Err(Error::Domain(format!(
            "degenerate frequency triple (ξ = {xi}, ξ1 = {xi1}): ξ_min = 0"
        )));
    }
    let scale = min * pow_abs(max, alpha);
    let r_value = r(xi, xi1, alpha);
    let lower_bound = lower_constant(alpha) * scale;
    let upper_bound = upper_constant(alpha) * scale;
    Ok(ResonanceSample {
        xi,
        xi1,
        alpha,
        r_value,
        lower_bound,
        upper_bound,
        margin_low: r_value.abs() - lower_bound,
        margin_high: r_value.abs() - upper_bound,
    })
}

/// A space-time frequency `μ = (τ, ξ, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mu {
    pub tau: f64,
    pub xi: f64,
    pub eta: f64,
}

impl Mu {
    pub fn new(tau: f64, xi: f64, eta: f64) -> Self {
        Self { tau, xi, eta }
    }

    /// `λ(μ) = τ − ξ|ξ|^α + η²/ξ`; callers guarantee `ξ ≠ 0`.
    pub fn lambda(&self, alpha: f64) -> f64 {
        self.tau - phi(self.xi, alpha) + self.eta * self.eta / self.xi
    }

    /// Point on the characteristic surface `λ = 0` with the given `(ξ, η)`.
    pub fn on_surface(xi: f64, eta: f64, alpha: f64) -> Self {
        Self::new(phi(xi, alpha) - eta * eta / xi, xi, eta)
    }

    pub fn minus(&self, other: &Mu) -> Mu {
        Mu::new(
            self.tau - other.tau,
            self.xi - other.xi,
            self.eta - other.eta,
        )
    }
}

/// All quantities entering the resonance identity at `(μ, μ1)`, with
/// `μ2 = μ − μ1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityTerms {
    pub lambda: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `λ1 + λ2 − λ`.
    pub lhs: f64,
    /// `ν = r_α(ξ, ξ1)`.
    pub nu: f64,
    /// `(ξη1 − ηξ1)² / (ξ ξ1 (ξ − ξ1))`.
    pub quad: f64,
}

impl IdentityTerms {
    pub fn residual(&self) -> f64 {
        (self.lhs - (self.nu + self.quad)).abs()
    }

    pub fn relative_residual(&self) -> f64 {
        self.residual() / (1.0 + self.lhs.abs())
    }
}

fn check_nondegenerate(mu: &Mu, mu1: &Mu) -> Result<()> {
    let xi2 = mu.xi - mu1.xi;
    if mu.xi == 0.0 || mu1.xi == 0.0 || xi2 == 0.0 {
        return Err(Error::Domain(format!(
            "zero denominator: ξ = {}, ξ1 = {}, ξ − ξ1 = {xi2}",
            mu.xi, mu1.xi
        )));
    }
    Ok(())
}

pub fn identity_terms(mu: &Mu, mu1: &Mu, alpha: f64) -> Result<IdentityTerms> {
    identity_terms_with(mu, mu1, alpha, r_alpha)
}

pub fn identity_terms_with<R>(mu: &Mu, mu1: &Mu, alpha: f64, r: R) -> Result<IdentityTerms>
where
    R: Fn(f64, f64, f64) -> f64,
{
    check_nondegenerate(mu, mu1)?;
    let tau2 = TwoFloat::new_sub(mu.tau, mu1.tau);
    let xi2 = TwoFloat::new_sub(mu.xi, mu1.xi);
    let eta2 = TwoFloat::new_sub(mu.eta, mu1.eta);
    let lambda = lambda_dd(mu.tau.into(), mu.xi.into(), mu.eta.into(), alpha);
    let lambda1 = lambda_dd(mu1.tau.into(), mu1.xi.into(), mu1.eta.into(), alpha);
    let lambda2 = lambda_dd(tau2, xi2, eta2, alpha);
    let cross = TwoFloat::new_mul(mu.xi, mu1.eta) - TwoFloat::new_mul(mu.eta, mu1.xi);
    let quad = div_dd(cross * cross, TwoFloat::new_mul(mu.xi, mu1.xi) * xi2);
    Ok(IdentityTerms {
        lambda: f64::from(lambda),
        lambda1: f64::from(lambda1),
        lambda2: f64::from(lambda2),
        lhs: f64::from(lambda1 + lambda2 - lambda),
        nu: r(mu.xi, mu1.xi, alpha),
        quad: f64::from(quad),
    })
}

/// `λ = τ − ξ|ξ|^α + η²/ξ` with the `τ` and `η²/ξ` parts in double-double
/// arithmetic; `μ2 = μ − μ1` is formed exactly.
fn lambda_dd(tau: TwoFloat, xi: TwoFloat, eta: TwoFloat, alpha: f64) -> TwoFloat {
    tau - phi(f64::from(xi), alpha) + div_dd(eta * eta, xi)
}

/// `a / b` through double-double by double division plus a first-order
/// correction for the low word of `b`.
fn div_dd(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b.hi();
    q - q * b.lo() / b.hi()
}

/// `|LHS − RHS|` of the resonance identity.
pub fn resonance_identity_residual(mu: &Mu, mu1: &Mu, alpha: f64) -> Result<f64> {
    Ok(identity_terms(mu, mu1, alpha)?.residual())
}

/// Outcome of the sign-coherence and `|λ_max|` chain check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub same_sign: bool,
    pub chain_holds: bool,
    pub lambda_max: f64,
    /// `(1/3)|λ1 + λ2 − λ|`.
    pub third_lhs: f64,
    /// `(1/3)|ν|`.
    pub third_nu: f64,
    /// `α/(3·2^α) |ξ_min||ξ_max|^α`.
    pub floor: f64,
}

impl ChainCheck {
    pub fn holds(&self) -> bool {
        self.same_sign && self.chain_holds
    }
}

pub fn same_sign_and_lambda_max_check(mu: &Mu, mu1: &Mu, alpha: f64) -> Result<ChainCheck> {
    same_sign_and_lambda_max_check_with(mu, mu1, alpha, r_alpha)
}

pub fn same_sign_and_lambda_max_check_with<R>(
    mu: &Mu,
    mu1: &Mu,
    alpha: f64,
    r: R,
) -> Result<ChainCheck>
where
    R: Fn(f64, f64, f64) -> f64,
{
    let t = identity_terms_with(mu, mu1, alpha, r)?;
    let same_sign = t.nu == 0.0 || t.quad == 0.0 || t.nu.signum() == t.quad.signum();
    let lambda_max = t.lambda.abs().max(t.lambda1.abs()).max(t.lambda2.abs());
    let third_lhs = t.lhs.abs() / 3.0;
    let third_nu = t.nu.abs() / 3.0;
    let [min, _, max] = ordered_magnitudes(mu.xi, mu1.xi);
    let floor = lower_constant(alpha) * min * pow_abs(max, alpha) / 3.0;
    let geq = |a: f64, b: f64| a >= b - REL_TOL * (1.0 + a.abs().max(b.abs()));
    let chain_holds =
        geq(lambda_max, third_lhs) && geq(third_lhs, third_nu) && geq(third_nu, floor);
    Ok(ChainCheck {
        same_sign,
        chain_holds,
        lambda_max,
        third_lhs,
        third_nu,
        floor,
    })
}

/// Campaign summary. For bound campaigns `max_rel_residual` is the largest
/// relative bound excess (negative when every bound holds strictly); for
/// identity campaigns it is the largest relative identity residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub alpha: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub max_rel_residual: f64,
    pub violations: Vec<Violation>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Bounds(ResonanceSample),
    Identity {
        mu: Mu,
        mu1: Mu,
        terms: IdentityTerms,
    },
    SignOrChain {
        mu: Mu,
        mu1: Mu,
        check: ChainCheck,
    },
}

/// Magnitude ranges of a sampling campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingRanges {
    pub xi: (f64, f64),
    pub eta: (f64, f64),
    pub lambda: (f64, f64),
}

impl Default for SamplingRanges {
    fn default() -> Self {
        Self {
            xi: (1e-3, 1e3),
            eta: (1e-3, 1e3),
            lambda: (1e-3, 1e3),
        }
    }
}

struct Shard {
    worst: f64,
    violations: Vec<Violation>,
    count: usize,
}

fn merge(alpha: f64, n: usize, seed: u64, parts: Vec<Shard>) -> CampaignReport {
    let mut worst = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    let mut total = 0;
    for p in parts {
        worst = worst.max(p.worst);
        total += p.count;
        for v in p.violations {
            if violations.len() < MAX_REPORTED_VIOLATIONS {
                violations.push(v);
            }
        }
    }
    debug_assert_eq!(total, n);
    CampaignReport {
        alpha,
        n_samples: total,
        seed,
        max_rel_residual: worst,
        violations,
    }
}

fn sample_xi_pair<G: Rng>(rng: &mut G, range: (f64, f64)) -> (f64, f64) {
    loop {
        let xi = signed_log_uniform(rng, range.0, range.1);
        let xi1 = signed_log_uniform(rng, range.0, range.1);
        if xi != xi1 {
            return (xi, xi1);
        }
    }
}

/// Bound campaign over `n` pairs `(ξ, ξ1)` with log-uniform magnitudes in
/// `ranges.xi` and random signs.
pub fn bounds_campaign(alpha: f64, n: usize, seed: u64, ranges: SamplingRanges) -> CampaignReport {
    bounds_campaign_with(alpha, n, seed, ranges, r_alpha)
}

pub fn bounds_campaign_with<R>(
    alpha: f64,
    n: usize,
    seed: u64,
    ranges: SamplingRanges,
    r: R,
) -> CampaignReport
where
    R: Fn(f64, f64, f64) -> f64 + Sync + Send,
{
    let parts = map_indexed(SHARDS, |shard| {
        let mut rng = shard_rng(seed, shard as u64);
        let count = shard_len(n, shard);
        let mut out = Shard {
            worst: f64::NEG_INFINITY,
            violations: Vec::new(),
            count,
        };
        for _ in 0..count {
            let (xi, xi1) = sample_xi_pair(&mut rng, ranges.xi);
            let s = resonance_bounds_check_with(xi, xi1, alpha, &r).expect("nondegenerate sample");
            out.worst = out.worst.max(s.relative_excess());
            if !s.holds() && out.violations.len() < MAX_REPORTED_VIOLATIONS {
                out.violations.push(Violation::Bounds(s));
            }
        }
        out
    });
    merge(alpha, n, seed, parts)
}

/// Samples `(μ, μ1)`: frequencies log-uniform in magnitude with random signs,
/// and `τ, τ1` reconstructed from log-uniform `λ, λ1`.
pub fn sample_mu_pair<G: Rng>(rng: &mut G, alpha: f64, ranges: SamplingRanges) -> (Mu, Mu) {
    let (xi, xi1) = sample_xi_pair(rng, ranges.xi);
    let eta = signed_log_uniform(rng, ranges.eta.0, ranges.eta.1);
    let eta1 = signed_log_uniform(rng, ranges.eta.0, ranges.eta.1);
    let lam = signed_log_uniform(rng, ranges.lambda.0, ranges.lambda.1);
    let lam1 = signed_log_uniform(rng, ranges.lambda.0, ranges.lambda.1);
    let mu = Mu::on_surface(xi, eta, alpha);
    let mu1 = Mu::on_surface(xi1, eta1, alpha);
    (
        Mu::new(mu.tau + lam, xi, eta),
        Mu::new(mu1.tau + lam1, xi1, eta1),
    )
}

/// Identity, sign-coherence and `|λ_max|` chain campaign.
pub fn identity_campaign(
    alpha: f64,
    n: usize,
    seed: u64,
    ranges: SamplingRanges,
) -> CampaignReport {
    identity_campaign_with(alpha, n, seed, ranges, r_alpha)
}

pub fn identity_campaign_with<R>(
    alpha: f64,
    n: usize,
    seed: u64,
    ranges: SamplingRanges,
    r: R,
) -> CampaignReport
where
    R: Fn(f64, f64, f64) -> f64 + Sync + Send,
{
    let parts = map_indexed(SHARDS, |shard| {
        let mut rng = shard_rng(seed, shard as u64);
        let count = shard_len(n, shard);
        let mut out = Shard {
            worst: 0.0,
            violations: Vec::new(),
            count,
        };
        for _ in 0..count {
            let (mu, mu1) = sample_mu_pair(&mut rng, alpha, ranges);
            let terms = identity_terms_with(&mu, &mu1, alpha, &r).expect("nondegenerate sample");
            let rel = terms.relative_residual();
            out.worst = out.worst.max(rel);
            let keep = out.violations.len() < MAX_REPORTED_VIOLATIONS;
            if !(rel <= REL_TOL) && keep {
                out.violations.push(Violation::Identity { mu, mu1, terms });
                continue;
            }
            let check = same_sign_and_lambda_max_check_with(&mu, &mu1, alpha, &r)
                .expect("nondegenerate sample");
            if !check.holds() && keep {
                out.violations
                    .push(Violation::SignOrChain { mu, mu1, check });
            }
        }
        out
    });
    merge(alpha, n, seed, parts)
}
