//! Monte-Carlo supremum probes for the kernels.
//!
//! Points are drawn conditionally on the kernel's region. Inside a box of
//! half-width `K`:
//!
//! * `A00`: `|ξ2| ∈ [lo, 1]`, `|ξ1| ∈ [lo, |ξ2|]`;
//! * `Ξ1`: `|ξ2| ∈ [1, K]`, `|ξ1| ∈ [lo, |ξ2|/3]`;
//! * `Ξ2`: `|ξ2| ∈ [1, K]`, `|ξ1| ∈ [|ξ2|/3, |ξ2|]`;
//! * `|η1|, |η2| ∈ [lo, K]`,
//!
//! all log-uniform with random signs. The two non-dominant modulations are
//! drawn log-uniform in `[lo, K]` and the dominant one follows from the
//! resonance identity `λ1 + λ2 − λ = ν + (ξη1 − ηξ1)²/(ξ ξ1 ξ2)`, which keeps
//! it as small as the region allows. `τ` and `τ1` are then reconstructed,
//! the point is re-classified from scratch, and it is rejected unless it
//! lands in the requested region.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::exponents::ExponentSet;
use super::kernels::{kernel_unchecked, majorant, KernelId, KernelPoint};
use super::regions::{classify_region, RegionTag};
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::propagator::phi;
use crate::resonance::{r_alpha, Mu};
use crate::sampling::{log_uniform, shard_len, shard_rng, signed_log_uniform, SHARDS};

/// Smallest sampled magnitude.
pub const LOW: f64 = 1e-3;

/// Last-doubling growth ratio accepted as the bounded-kernel signature.
pub const GROWTH_LIMIT: f64 = 1.1;

pub const DEFAULT_BOXES: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

/// Rejection sampling gives up after `MAX_ATTEMPT_FACTOR · n` draws.
const MAX_ATTEMPT_FACTOR: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub kernel: KernelId,
    pub exponents: ExponentSet,
    pub boxes: Vec<f64>,
    pub sup_estimates: Vec<f64>,
    pub growth_ratios: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    /// Per box, `sup k / majorant`: the empirical constant of the majorant bound.
    pub majorant_constants: Vec<f64>,
    /// Per box, sampled points drawn before acceptance.
    pub attempts: Vec<usize>,
}

impl ProbeReport {
    pub fn last_growth(&self) -> Option<f64> {
        self.growth_ratios.last().copied()
    }

    pub fn looks_bounded(&self) -> bool {
        self.last_growth().is_some_and(|g| g <= GROWTH_LIMIT)
    }

    /// Growth of the majorant constant at the last doubling.
    pub fn majorant_growth(&self) -> Option<f64> {
        let m = &self.majorant_constants;
        (m.len() >= 2).then(|| m[m.len() - 1] / m[m.len() - 2])
    }
}

fn draw_xi<G: Rng>(rng: &mut G, tag: RegionTag, k: f64) -> (f64, f64) {
    let sign = |rng: &mut G, v: f64| if rng.random::<bool>() { v } else { -v };
    let (m1, m2) = match tag.xi_region() {
        None => {
            let m2 = log_uniform(rng, LOW, 1.0);
            (log_uniform(rng, LOW, m2), m2)
        }
        Some(1) => {
            let m2 = log_uniform(rng, 1.0, k);
            (log_uniform(rng, LOW, m2 / 3.0), m2)
        }
        Some(_) => {
            let m2 = log_uniform(rng, 1.0, k);
            (log_uniform(rng, m2 / 3.0, m2), m2)
        }
    };
    (sign(rng, m1), sign(rng, m2))
}

/// One candidate `(μ1, μ)` aimed at `tag`; `None` if it falls outside.
pub fn draw_candidate<G: Rng>(rng: &mut G, tag: RegionTag, k: f64, alpha: f64) -> Option<(Mu, Mu)> {
    let (xi1, xi2) = draw_xi(rng, tag, k);
    let xi = xi1 + xi2;
    if xi == 0.0 {
        return None;
    }
    let eta1 = signed_log_uniform(rng, LOW, k);
    let eta2 = signed_log_uniform(rng, LOW, k);
    let eta = eta1 + eta2;
    let cross = xi * eta1 - eta * xi1;
    let d = r_alpha(xi, xi1, alpha) + cross * cross / (xi * xi1 * xi2);
    let l_a = signed_log_uniform(rng, LOW, k);
    let l_b = signed_log_uniform(rng, LOW, k);
    let (lam, lam1) = match tag.lambda_index() {
        None => (l_a, l_b),
        Some(0) => (l_a + l_b - d, l_a),
        Some(1) => (l_a, d + l_a - l_b),
        Some(_) => (l_a, l_b),
    };
    let omega = |x: f64, y: f64| phi(x, alpha) - y * y / x;
    let mu = Mu::new(lam + omega(xi, eta), xi, eta);
    let mu1 = Mu::new(lam1 + omega(xi1, eta1), xi1, eta1);
    (classify_region(&mu1, &mu, alpha).ok()? == tag).then_some((mu1, mu))
}

struct BoxShard {
    sup: f64,
    ratio_sup: f64,
    attempts: usize,
    accepted: usize,
}

fn probe_box(
    id: KernelId,
    e: &ExponentSet,
    k: f64,
    n: usize,
    seed: u64,
    box_index: usize,
) -> Result<BoxShard> {
    let tag = id.region();
    let parts = map_indexed(SHARDS, |shard| {
        let stream = ((box_index as u64) << 32) | shard as u64;
        let mut rng = shard_rng(seed, stream);
        let want = shard_len(n, shard);
        let mut out = BoxShard {
            sup: 0.0,
            ratio_sup: 0.0,
            attempts: 0,
            accepted: 0,
        };
        while out.accepted < want && out.attempts < MAX_ATTEMPT_FACTOR * want.max(1) {
            out.attempts += 1;
            let Some((mu1, mu)) = draw_candidate(&mut rng, tag, k, e.alpha) else {
                continue;
            };
            out.accepted += 1;
            let p = KernelPoint::from_mu(&mu1, &mu, e.alpha);
            let v = kernel_unchecked(id, &p, e);
            out.sup = out.sup.max(v);
            let m = majorant(id, &p, e);
            if m > 0.0 {
                out.ratio_sup = out.ratio_sup.max(v / m);
            }
        }
        out
    });
    let mut total = BoxShard {
        sup: 0.0,
        ratio_sup: 0.0,
        attempts: 0,
        accepted: 0,
    };
    for p in parts {
        total.sup = total.sup.max(p.sup);
        total.ratio_sup = total.ratio_sup.max(p.ratio_sup);
        total.attempts += p.attempts;
        total.accepted += p.accepted;
    }
    if total.accepted < n {
        return Err(Error::Domain(format!(
            "{}: only {} of {n} samples landed in {:?} at K = {k}",
            id.name(),
            total.accepted,
            tag
        )));
    }
    Ok(total)
}

/// Probe with the admissibility gate.
pub fn boundedness_probe(
    id: KernelId,
    e: &ExponentSet,
    boxes: &[f64],
    n: usize,
    seed: u64,
) -> Result<ProbeReport> {
    id.check_admissible(e)?;
    boundedness_probe_unchecked(id, e, boxes, n, seed)
}

/// Probe without the admissibility gate (used for falsification runs).
pub fn boundedness_probe_unchecked(
    id: KernelId,
    e: &ExponentSet,
    boxes: &[f64],
    n: usize,
    seed: u64,
) -> Result<ProbeReport> {
    if boxes.iter().any(|&k| !(k > 1.0 && k.is_finite())) {
        return Err(Error::Config(format!(
            "box half-widths must exceed 1, got {boxes:?}"
        )));
    }
    let mut sup_estimates = Vec::with_capacity(boxes.len());
    let mut majorant_constants = Vec::with_capacity(boxes.len());
    let mut attempts = Vec::with_capacity(boxes.len());
    for (i, &k) in boxes.iter().enumerate() {
        let r = probe_box(id, e, k, n, seed, i)?;
        sup_estimates.push(r.sup);
        majorant_constants.push(r.ratio_sup);
        attempts.push(r.attempts);
    }
    let growth_ratios = sup_estimates.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(ProbeReport {
        kernel: id,
        exponents: *e,
        boxes: boxes.to_vec(),
        sup_estimates,
        growth_ratios,
        n_samples: n,
        seed,
        majorant_constants,
        attempts,
    })
}
