//! Exact verification campaigns and sampled kernel / Strichartz probes.

use serde::{Deserialize, Serialize};

use super::{write_json, Command, ExperimentConfig, Outcome};
use crate::error::{Error, Result};
use crate::estimates::exponents::select_exponents;
use crate::estimates::kernels::KernelId;
use crate::estimates::probe::{
    boundedness_probe, boundedness_probe_unchecked, ProbeReport, DEFAULT_BOXES,
};
use crate::estimates::strichartz::{bilinear_ratio_probe, strichartz_ratio_probe, DoublingReport};
use crate::grid::Grid2D;
use crate::propagator::check_alpha;
use crate::resonance::{bounds_campaign, identity_campaign, CampaignReport, SamplingRanges};
use crate::sampling::DEFAULT_SEED;

/// Agreement factor required of the Strichartz tables under grid doubling.
pub const STRICHARTZ_STABILITY: f64 = 1.2;

/// `b′` of the falsification run: far above the ceiling that `k10` needs.
pub const FALSIFICATION_B_PRIME: f64 = -0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyCase {
    pub alpha: f64,
    pub s: f64,
    /// Kernel names; empty means all.
    #[serde(default)]
    pub kernels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySettings {
    pub campaign_alphas: Vec<f64>,
    pub campaign_samples: usize,
    pub ranges: SamplingRanges,
    pub cases: Vec<VerifyCase>,
    pub boxes: Vec<f64>,
    pub probe_samples: usize,
    pub falsification: bool,
    pub seed: u64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            campaign_alphas: vec![2.0, 4.0],
            campaign_samples: 1_000_000,
            ranges: SamplingRanges::default(),
            cases: vec![
                VerifyCase {
                    alpha: 2.0,
                    s: -0.4,
                    kernels: Vec::new(),
                },
                VerifyCase {
                    alpha: 4.0,
                    s: -1.2,
                    kernels: Vec::new(),
                },
                VerifyCase {
                    alpha: 6.0,
                    s: 0.0,
                    kernels: vec!["k00".into()],
                },
            ],
            boxes: DEFAULT_BOXES.to_vec(),
            probe_samples: 1_000_000,
            falsification: true,
            seed: DEFAULT_SEED,
        }
    }
}

fn kernel_ids(names: &[String]) -> Result<Vec<KernelId>> {
    if names.is_empty() {
        return Ok(KernelId::ALL.to_vec());
    }
    names
        .iter()
        .map(|k| KernelId::parse(k).map_err(|e| Error::Config(e.to_string())))
        .collect()
}

impl VerifySettings {
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |e: Error| Error::Config(e.to_string());
        for &a in &self.campaign_alphas {
            check_alpha(a).map_err(cfg_err)?;
        }
        for c in &self.cases {
            let e = select_exponents(c.alpha, c.s).map_err(cfg_err)?;
            for id in kernel_ids(&c.kernels)? {
                id.check_admissible(&e).map_err(cfg_err)?;
            }
        }
        if self.boxes.len() < 2 || self.boxes.iter().any(|&k| !(k > 1.0 && k.is_finite())) {
            return Err(Error::Config(format!(
                "need ≥ 2 box half-widths above 1, got {:?}",
                self.boxes
            )));
        }
        if self.campaign_samples == 0 || self.probe_samples == 0 {
            return Err(Error::Config("sample counts must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignEntry {
    pub kind: String,
    pub passed: bool,
    pub report: CampaignReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub alpha: f64,
    pub s: f64,
    pub bounded: bool,
    pub report: ProbeReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Falsification {
    pub report: ProbeReport,
    /// Largest last-doubling ratio among the bounded `k10` runs.
    pub bounded_case_ratio: f64,
    pub exceeds_bounded_case: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub campaigns: Vec<CampaignEntry>,
    pub probes: Vec<ProbeSummary>,
    pub falsification: Option<Falsification>,
    pub passed: bool,
}

pub fn verify_report(s: &VerifySettings) -> Result<VerifyReport> {
    s.validate()?;
    let mut campaigns = Vec::new();
    for &alpha in &s.campaign_alphas {
        let b = bounds_campaign(alpha, s.campaign_samples, s.seed, s.ranges);
        campaigns.push(CampaignEntry {
            kind: "bounds".into(),
            passed: b.passed(),
            report: b,
        });
        let i = identity_campaign(alpha, s.campaign_samples, s.seed, s.ranges);
        campaigns.push(CampaignEntry {
            kind: "identity".into(),
            passed: i.passed(),
            report: i,
        });
    }
    let mut probes = Vec::new();
    for c in &s.cases {
        let e = select_exponents(c.alpha, c.s)?;
        for id in kernel_ids(&c.kernels)? {
            let report = boundedness_probe(id, &e, &s.boxes, s.probe_samples, s.seed)?;
            probes.push(ProbeSummary {
                alpha: c.alpha,
                s: c.s,
                bounded: report.looks_bounded(),
                report,
            });
        }
    }
    let falsification = if s.falsification {
        let c = s
            .cases
            .first()
            .ok_or_else(|| Error::Config("falsification needs a case".into()))?;
        let e = select_exponents(c.alpha, c.s)?.with_b_prime(FALSIFICATION_B_PRIME);
        let report =
            boundedness_probe_unchecked(KernelId::K10, &e, &s.boxes, s.probe_samples, s.seed)?;
        let bounded_case_ratio = probes
            .iter()
            .filter(|p| p.report.kernel == KernelId::K10)
            .filter_map(|p| p.report.last_growth())
            .fold(0.0, f64::max);
        let exceeds_bounded_case = report.last_growth().is_some_and(|g| g > bounded_case_ratio);
        Some(Falsification {
            report,
            bounded_case_ratio,
            exceeds_bounded_case,
        })
    } else {
        None
    };
    let passed = campaigns.iter().all(|c| c.passed) && probes.iter().all(|p| p.bounded);
    Ok(VerifyReport {
        campaigns,
        probes,
        falsification,
        passed,
    })
}

pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let r = verify_report(&cfg.verify)?;
    let files = vec![write_json(&cfg.output_dir, "verify.json", &r)?];
    let mut lines: Vec<String> = r
        .campaigns
        .iter()
        .map(|c| {
            format!(
                "{} alpha {}: {} samples, {} violations, max residual {:.3e}",
                c.kind,
                c.report.alpha,
                c.report.n_samples,
                c.report.violations.len(),
                c.report.max_rel_residual
            )
        })
        .collect();
    lines.extend(r.probes.iter().map(|p| {
        format!(
            "{} alpha {} s {}: last growth {:.4} ({})",
            p.report.kernel.name(),
            p.alpha,
            p.s,
            p.report.last_growth().unwrap_or(f64::NAN),
            if p.bounded { "bounded" } else { "GROWING" }
        )
    }));
    if let Some(f) = &r.falsification {
        lines.push(format!(
            "k10 with b' = {FALSIFICATION_B_PRIME}: last growth {:.4} vs bounded {:.4}",
            f.report.last_growth().unwrap_or(f64::NAN),
            f.bounded_case_ratio
        ));
    }
    Ok(Outcome {
        command: Command::Verify,
        passed: r.passed,
        lines,
        files,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrichartzSummary {
    pub linear: DoublingReport,
    pub bilinear: DoublingReport,
    pub stable: bool,
}

pub fn cmd_probe(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = &cfg.probe;
    p.validate()?;
    let e = select_exponents(p.alpha, p.s)?;
    let out = &cfg.output_dir;
    let mut files = Vec::new();
    let mut lines = Vec::new();
    let mut passed = true;
    for id in p.kernel_ids()? {
        let r = boundedness_probe(id, &e, &p.boxes, p.n_samples, p.seed)?;
        passed &= r.looks_bounded();
        lines.push(format!(
            "{}: sups {:?}, growth {:?}",
            id.name(),
            r.sup_estimates,
            r.growth_ratios
        ));
        files.push(write_json(out, &format!("probe_{}.json", id.name()), &r)?);
    }
    if p.strichartz_trials > 0 {
        let g = Grid2D::square(p.strichartz_n)?;
        let linear = strichartz_ratio_probe(p.alpha, 4.0, 4.0, p.strichartz_trials, g, p.seed)?;
        let bilinear = bilinear_ratio_probe(p.alpha, e.b, p.strichartz_trials, g, p.seed)?;
        let stable = linear.stable(STRICHARTZ_STABILITY) && bilinear.stable(STRICHARTZ_STABILITY);
        passed &= stable;
        for (name, d) in [("linear", &linear), ("bilinear", &bilinear)] {
            lines.push(format!(
                "{name} strichartz: max/median {:.4} -> {:.4}, max drift {:.4}",
                d.base.max_over_median(),
                d.doubled.max_over_median(),
                d.max_drift()
            ));
        }
        files.push(write_json(
            out,
            "strichartz.json",
            &StrichartzSummary {
                linear,
                bilinear,
                stable,
            },
        )?);
    }
    Ok(Outcome {
        command: Command::Probe,
        passed,
        lines,
        files,
    })
}
