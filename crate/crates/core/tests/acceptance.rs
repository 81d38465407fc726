//! Acceptance run: one pass/fail line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kp2_core::estimates::exponents::{
    admissibility_report, regularity_threshold, select_exponents,
};
use kp2_core::estimates::kernels::KernelId;
use kp2_core::estimates::probe::{boundedness_probe, DEFAULT_BOXES};
use kp2_core::estimates::strichartz::{bilinear_ratio_probe, strichartz_ratio_probe};
use kp2_core::experiments::{
    picard_study, profile_data, run_simulation, scaling_report, temporal_order, ConvergeSettings,
    InitialData, NormSettings, Profile, ScalingSettings, SimConfig, STRICHARTZ_STABILITY,
};
use kp2_core::grid::{
    forward_transform, inverse_transform, project_zero_x_mean, Grid2D, PhysicalField,
};
use kp2_core::norms::{bourgain_norm, i_sigma_space_time, BourgainWeights, SpaceTimeField};
use kp2_core::propagator::apply_linear;
use kp2_core::resonance::{bounds_campaign, identity_campaign, SamplingRanges};
use kp2_core::sampling::{shard_rng, DEFAULT_SEED};
use kp2_core::{Complex64, SpectralField};
use rand::Rng;

const CAMPAIGN_SAMPLES: usize = 1_000_000;
const PROBE_SAMPLES: usize = 1_000_000;
const CAMPAIGN_ALPHAS: [f64; 4] = [1.5, 2.0, 4.0, 6.0];

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn resonance_bounds() -> Verdict {
    let start = Instant::now();
    let mut violations = 0;
    for &a in &CAMPAIGN_ALPHAS {
        violations += bounds_campaign(a, CAMPAIGN_SAMPLES, DEFAULT_SEED, SamplingRanges::default())
            .violations
            .len();
    }
    let t = start.elapsed();
    verdict(
        violations == 0 && t < Duration::from_secs(10),
        format!(
            "{violations} violations over 4 x 1e6 samples in {:.2}s (limit 10s)",
            t.as_secs_f64()
        ),
    )
}

fn resonance_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for &a in &CAMPAIGN_ALPHAS {
        let r = identity_campaign(a, CAMPAIGN_SAMPLES, DEFAULT_SEED, SamplingRanges::default());
        worst = worst.max(r.max_rel_residual);
        violations += r.violations.len();
    }
    verdict(
        worst <= 1e-9 && violations == 0,
        format!(
            "max relative residual {worst:.3e} (limit 1e-9), {violations} sign/chain violations"
        ),
    )
}

fn exponent_system() -> Verdict {
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    let mut cases = 0;
    for &a in &[1.4, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0] {
        let th = regularity_threshold(a);
        for j in 1..=20 {
            let s = th + 0.05 * j as f64;
            cases += 1;
            match select_exponents(a, s) {
                Ok(e) => {
                    for c in admissibility_report(&e) {
                        worst = worst.min(c.slack);
                        failures += usize::from(!c.satisfied);
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12;
    let e4 = select_exponents(4.0, -1.2).expect("admissible");
    let e2 = select_exponents(2.0, -0.4).expect("admissible");
    let hand = close(e4.eps, 0.0225)
        && close(e4.b1, 0.0)
        && close(e4.sigma, 0.5)
        && close(e4.b, 0.51125)
        && close(e4.b_prime, -0.4775)
        && close(e2.eps, 0.03)
        && close(e2.b1, 0.03)
        && close(e2.sigma, 0.53);
    verdict(
        failures == 0 && hand,
        format!("{cases} (alpha, s) cases, {failures} failures, smallest slack {worst:.3e}; worked instances match: {hand}"),
    )
}

fn kernel_boundedness() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (a, s) in [(2.0, -0.4), (4.0, -1.2)] {
        let e = select_exponents(a, s).expect("admissible");
        for id in KernelId::ALL {
            match boundedness_probe(id, &e, &DEFAULT_BOXES, PROBE_SAMPLES, DEFAULT_SEED) {
                Ok(r) => {
                    let g = r.last_growth().unwrap_or(f64::INFINITY);
                    worst = worst.max(g);
                    if !r.looks_bounded() {
                        failures.push(format!("{}@{a}:{g:.3}", id.name()));
                    }
                }
                Err(err) => failures.push(format!("{}@{a}: {err}", id.name())),
            }
        }
    }
    let t = start.elapsed();
    verdict(
        failures.is_empty() && t < Duration::from_secs(120),
        format!(
            "16 probes, worst last-doubling ratio {worst:.4} (limit 1.1), {:.1}s (limit 120s){}",
            t.as_secs_f64(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    )
}

fn l2_conservation() -> Verdict {
    let sim = SimConfig {
        alpha: 2.0,
        nx: 256,
        ny: 256,
        dt: 1e-3,
        t_end: 1.0,
        diagnostics_stride: 10,
        initial: InitialData::Profile {
            profile: Profile::GaussianDx,
            amplitude: 1.0,
            width: 2.0,
        },
        ..SimConfig::default()
    };
    let u0 = profile_data(sim.grid().unwrap(), Profile::GaussianDx, 1.0, 2.0).unwrap();
    match run_simulation(&u0, &sim, &NormSettings::default(), |_, _, _| Ok(())) {
        Ok(o) => {
            let d = o.relative_l2_drift();
            verdict(
                d <= 1e-6,
                format!("relative drift {d:.3e} over 1000 steps (limit 1e-6)"),
            )
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

fn scaling_symmetry() -> Verdict {
    match scaling_report(&ScalingSettings::default()) {
        Ok(r) => {
            let worst_exp = r.rows.iter().map(|x| x.error).fold(0.0, f64::max);
            let critical = r
                .rows
                .iter()
                .any(|x| x.alpha == 2.0 && x.s1 == -0.5 && x.s2 == 0.0);
            let worst_traj = r
                .trajectories
                .iter()
                .map(|t| t.max_relative_l2)
                .fold(0.0, f64::max);
            verdict(
                r.passed && critical && r.rows.len() >= 6,
                format!(
                    "{} exponents, worst error {worst_exp:.2e} (limit 1e-9); rescaled trajectories {worst_traj:.2e} (limit 1e-5)",
                    r.rows.len()
                ),
            )
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

fn random_field(g: Grid2D, seed: u64) -> SpectralField {
    let mut rng = shard_rng(seed, 0);
    let c = (0..g.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    project_zero_x_mean(&SpectralField::new(g, c).unwrap())
}

fn fixed_point() -> Verdict {
    let log = match picard_study(&ConvergeSettings::default()) {
        Ok(l) => l,
        Err(e) => return verdict(false, e.to_string()),
    };
    let g = Grid2D::square(16).unwrap();
    let u = SpaceTimeField::free_evolution(&random_field(g, 11), 2.0, 4.0, 64).unwrap();
    let e = select_exponents(2.0, -0.4).unwrap();
    let w = BourgainWeights {
        s1: e.s,
        s2: 0.0,
        b: e.b,
        sigma: e.sigma,
    };
    let a = bourgain_norm(&u, 2.0, w);
    let b = bourgain_norm(
        &i_sigma_space_time(&u, w.sigma),
        2.0,
        BourgainWeights { sigma: 0.0, ..w },
    );
    let iso = (a - b).abs() / a;
    verdict(
        log.asymptotic_ratio < 0.5 && log.etdrk4_mismatch <= 1e-6 && iso <= 1e-10,
        format!(
            "contraction ratio {:.3e} (limit 0.5), ETDRK4 mismatch {:.3e} (limit 1e-6), I_sigma isometry {iso:.2e} (limit 1e-10)",
            log.asymptotic_ratio, log.etdrk4_mismatch
        ),
    )
}

fn strichartz_probes() -> Verdict {
    let g = Grid2D::square(32).unwrap();
    let b = select_exponents(2.0, -0.4).unwrap().b;
    let lin = strichartz_ratio_probe(2.0, 4.0, 4.0, 20, g, DEFAULT_SEED);
    let bil = bilinear_ratio_probe(2.0, b, 20, g, DEFAULT_SEED);
    match (lin, bil) {
        (Ok(l), Ok(bl)) => verdict(
            l.stable(STRICHARTZ_STABILITY) && bl.stable(STRICHARTZ_STABILITY),
            format!(
                "linear max/median {:.3}/{:.3}, drift {:.4}; bilinear max/median {:.3}/{:.3}, drift {:.4} (limit 1.2)",
                l.base.max_over_median(),
                l.doubled.max_over_median(),
                l.max_drift(),
                bl.base.max_over_median(),
                bl.doubled.max_over_median(),
                bl.max_drift()
            ),
        ),
        (l, bl) => verdict(false, format!("{:?} {:?}", l.err(), bl.err())),
    }
}

fn unit_layer() -> Verdict {
    let g = Grid2D::new(64, 32, 10.0, 7.0).unwrap();
    let mut rng = shard_rng(5, 1);
    let values: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let u = PhysicalField::from_real(g, &values).unwrap();
    let f = forward_transform(&u);
    let back = inverse_transform(&f);
    let round = back
        .values()
        .iter()
        .zip(u.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let parseval = (f.l2_norm() - u.l2_norm()).abs() / u.l2_norm();
    let h = random_field(g, 6);
    let mut unit: f64 = 0.0;
    let mut group: f64 = 0.0;
    for (s, t) in [(0.3, 1.1), (-2.5, 0.7), (4.0, -1.5)] {
        let a = apply_linear(&apply_linear(&h, s, 2.5), t, 2.5);
        let b = apply_linear(&h, s + t, 2.5);
        unit = unit.max((a.l2_norm() - h.l2_norm()).abs() / h.l2_norm());
        group = group.max(a.sub(&b).unwrap().l2_norm() / h.l2_norm());
    }
    let c = ConvergeSettings::default();
    let u0 = kp2_core::experiments::initial_data(
        Grid2D::square(c.temporal_n).unwrap(),
        &c.temporal_initial,
    )
    .unwrap();
    let (_, order) = temporal_order(&u0, c.alpha, c.temporal_dt, c.temporal_t_end).unwrap();
    let worst = round.max(parseval).max(unit).max(group);
    verdict(
        worst <= 1e-12 && order >= 3.7,
        format!(
            "round-trip {round:.1e}, Parseval {parseval:.1e}, unitarity {unit:.1e}, group law {group:.1e} (limit 1e-12); ETDRK4 order {order:.3} (min 3.7)"
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("resonance bounds", resonance_bounds),
        ("resonance identity and chain", resonance_identity),
        ("exponent system", exponent_system),
        ("kernel boundedness", kernel_boundedness),
        ("L2 conservation", l2_conservation),
        ("scaling symmetry", scaling_symmetry),
        ("fixed-point scheme", fixed_point),
        ("Strichartz probes", strichartz_probes),
        ("unit layer", unit_layer),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        failed += usize::from(!v.passed);
        println!(
            "criterion {} [{}] {name}: {} ({:.1}s)",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
