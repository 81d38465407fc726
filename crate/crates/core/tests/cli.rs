use std::path::Path;
use std::process::Command;

use kp2_core::experiments::{EXIT_CONFIG, EXIT_INSTABILITY, EXIT_OK, EXIT_VERIFICATION};
use kp2_core::resonance::{bounds_campaign, bounds_campaign_with, r_alpha, SamplingRanges};
use kp2_core::sampling::DEFAULT_SEED;
use serde_json::{json, Value};

fn run(cmd: &str, dir: &Path, cfg: &Value, extra: &[&str]) -> (i32, String) {
    run_with_threads(cmd, dir, cfg, extra, None)
}

fn run_with_threads(
    cmd: &str,
    dir: &Path,
    cfg: &Value,
    extra: &[&str],
    threads: Option<usize>,
) -> (i32, String) {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    let mut command = Command::new(env!("CARGO_BIN_EXE_kp2"));
    if let Some(n) = threads {
        command.env("KP2_THREADS", n.to_string());
    }
    let out = command
        .arg(cmd)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap();
    let text =
        String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn small_verify() -> Value {
    json!({
        "verify": {
            "campaign_samples": 5000,
            "probe_samples": 5000,
            "boxes": [10.0, 20.0],
            "cases": [{ "alpha": 2.0, "s": -0.4, "kernels": ["k00"] }],
            "falsification": false
        }
    })
}

#[test]
fn small_simulation_succeeds_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "sim": {
            "nx": 32, "ny": 32, "dt": 0.01, "t_end": 0.1, "checkpoint_stride": 5,
            "initial": { "kind": "profile", "profile": "gaussian-dx", "amplitude": 0.1, "width": 3.0 }
        }
    });
    let (code, text) = run("simulate", dir.path(), &cfg, &[]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(dir.path().join("out/trajectory.csv").exists());
    assert!(dir
        .path()
        .join("out/checkpoints/state_000005.kp2f")
        .exists());
}

#[test]
fn malformed_config_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(
        "simulate",
        dir.path(),
        &json!({ "sim": { "nx": 32, "bogus": 1 } }),
        &[],
    );
    assert_eq!(code, EXIT_CONFIG);
    let (code, _) = run(
        "simulate",
        dir.path(),
        &json!({ "sim": { "dt": 0.03, "t_end": 0.1 } }),
        &[],
    );
    assert_eq!(code, EXIT_CONFIG);
    let (code, _) = run("verify", dir.path(), &json!({ "command": "simulate" }), &[]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _) = run(
        "verify",
        dir.path(),
        &json!({ "verify": { "cases": [{ "alpha": 2.0, "s": -0.5, "kernels": [] }] } }),
        &[],
    );
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn unmet_convergence_target_exits_with_verification_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "converge": {
            "temporal_n": 32,
            "min_order": 10.0,
            "spatial_sizes": [16, 32, 64],
            "spatial_reference": 128,
            "spatial_ny": 16,
            "picard_n": 16
        }
    });
    let (code, text) = run("converge", dir.path(), &cfg, &[]);
    assert_eq!(code, EXIT_VERIFICATION, "{text}");
    assert!(text.contains("converge: FAIL"));
}

#[test]
fn blow_up_exits_with_instability_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "sim": {
            "nx": 32, "ny": 32, "dt": 0.5, "t_end": 5.0,
            "initial": { "kind": "profile", "profile": "gaussian-dx", "amplitude": 200.0, "width": 1.0 }
        }
    });
    let (code, text) = run("simulate", dir.path(), &cfg, &[]);
    assert_eq!(code, EXIT_INSTABILITY, "{text}");
}

#[test]
fn verify_reports_are_bit_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ca, _) = run("verify", a.path(), &small_verify(), &["--seed", "77"]);
    let (cb, _) = run("verify", b.path(), &small_verify(), &["--seed", "77"]);
    assert_eq!((ca, cb), (EXIT_OK, EXIT_OK));
    let ra = std::fs::read(a.path().join("out/verify.json")).unwrap();
    let rb = std::fs::read(b.path().join("out/verify.json")).unwrap();
    assert_eq!(ra, rb);
    let report: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["campaigns"][0]["report"]["seed"], 77);
}

#[test]
fn verify_report_is_independent_of_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ca, _) = run_with_threads("verify", a.path(), &small_verify(), &[], Some(1));
    let (cb, _) = run_with_threads("verify", b.path(), &small_verify(), &[], Some(5));
    assert_eq!((ca, cb), (EXIT_OK, EXIT_OK));
    assert_eq!(
        std::fs::read(a.path().join("out/verify.json")).unwrap(),
        std::fs::read(b.path().join("out/verify.json")).unwrap()
    );
}

#[test]
fn sign_error_in_resonance_function_fails_bounds_campaign() {
    let ranges = SamplingRanges::default();
    assert!(bounds_campaign(2.0, 20_000, DEFAULT_SEED, ranges).passed());
    let mutated = bounds_campaign_with(2.0, 20_000, DEFAULT_SEED, ranges, |xi, xi1, a| {
        r_alpha(xi, xi1, a) + 2.0 * kp2_core::resonance::phi_alpha(xi1, a)
    });
    assert!(!mutated.passed());
}
