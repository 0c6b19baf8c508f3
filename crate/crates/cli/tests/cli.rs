use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn conwill(args: &[&str]) -> Output {
    conwill_env(args, None)
}

fn conwill_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conwill"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("CONWILL_THREADS", t);
    }
    cmd.output().expect("spawn conwill")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn job_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conwill-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const BURSTALL_JOB: &str = r#"{
  "builder": {
    "variant": "cylinder-over-curve",
    "curve": {"kind": "burstall", "a": 0.2, "b": 0.02, "kappa0": 1.0, "dkappa0": 0.0, "span": [0.0, 10.0]},
    "v_span": [0.0, 2.0]
  },
  "functional": "willmore",
  "basis": {"kind": "polynomial", "degree": 2}
}"#;

#[test]
fn homogeneous_torus_is_area_critical() {
    let out =
        conwill(&["certify", "--builder", "homogeneous-torus", "--r1", "0.6", "--r2", "0.8", "--functional", "area"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["verdict"], "critical");
    assert_eq!(cert["functional"], "area");
    assert!(cert["residual"].as_f64().unwrap() < 1e-10);
    for key in ["basis", "coeffs", "grad_norm", "tol"] {
        assert!(cert.get(key).is_some(), "{key}");
    }
}

#[test]
fn clifford_energy_is_two_pi_squared() {
    let out =
        conwill(&["energy", "--builder", "homogeneous-torus", "--r1", "0.70710678", "--r2", "0.70710678", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!((report["willmore"].as_f64().unwrap() - 2.0 * PI * PI).abs() < 1e-4);
    assert!(report.get("volume").is_none());
}

#[test]
fn energy_table_lists_volume_for_closed_surfaces() {
    let out = conwill(&["energy", "--builder", "torus-of-revolution", "--big", "2", "--small", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("nodes 64 x 64, refinement 128"));
    let volume: f64 =
        text.lines().find(|l| l.starts_with("volume")).unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((volume - 2.0 * PI * PI * 2.0 * 0.25).abs() < 1e-8);
}

#[test]
fn burstall_curve_trace() {
    let out = conwill(&["curve", "--ode", "burstall", "--a", "0.2", "--b", "0.02", "--k0", "1", "--dk0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,kappa,x,y"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0, 1.0, 0.0, 0.0]);
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["length"].as_f64(), Some(10.0));
}

#[test]
fn elastica_curve_reports_energy_drift() {
    let out = conwill(&["curve", "--ode", "elastica", "--a", "1", "--b", "0.3", "--k0", "1.2", "--span", "0,40"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("s,kappa,x,y,z\n"));
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(report["energy_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn expect_critical_gates_on_the_verdict() {
    let sphere =
        ["certify", "--builder", "round-sphere", "--functional", "area", "--basis", "empty", "--resolution", "128"];
    let out = conwill(&[&sphere[..], &["--expect-critical"]].concat());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "not-critical");
    assert_eq!(conwill(&sphere).status.code(), Some(0));
}

#[test]
fn ellipse_cylinder_multiplier_from_job() {
    let job = job_file(
        "ellipse.json",
        r#"{"builder": {"variant": "cylinder-over-curve", "curve": {"kind": "ellipse", "a": 1.5, "b": 1.0}, "v_span": [0.0, 1.0]},
            "functional": "area", "resolution": 256}"#,
    );
    let out = conwill(&["certify", "--job", job.to_str().unwrap(), "--expect-critical"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["verdict"], "sufficient-condition-holds");
    assert!((cert["coeffs"][0].as_f64().unwrap() + 0.25).abs() < 1e-5);
}

#[test]
fn burstall_residual_converges_at_second_order() {
    let job = job_file("burstall.json", BURSTALL_JOB);
    let residual = |n: &str| {
        let out = conwill(&["certify", "--job", job.to_str().unwrap(), "--resolution", n]);
        assert_eq!(out.status.code(), Some(0));
        json(&out)["residual"].as_f64().unwrap()
    };
    let (r1, r2, r3) = (residual("64"), residual("128"), residual("256"));
    assert!(r1 / r2 >= 4.0 && r2 / r3 >= 4.0, "{r1:e} {r2:e} {r3:e}");
}

#[test]
fn unknown_job_keys_are_rejected() {
    let job = job_file("typo.json", r#"{"builder": {"variant": "round-sphere", "x_max": 4.0}, "resolutoin": 32}"#);
    let out = conwill(&["energy", "--job", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("energy") && err.contains("resolutoin"), "{err}");
}

#[test]
fn resolution_is_bounded() {
    for n in ["7", "4097"] {
        let out =
            conwill(&["build", "--builder", "homogeneous-torus", "--r1", "0.6", "--r2", "0.8", "--resolution", n]);
        assert_eq!(out.status.code(), Some(1));
    }
    let job = job_file("negative.json", r#"{"builder": {"variant": "round-sphere", "x_max": 4.0}, "tolerance": -1.0}"#);
    assert_eq!(conwill(&["certify", "--job", job.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn bad_radii_exit_with_error() {
    let out = conwill(&["certify", "--builder", "homogeneous-torus", "--r1", "0.6", "--r2", "0.7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: certify"));
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let job = job_file("burstall-det.json", BURSTALL_JOB);
    let runs: Vec<Vec<&str>> = vec![
        vec!["certify", "--job", job.to_str().unwrap(), "--resolution", "96"],
        vec!["check-gradients", "--builder", "homogeneous-torus", "--r1", "0.6", "--r2", "0.8", "--seed", "7"],
        vec!["curve", "--ode", "elastica", "--a", "1", "--b", "0.3", "--k0", "1.2"],
    ];
    for args in runs {
        let one = conwill_env(&args, Some("1"));
        let four = conwill_env(&args, Some("4"));
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.stderr, four.stderr, "{args:?}");
    }
}

#[test]
fn gradient_check_csv() {
    let out = conwill(&[
        "check-gradients",
        "--builder",
        "torus-of-revolution",
        "--big",
        "2",
        "--small",
        "0.5",
        "--resolution",
        "96",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("functional,step,analytic,fd,rel_err"));
    let extrapolated: Vec<(String, f64)> = lines
        .filter(|l| l.contains(",extrapolated,"))
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].to_owned(), cols[4].parse().unwrap())
        })
        .collect();
    let names: Vec<&str> = extrapolated.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["area", "volume", "willmore"]);
    assert!(extrapolated.iter().all(|(_, e)| *e < 1e-3), "{extrapolated:?}");
}

#[test]
fn exports() {
    let torus = ["--builder", "homogeneous-torus", "--r1", "0.6", "--r2", "0.8", "--resolution", "8"];
    let obj = conwill(&[&["export"][..], &torus].concat());
    assert_eq!(obj.status.code(), Some(0));
    let text = String::from_utf8(obj.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 64);
    assert!(text.lines().any(|l| l.starts_with("f ")));

    let hopf = conwill(&[&["export", "--format", "hopf-csv"][..], &torus].concat());
    let text = String::from_utf8(hopf.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("node,u,v,re_phi,im_phi"));
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("conwill-cli-{}-build.json", std::process::id()));
    let args = ["build", "--builder", "torus-of-revolution", "--big", "2", "--small", "0.5"];
    let stdout = conwill(&args).stdout;
    let out = conwill(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn identity_table_passes() {
    let out = conwill(&["verify-identities"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("pass")).count(), 4);
}
