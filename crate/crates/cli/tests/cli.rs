use std::path::Path;
use std::process::{Command, Output};

use qpdiff_cli::{FieldRecord, RunConfig};
use tempfile::TempDir;

const SIMPLE: &str = r#"
[incidence]
k0 = 1.0
theta0 = 1.0471975511965976
phi0 = 3.9269908169744957
"#;

const COMPLICATED: &str = r#"
[incidence]
k0 = 1.0
theta0 = 1.0471975511965976
phi0 = 0.7853981633974483
"#;

fn qpdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpdiff")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn records(bytes: &[u8]) -> Vec<FieldRecord> {
    std::str::from_utf8(bytes).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn config_survives_a_toml_round_trip() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/small.toml")).unwrap();
    let a = RunConfig::from_toml(&text).unwrap();
    assert_eq!(RunConfig::from_toml(&a.to_toml()).unwrap(), a);
}

#[test]
fn field_emits_one_record_per_node() {
    let dir = TempDir::new().unwrap();
    let cfg = format!(
        "{SIMPLE}\n[grid]\nkind = \"spherical\"\nr = 80.0\ntheta = [0.5, 1.0]\ntheta_count = 2\nphi = [-0.6, 2.0]\nphi_count = 2\n"
    );
    let path = write(&dir, "run.toml", &cfg);
    let out = qpdiff(&["field", "--config", &path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out.stdout);
    assert_eq!(recs.len(), 4);
    assert_eq!((recs[1].direction.theta, recs[1].direction.phi), (0.5, 2.0));
    assert!(recs.iter().all(|r| r.components.len() == 4));
}

#[test]
fn total_field_vanishes_on_the_plate() {
    let dir = TempDir::new().unwrap();
    for (tag, inc) in [("simple", SIMPLE), ("complicated", COMPLICATED)] {
        let cfg = format!("{inc}\n[grid]\nkind = \"planar\"\nx1 = [0.5, 40.0]\nx2 = [0.5, 40.0]\nn1 = 5\nn2 = 5\n");
        let path = write(&dir, &format!("{tag}.toml"), &cfg);
        let out = qpdiff(&["field", "--config", &path]);
        assert!(out.status.success());
        let recs = records(&out.stdout);
        assert_eq!(recs.len(), 25);
        for r in &recs {
            assert!(r.total.norm() < 1e-12, "{tag}: |u| = {} at {:?}", r.total.norm(), r.x);
        }
    }
}

#[test]
fn field_output_does_not_depend_on_the_worker_count() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{COMPLICATED}\n[grid]\nkind = \"planar\"\nx1 = [-60.0, 60.0]\nx2 = [-60.0, 60.0]\nn1 = 9\nn2 = 7\n");
    let path = write(&dir, "run.toml", &cfg);
    let one = qpdiff(&["field", "--config", &path, "--jobs", "1"]);
    let many = qpdiff(&["field", "--config", &path, "--jobs", "5"]);
    let again = qpdiff(&["field", "--config", &path, "--jobs", "1"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, again.stdout);
    let csv = qpdiff(&["field", "--config", &path, "--format", "csv"]);
    assert_eq!(std::str::from_utf8(&csv.stdout).unwrap().lines().count(), 64);
}

#[test]
fn classify_lists_the_traces_of_each_case() {
    let dir = TempDir::new().unwrap();
    let simple = write(&dir, "s.toml", SIMPLE);
    let out = qpdiff(&["classify", "--config", &simple]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["case"], "Simple");
    let traces = v["traces"].as_array().unwrap();
    // Five real traces plus the third-quadrant arc of the circle.
    assert_eq!(traces.len(), 6);
    assert_eq!(traces.last().unwrap()["id"], "Cc");
    let kinds: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p["kind"].as_str().unwrap()).collect();
    assert!(!kinds.contains(&"TripleCrossing"));

    let complicated = write(&dir, "c.toml", &format!("direction = [1.5707963267948966, -0.3]\n{COMPLICATED}"));
    let out = qpdiff(&["classify", "--config", &complicated]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["case"], "Complicated");
    let sd1 = v["points"].as_array().unwrap().iter().find(|p| p["kind"] == "TripleCrossing").expect("triple crossing");
    assert_eq!(sd1["label"], "SD1");
    assert_eq!(sd1["active"], true);
}

#[test]
fn malformed_config_exits_with_code_two_and_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.toml", &SIMPLE.replace("k0 = 1.0", "k0 = \"one\""));
    let target = dir.path().join("out.jsonl");
    let out = qpdiff(&["field", "--config", &bad, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k0"));
    assert!(!target.exists());

    let grazing = write(&dir, "graze.toml", &SIMPLE.replace("theta0 = 1.0471975511965976", "theta0 = 1.5707963267948966"));
    assert_eq!(qpdiff(&["classify", "--config", &grazing]).status.code(), Some(2));
    let missing = dir.path().join("absent.toml");
    assert_eq!(qpdiff(&["classify", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_reports_every_suite() {
    let out = qpdiff(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8);

    let perturbed = qpdiff(&["verify", "--suite", "residues", "--perturb", "1e-5"]);
    assert_eq!(perturbed.status.code(), Some(3));
    assert_eq!(qpdiff(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn plot_draws_planar_and_directivity_views() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{COMPLICATED}\n[grid]\nkind = \"planar\"\nx1 = [-80.0, 80.0]\nx2 = [-80.0, 80.0]\nn1 = 21\nn2 = 21\n");
    let path = write(&dir, "plane.toml", &cfg);
    let data = dir.path().join("plane.jsonl");
    assert!(qpdiff(&["field", "--config", &path, "--out", data.to_str().unwrap()]).status.success());
    let svg = dir.path().join("sd1.svg");
    let out = qpdiff(&["plot", "--input", data.to_str().unwrap(), "--out", svg.to_str().unwrap(), "--quantity", "SD1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("SD1"));

    let cfg = format!(
        "{SIMPLE}\n[grid]\nkind = \"spherical\"\nr = 150.0\ntheta = [0.6, 1.0]\ntheta_count = 2\nphi = [0.0, 6.2]\nphi_count = 63\n"
    );
    let path = write(&dir, "sphere.toml", &cfg);
    let data = dir.path().join("sphere.jsonl");
    assert!(qpdiff(&["field", "--config", &path, "--out", data.to_str().unwrap()]).status.success());
    let polar = dir.path().join("polar.svg");
    let out = qpdiff(&["plot", "--input", data.to_str().unwrap(), "--out", polar.to_str().unwrap(), "--theta", "1.0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&polar).unwrap().starts_with("<svg"));

    let empty = write(&dir, "empty.jsonl", "");
    let nowhere = dir.path().join("empty.svg");
    let out = qpdiff(&["plot", "--input", &empty, "--out", nowhere.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!nowhere.exists());
}
