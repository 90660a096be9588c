use std::fs;
use std::path::Path;
use std::process::Command;

use gcifc::cli::{main_with_args, REGION_FILES};
use gcifc::export;
use gcifc::RateRegion;

fn run(args: &[&str], out_dir: Option<&Path>) -> (i32, String, String) {
    let mut v: Vec<String> = std::iter::once("gcifc").chain(args.iter().copied()).map(String::from).collect();
    if let Some(d) = out_dir {
        v.push("--out".into());
        v.push(d.display().to_string());
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with_args(v, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const GAP_CHANNEL: [&str; 8] = ["--a-re", "-1", "--b-mag", "2", "--p1", "10", "--p2", "10"];

fn with_channel<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&GAP_CHANNEL);
    v.extend_from_slice(extra);
    v
}

fn region_csv(dir: &Path, stem: &str) -> RateRegion {
    let pts = export::read_region(fs::File::open(dir.join(format!("{stem}.csv"))).unwrap()).unwrap();
    RateRegion::from_vertices(pts).unwrap()
}

#[test]
fn region_writes_nested_polygons() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out, err) =
        run(&with_channel("region", &["--alpha-grid", "51", "--lambda-grid", "21"]), Some(tmp.path()));
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), REGION_FILES.len());
    let outer = region_csv(tmp.path(), "outer_region");
    for stem in &REGION_FILES[1..] {
        let inner = region_csv(tmp.path(), stem);
        assert!(outer.contains_region(&inner, 1e-9), "{stem}");
    }
    let corners: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("corners.json")).unwrap()).unwrap();
    assert_eq!(corners["A"]["r1"], 0.0);
    assert!(corners["envelope"]["sum_max"].as_f64().unwrap() > 0.0);
    assert!(!tmp.path().join("regions.svg").exists());
}

#[test]
fn region_json_and_svg_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let args = with_channel("region", &["--alpha-grid", "21", "--lambda-grid", "11", "--format", "json"]);
    assert_eq!(run(&args, Some(tmp.path())).0, 0);
    let text = fs::read_to_string(tmp.path().join("outer_region.json")).unwrap();
    let r: RateRegion = serde_json::from_str(&text).unwrap();
    assert!(r.area() > 0.0);

    let tmp = tempfile::tempdir().unwrap();
    let args = with_channel("region", &["--alpha-grid", "21", "--lambda-grid", "11", "--format", "svg"]);
    assert_eq!(run(&args, Some(tmp.path())).0, 0);
    assert!(fs::read_to_string(tmp.path().join("regions.svg")).unwrap().starts_with("<svg"));
    assert!(tmp.path().join("outer_region.csv").exists());
}

#[test]
fn weak_channel_has_no_corners() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["region", "--a-re", "0.5", "--b-mag", "0.5", "--p1", "1", "--p2", "1", "--alpha-grid", "21"];
    assert_eq!(run(&args, Some(tmp.path())).0, 0);
    let corners: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("corners.json")).unwrap()).unwrap();
    assert!(corners["A"].is_null() && corners["envelope"].is_null());
}

#[test]
fn lambda_sweep_peaks_at_costa_coefficient() {
    let tmp = tempfile::tempdir().unwrap();
    let args =
        ["lambda-sweep", "--a-re", "0.5477225575051661", "--b-mag", "1.4142135623730951", "--p1", "6", "--p2", "6"];
    let (code, _, err) = run(&args, Some(tmp.path()));
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(tmp.path().join("lambda_sweep.csv")).unwrap();
    assert!(text.starts_with("lambda_re,lambda_im,r1_bits,r2_bits,sum_bits\n"));
    let rows = export::read_sweep(text.as_bytes()).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("sweep_summary.json")).unwrap()).unwrap();
    let best = rows.iter().max_by(|a, b| a.r1_bits.total_cmp(&b.r1_bits)).unwrap();
    assert!((best.lambda_re - summary["lambda_costa1"][0].as_f64().unwrap()).abs() < 1e-12);
    let worst = rows.iter().min_by(|a, b| a.r2_bits.total_cmp(&b.r2_bits)).unwrap();
    assert!((worst.lambda_re - summary["lambda_costa2"][0].as_f64().unwrap()).abs() < 1e-12);
    let traj = export::read_trajectory(fs::File::open(tmp.path().join("d_trajectory.csv")).unwrap()).unwrap();
    assert_eq!(traj.len(), rows.len());
    let roots = export::read_roots(fs::File::open(tmp.path().join("sum_rate_roots.csv")).unwrap()).unwrap();
    assert!(!roots.is_empty());
}

#[test]
fn maps_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["map", "--p1", "10", "--p2", "10", "--resolution", "21"], Some(tmp.path()));
    assert_eq!(code, 0);
    let rows = export::read_regime_map(fs::File::open(tmp.path().join("regime_map.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 21 * 21);
    assert!(rows.iter().all(|(_, b, r)| (r.weak == 1) == (*b <= 1.0)));

    let (code, out, _) = run(&["map", "--kind", "gap", "--powers", "1,100", "--resolution", "11"], Some(tmp.path()));
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    let rows = export::read_gap_map(fs::File::open(tmp.path().join("gap_condition_P100.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 121);
    assert!(rows.iter().all(|r| r.2 == 100.0));
}

#[test]
fn gap_report() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&with_channel("gap", &[]), Some(tmp.path()));
    assert_eq!(code, 0);
    assert!(out.starts_with("applicable: 1\nadditive_ok: 1\nmultiplicative_ok: 1\n"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("gap.json")).unwrap()).unwrap();
    assert!(v["additive_gap"].as_f64().unwrap() <= 1.0);
    assert!(v["corners"]["C"].is_object() || v["corners"]["C"].is_array());
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("scenario.json");
    fs::write(&cfg, r#"{"channel": {"a_re": -1, "b_mag": 2, "P1": 10, "P2": 10}, "outputs": {"format": "json"}}"#)
        .unwrap();
    let cfg = cfg.display().to_string();
    let (code, out, _) = run(&["classify", "--config", &cfg], None);
    assert_eq!(code, 0);
    assert!(out.contains("\"pdc\""));
    let (code, out, _) = run(&["classify", "--config", &cfg, "--format", "csv", "--b-mag", "0.5"], None);
    assert_eq!(code, 0);
    assert!(out.starts_with("flags: weak"));

    fs::write(tmp.path().join("bad.json"), r#"{"channel": {"a_re": 0, "b_mag": 2, "P1": 1, "P2": 1}, "extra": 1}"#)
        .unwrap();
    let bad = tmp.path().join("bad.json").display().to_string();
    assert_eq!(run(&["classify", "--config", &bad], None).0, 2);
    assert_eq!(run(&["classify", "--config", "/nonexistent/scenario.json"], None).0, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"], None).0, 2);
    assert_eq!(run(&["--help"], None).0, 0);
    assert_eq!(run(&["classify", "--b-mag", "2", "--p1", "-1", "--p2", "1"], None).0, 2);

    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("not_a_dir");
    fs::write(&file, "").unwrap();
    assert_eq!(run(&with_channel("gap", &[]), Some(&file)).0, 3);

    let (code, out, _) =
        run(&["verify", "--num-channels", "3", "--alpha-grid", "11", "--lambda-grid", "5", "--rate-tol", "-1"], None);
    assert_eq!(code, 4);
    assert!(out.ends_with("overall: FAIL\n"));
}

#[test]
fn binary_verify_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gcifc"))
        .args(["verify", "--num-channels", "20", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read(tmp.path().join("verify_report.txt")).unwrap(), out.stdout);
}
