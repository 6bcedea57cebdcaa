use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anomaly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn real(rows: &[&[f64]]) -> Value {
    json!(rows
        .iter()
        .map(|r| r.iter().map(|x| [*x, 0.0]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn diag(d: &[f64]) -> Value {
    let rows: Vec<Vec<f64>> = (0..d.len())
        .map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0.0 }).collect())
        .collect();
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    real(&refs)
}

fn write(name: &str, value: &Value) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn problem(h: Value, s: Value, dim: usize) -> Value {
    json!({ "schema_version": "1", "dim": dim, "H": h, "S": s })
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_of_three_level_example() {
    let v = run_json(&["spectrum", s(&fixture("three_level.json"))]);
    let sectors = v["sectors"].as_array().unwrap();
    assert_eq!(sectors.len(), 2);
    let mut mults: Vec<u64> = sectors.iter().map(|x| x["multiplicity"].as_u64().unwrap()).collect();
    mults.sort();
    assert_eq!(mults, [1, 2]);
    assert_eq!(v["commutant_dim"], 5);
    assert_eq!(v["nondegenerate"], false);
}

#[test]
fn zero_pair_is_one_sector() {
    let p = write("zero_pair.json", &problem(diag(&[0., 0., 0.]), diag(&[0., 0., 0.]), 3));
    let v = run_json(&["spectrum", s(&p)]);
    assert_eq!(v["sectors"].as_array().unwrap().len(), 1);
    assert_eq!(v["commutant_dim"], 9);
}

#[test]
fn non_commuting_input_is_rejected() {
    let h = real(&[&[1., 0.], &[0., -1.]]);
    let sx = real(&[&[0., 1.], &[1., 0.]]);
    let p = write("non_commuting.json", &problem(h, sx, 2));
    let out = run(&["spectrum", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    // ‖[σz, σx]‖_F = ‖2iσy‖_F = 2√2
    assert!(err.contains("2.828"), "{err}");
}

#[test]
fn non_hermitian_input_is_rejected() {
    let h = real(&[&[0., 1.], &[0., 0.]]);
    let p = write("non_hermitian.json", &problem(h, diag(&[0., 0.]), 2));
    assert_eq!(run(&["spectrum", s(&p)]).status.code(), Some(2));
}

#[test]
fn missing_file_and_bad_schema_are_validation_errors() {
    assert_eq!(run(&["spectrum", "/nonexistent/problem.json"]).status.code(), Some(2));
    let mut v = problem(diag(&[1., 0.]), diag(&[0., 1.]), 2);
    v["schema_version"] = json!("7");
    let p = write("bad_schema.json", &v);
    assert_eq!(run(&["spectrum", s(&p)]).status.code(), Some(2));
}

#[test]
fn cohomology_both_routes_agree() {
    let v = run_json(&["cohomology", "--method", "both", s(&fixture("three_level.json"))]);
    let want = json!({ "h0": 5, "h1": 10, "h2": 5 });
    assert_eq!(v["theorem"], want);
    assert_eq!(v["brute_force"], want);
    assert_eq!(v["agree"], true);

    let v = run_json(&["cohomology", "--method", "both", s(&fixture("nondegenerate.json"))]);
    assert_eq!(v["theorem"], json!({ "h0": 4, "h1": 8, "h2": 4 }));
    assert_eq!(v["agree"], true);
}

#[test]
fn brute_force_on_twelve_dimensions_is_fast() {
    let h: Vec<f64> = (0..12).map(|i| (i % 3) as f64).collect();
    let m: Vec<f64> = (0..12).map(|i| (i % 2) as f64).collect();
    let p = write("twelve.json", &problem(diag(&h), diag(&m), 12));
    let start = Instant::now();
    let v = run_json(&["cohomology", "--method", "brute", s(&p)]);
    assert!(start.elapsed().as_secs_f64() < 10.0);
    // six sectors of multiplicity two
    assert_eq!(v["brute_force"], json!({ "h0": 24, "h1": 48, "h2": 24 }));
}

#[test]
fn three_level_example_is_anomalous() {
    let v = run_json(&["anomaly", s(&fixture("three_level.json"))]);
    assert_eq!(v["anomaly"], true);
    assert_eq!(v["anomaly_order"], 2);
    let norm = v["obstruction"]["norm"].as_f64().unwrap();
    assert!((norm - 2f64.sqrt()).abs() < 1e-10, "{norm}");
    assert!(v["series"].is_null());
    assert!(v["feasibility_residual"].as_f64().unwrap() >= 1.4);
}

#[test]
fn solver_gauge_is_anomaly_free_until_shifted_by_the_commutant() {
    let v = run_json(&["anomaly", s(&fixture("three_level_solver_gauge.json"))]);
    assert_eq!(v["anomaly"], false);
    let solved = v["first_order"]["delta_S1"].clone();
    // add E₂₂, which commutes with both Ĥ and Ŝ
    let mut shifted = solved.clone();
    shifted[1][1][0] = json!(shifted[1][1][0].as_f64().unwrap() + 1.0);
    let mut input = v["input"].clone();
    input["delta_S1"] = shifted;
    let p = write("solver_gauge_shifted.json", &input);
    let shifted = run_json(&["anomaly", s(&p)]);
    let reference = run_json(&["anomaly", s(&fixture("three_level.json"))]);
    assert_eq!(shifted["anomaly"], true);
    let a = &shifted["obstruction"]["coefficients"];
    let b = &reference["obstruction"]["coefficients"];
    for (x, y) in a.as_array().unwrap().iter().zip(b.as_array().unwrap()) {
        assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-9);
    }
}

#[test]
fn cartan_perturbation_gives_an_exact_series() {
    let mut v = problem(diag(&[1., 1., 0.]), diag(&[1., 1., 2.]), 3);
    v["delta_H1"] = diag(&[0.3, -0.2, 0.7]);
    let p = write("cartan.json", &v);
    let r = run_json(&["anomaly", s(&p)]);
    assert_eq!(r["anomaly"], false);
    let series = &r["series"];
    assert_eq!(series["order"], 6);
    assert!(series["residual_slope"].is_null());
    for c in &series["delta_H"].as_array().unwrap()[2..] {
        let c: Vec<Vec<[f64; 2]>> = serde_json::from_value(c.clone()).unwrap();
        assert!(c.iter().flatten().flatten().all(|x| *x == 0.0));
    }
}

#[test]
fn two_sector_series_tail_has_slope_eight() {
    // the t⁷ tail coefficient vanishes when Ŝ is affine in Ĥ
    let r = run_json(&["anomaly", s(&fixture("unobstructed_degenerate.json"))]);
    assert_eq!(r["anomaly"], false);
    let slope = r["series"]["residual_slope"].as_f64().unwrap();
    assert!((slope - 8.0).abs() < 0.3, "{slope}");
    let profile = r["series"]["residual_profile"].as_array().unwrap();
    let last = profile.last().unwrap();
    assert_eq!(last[0].as_f64().unwrap(), 0.1);
    // ‖diag(1,1,0)‖_F = √2
    assert!(last[1].as_f64().unwrap() < 1e-7 * 2f64.sqrt());
}

#[test]
fn generic_series_tail_has_slope_seven() {
    let r = run_json(&["anomaly", s(&fixture("nondegenerate.json"))]);
    let slope = r["series"]["residual_slope"].as_f64().unwrap();
    assert!((slope - 7.0).abs() < 0.3, "{slope}");
    let residuals = r["series"]["order_residuals"].as_array().unwrap();
    assert!(residuals.iter().all(|x| x.as_f64().unwrap() < 1e-12));
}

#[test]
fn order_flag_sets_series_length_and_rejects_one() {
    let f = fixture("nondegenerate.json");
    let r = run_json(&["--order", "3", "anomaly", s(&f)]);
    assert_eq!(r["series"]["delta_H"].as_array().unwrap().len(), 4);
    assert_eq!(run(&["--order", "1", "anomaly", s(&f)]).status.code(), Some(2));
}

#[test]
fn report_round_trips_and_is_deterministic() {
    let f = fixture("unobstructed_degenerate.json");
    let first = run(&["--output", "json", "--seed", "11", "anomaly", s(&f)]);
    let second = run(&["--output", "json", "--seed", "11", "anomaly", s(&f)]);
    assert_eq!(first.stdout, second.stdout);
    let report = Path::new(env!("CARGO_TARGET_TMPDIR")).join("report.json");
    std::fs::write(&report, &first.stdout).unwrap();
    let again = run(&["--output", "json", "--seed", "11", "anomaly", s(&report)]);
    assert_eq!(first.stdout, again.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["gauge_check"]["passed"], true);
}

#[test]
fn anomaly_needs_a_perturbation() {
    let p = write("no_delta.json", &problem(diag(&[1., 0.]), diag(&[0., 1.]), 2));
    assert_eq!(run(&["anomaly", s(&p)]).status.code(), Some(2));
}

#[test]
fn text_output_names_the_verdict() {
    let out = run(&["anomaly", s(&fixture("three_level.json"))]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("anomaly: true"), "{text}");
}

#[test]
fn verma_check_passes_and_flags_the_control() {
    let v = run_json(&["verma-check", "--lambda", "-3/4", "--degree", "5"]);
    assert_eq!(v["cocycle"]["passed"], true);
    assert_eq!(v["negative_control"]["passed"], false);
    for r in v["relations"].as_array().unwrap() {
        assert_eq!(r["exact_below_truncation"], true);
    }
}

#[test]
fn verma_check_rejects_bad_arguments() {
    assert_eq!(run(&["verma-check", "--lambda", "1/0", "--degree", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verma-check", "--lambda", "1/2", "--degree", "2"]).status.code(), Some(2));
}
