use std::path::PathBuf;
use std::process::{Command, Output};

fn gk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gk")).args(args).output().expect("gk runs")
}

fn stdout(args: &[&str]) -> String {
    let out = gk(args);
    assert!(out.status.success(), "gk {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn vertex_marks(text: &str) -> usize {
    text.chars().filter(|c| matches!(c, 'o' | '@' | '*')).count()
}

#[test]
fn radius_two_window_is_a_cross() {
    let text = stdout(&["kenyon", "window", "--radius", "2", "--format", "ascii"]);
    assert_eq!(vertex_marks(&text), 9);
    assert_eq!(text.lines().nth(4).unwrap(), "o-o-@-o-o");
}

#[test]
fn ball_sizes() {
    assert_eq!(vertex_marks(&stdout(&["kenyon", "ball", "--level", "1", "--format", "ascii"])), 5);
    let doc = json(&["kenyon", "ball", "--level", "2"]);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 21);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 20);
    assert_eq!(doc["basepoint"], serde_json::json!([0, 0]));
}

#[test]
fn motif_kinds() {
    let doc = json(&["kenyon", "motif", "--level", "1", "--kind", "B0"]);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 7);
    let out = gk(&["kenyon", "motif", "--level", "0", "--kind", "D"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown motif"));
}

#[test]
fn bratteli_dot() {
    let dot = stdout(&["af", "bratteli", "--levels", "2", "--format", "dot"]);
    let nodes = dot.lines().map(|l| l.matches("[label=\"").count()).sum::<usize>() - dot.matches("->").count();
    assert_eq!(nodes, 1 + 7 + 7);
    for kind in ["A0", "A1", "A2", "A3", "B0", "B1", "C"] {
        let into = dot.lines().filter(|l| l.contains(&format!("-> \"{kind}_1\""))).count();
        assert_eq!(into, 5, "row {kind}");
    }
    let doc = json(&["af", "bratteli", "--levels", "2", "--format", "json"]);
    assert_eq!(doc["edges"][1].as_array().unwrap().len(), 35);
    assert_eq!(gk(&["af", "bratteli", "--levels", "2", "--format", "svg"]).status.code(), Some(2));
}

#[test]
fn histogram_at_level_nine() {
    let doc = json(&["measure", "histogram", "--level", "9", "--format", "json"]);
    let low = doc["valence_at_most_two"].as_f64().unwrap();
    assert!((low - 0.75).abs() < 0.01);
    assert_eq!(doc["histogram"]["counts"][2], 0);
}

#[test]
fn growth_and_frequency() {
    let doc = json(&["measure", "growth", "--level", "4", "--format", "json"]);
    let vols: Vec<u64> = doc.as_array().unwrap().iter().map(|r| r["volume"].as_u64().unwrap()).collect();
    assert_eq!(vols, vec![1, 5, 21, 85, 341]);
    let doc = json(&["measure", "freq", "--motif", "C", "--level", "3", "--format", "json"]);
    assert_eq!(doc["entries"][0]["count"], 21);
    assert_eq!(doc["entries"][0]["frequency"], "21/85");
}

#[test]
fn defect_accepts_negative_shift() {
    let doc = json(&["measure", "defect", "--motif", "C", "--shift", "-1,0", "--level", "4", "--format", "json"]);
    assert_eq!(doc["defect"], "1/341");
    assert_eq!(doc["shift_radius"], 1);
}

#[test]
fn encode_then_decode() {
    let pattern = stdout(&["code", "encode", "--letters", "3102310"]);
    let path = scratch("encoded.json", &pattern);
    let text = stdout(&["code", "decode", "--pattern", path.to_str().unwrap()]);
    let code = text.lines().next().unwrap().strip_prefix("code ").unwrap();
    assert!("3102310".starts_with(code) && code.len() >= 3, "decoded {code}");
}

#[test]
fn decode_rejects_a_junction() {
    let window = stdout(&["kenyon", "window", "--radius", "20"]);
    let path = scratch("junction.json", &window);
    let out = gk(&["code", "decode", "--pattern", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("valence 4"));
}

#[test]
fn odometer_wraps() {
    let text = stdout(&["code", "odometer", "--bits", "3", "--steps", "8"]);
    let words: Vec<&str> = text.lines().collect();
    assert_eq!(words.len(), 9);
    assert_eq!(words[1], "100");
    assert_eq!(words[8], "000");
    assert_eq!(gk(&["code", "odometer", "--bits", "3", "--steps", "1", "--start", "12"]).status.code(), Some(2));
}

#[test]
fn ends_of_periodic_codes() {
    assert!(stdout(&["code", "ends", "--period", "02"]).contains("ends 2"));
    assert!(stdout(&["code", "ends", "--period", "01"]).contains("ends 1"));
    assert_eq!(gk(&["code", "ends", "--period", "05"]).status.code(), Some(2));
}

#[test]
fn distances_and_copies() {
    let w = scratch("w16.json", &stdout(&["kenyon", "window", "--radius", "16"]));
    let w8 = scratch("w8.json", &stdout(&["kenyon", "window", "--radius", "8"]));
    let doc = json(&["gh", "dist", "--a", w.to_str().unwrap(), "--b", w8.to_str().unwrap(), "--format", "json"]);
    assert_eq!(doc["agreement_radius"], 8);
    assert_eq!(doc["upper_bound"], true);

    let star = scratch("star.json", &stdout(&["kenyon", "ball", "--level", "1"]));
    let copies = json(&["gh", "copies", "--pattern", star.to_str().unwrap(), "--host", w.to_str().unwrap(), "--format", "json"]);
    assert!(copies.as_array().unwrap().contains(&serde_json::json!([0, 0])));
}

#[test]
fn repetitivity_and_aperiodicity() {
    let doc = json(&["gh", "repetitivity", "--r", "3", "--radius", "63", "--format", "json"]);
    assert!(doc["repetitivity_radius"].as_u64().unwrap() >= 3);
    let doc = json(&["gh", "aperiodicity", "--max-norm", "8", "--radius", "31", "--format", "json"]);
    assert_eq!(doc["periodic_vectors"], serde_json::json!([]));
    assert_eq!(gk(&["gh", "aperiodicity", "--max-norm", "40", "--radius", "31"]).status.code(), Some(2));
}

#[test]
fn psi_and_class() {
    let w = scratch("w48.json", &stdout(&["kenyon", "window", "--radius", "48"]));
    let text = stdout(&["af", "psi", "--pattern", w.to_str().unwrap(), "--depth", "4"]);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("C_")));
    let doc = json(&["af", "class", "--pattern", w.to_str().unwrap(), "--level", "2", "--modified", "--format", "json"]);
    assert!(doc["offsets"].as_array().unwrap().contains(&serde_json::json!([4, 0])));
    let out = gk(&["af", "psi", "--pattern", w.to_str().unwrap(), "--depth", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn render_formats() {
    let star = scratch("render_star.json", &stdout(&["kenyon", "ball", "--level", "1"]));
    let p = star.to_str().unwrap();
    let svg = stdout(&["render", "--pattern", p, "--format", "svg", "--scale", "20"]);
    assert_eq!(svg.matches("<line ").count(), 4);
    let ascii = stdout(&["render", "--pattern", p, "--format", "ascii", "--highlight", "1,0", "-1,0"]);
    assert_eq!(ascii.lines().nth(2).unwrap(), "*-@-*");
    let canon = stdout(&["render", "--pattern", p, "--format", "json"]);
    assert_eq!(canon, std::fs::read_to_string(&star).unwrap());
    assert_eq!(gk(&["render", "--pattern", p, "--format", "png"]).status.code(), Some(2));
    assert_eq!(gk(&["render", "--pattern", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gk(&["kenyon", "ball"]).status.code(), Some(2));
    assert_eq!(gk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gk(&["code", "encode", "--letters", "0129"]).status.code(), Some(2));
    assert_eq!(gk(&["repro", "nonsense"]).status.code(), Some(2));
}

#[test]
fn repro_is_deterministic_across_threads() {
    let one = gk(&["--threads", "1", "repro", "metric", "--format", "json"]);
    let four = gk(&["--threads", "4", "repro", "metric", "--format", "json"]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.status.code(), four.status.code());
    let doc: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(doc["suite"], "metric");
    let ids: Vec<u64> = doc["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![10, 11]);
}

#[test]
fn repro_exit_status_follows_report() {
    let out = gk(&["repro", "coding", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let round_trip = doc["criteria"].as_array().unwrap().iter().find(|c| c["id"] == 2).unwrap();
    assert_eq!(round_trip["details"]["codes"], 1024);
    assert_eq!(out.status.code(), Some(if doc["passed"] == true { 0 } else { 1 }));

    let out = gk(&["repro", "measure", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let valence = doc["criteria"].as_array().unwrap().iter().find(|c| c["id"] == 4).unwrap();
    assert_eq!(valence["details"]["expected_valence_at_most_two"], 0.75);
    assert_eq!(out.status.code(), Some(if doc["passed"] == true { 0 } else { 1 }));
}
